// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};

use walkdir::WalkDir;

use super::elf::{extract_embedded_bitcode, is_bitcode, is_elf, ElfFile};
use super::manifest::{BitcodeArtifact, Encoding, ExtractionStrategy};
use crate::error::{Error, Result};

/// One harvestable module found in a build tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoundModule {
    /// Path of the containing file (object or bitcode), absolute or
    /// relative as the root was given.
    pub file: PathBuf,
    pub artifact: BitcodeArtifact,
}

/// Find IR in a build tree, sorted by path. Embedded-section scanning only
/// considers ELF relocatable objects; raw-file scanning accepts any file
/// starting with the bitcode magic. Unreadable files are skipped with a
/// warning.
pub fn scan_build_tree(
    root: &Path,
    strategy: ExtractionStrategy,
    section_names: &[&str],
    origin_package: &str,
) -> Result<Vec<FoundModule>> {
    if !root.exists() {
        return Err(Error::NotFound(format!("build tree {}", root.display())));
    }
    let mut out = Vec::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = match entry {
            Ok(e) => e,
            Err(e) => {
                log::warn!("skipping unreadable entry: {e}");
                continue;
            }
        };
        if !entry.file_type().is_file() {
            continue;
        }
        let path = entry.path();
        let bytes = match std::fs::read(path) {
            Ok(b) => b,
            Err(e) => {
                log::warn!("skipping {}: {e}", path.display());
                continue;
            }
        };
        let payload_size = match strategy {
            ExtractionStrategy::RawFile => is_bitcode(&bytes).then_some(bytes.len() as u64),
            ExtractionStrategy::EmbeddedSection => {
                if !is_elf(&bytes) || !ElfFile::parse(&bytes).is_ok_and(|e| e.is_relocatable()) {
                    continue;
                }
                match extract_embedded_bitcode(&bytes, section_names) {
                    Ok(p) => Some(p.len() as u64),
                    Err(Error::NotFound(_)) => None,
                    Err(e) => {
                        log::warn!("skipping {}: {e}", path.display());
                        None
                    }
                }
            }
        };
        if let Some(size) = payload_size {
            out.push(found(root, path, Encoding::Bitcode, size, strategy, origin_package));
        }
    }
    Ok(out)
}

/// Textual `.ll` files in a tree, sorted by path.
pub fn scan_textual(root: &Path, origin_package: &str) -> Vec<FoundModule> {
    WalkDir::new(root)
        .sort_by_file_name()
        .into_iter()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_type().is_file() && e.path().extension().is_some_and(|x| x == "ll"))
        .filter_map(|e| {
            let size = e.metadata().ok()?.len();
            Some(found(root, e.path(), Encoding::Textual, size, ExtractionStrategy::RawFile, origin_package))
        })
        .collect()
}

fn found(
    root: &Path,
    path: &Path,
    encoding: Encoding,
    byte_size: u64,
    strategy: ExtractionStrategy,
    origin_package: &str,
) -> FoundModule {
    let rel = path.strip_prefix(root).unwrap_or(path);
    FoundModule {
        file: path.to_path_buf(),
        artifact: BitcodeArtifact {
            origin_package: origin_package.to_string(),
            path: rel.to_string_lossy().replace('\\', "/"),
            encoding,
            byte_size,
            extraction_strategy: strategy,
        },
    }
}

/// Bytes of the module a [`FoundModule`] refers to.
pub fn read_payload(found: &FoundModule, section_names: &[&str]) -> Result<Vec<u8>> {
    let bytes = std::fs::read(&found.file).map_err(|e| Error::io(&found.file, e))?;
    match found.artifact.extraction_strategy {
        ExtractionStrategy::EmbeddedSection => extract_embedded_bitcode(&bytes, section_names),
        ExtractionStrategy::RawFile => Ok(bytes),
    }
}
