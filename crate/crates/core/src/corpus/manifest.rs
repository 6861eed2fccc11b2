// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, IoContext, Result};
use crate::language::LanguageTag;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const TOOL_VERSION: &str = concat!("ir-forge ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    Bitcode,
    Textual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtractionStrategy {
    EmbeddedSection,
    RawFile,
}

impl FromStr for ExtractionStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "embedded-section" | "embedded" => Ok(ExtractionStrategy::EmbeddedSection),
            "raw-file" | "raw" => Ok(ExtractionStrategy::RawFile),
            other => Err(Error::Validation(format!("unknown extraction strategy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitcodeArtifact {
    pub origin_package: String,
    /// Relative to the corpus root, `/`-separated.
    pub path: String,
    pub encoding: Encoding,
    pub byte_size: u64,
    pub extraction_strategy: ExtractionStrategy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DedupStatus {
    Kept,
    RemovedDuplicate,
    Unprocessed,
}

/// A 64-bit hash written as 16 lowercase hex digits, since JSON consumers
/// commonly lose precision on integers above 2^53.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HexU64(pub u64);

impl fmt::Display for HexU64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

impl Serialize for HexU64 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HexU64 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        u64::from_str_radix(s.trim_start_matches("0x"), 16)
            .map(HexU64)
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleRecord {
    pub artifact: BitcodeArtifact,
    pub language_tag: LanguageTag,
    pub module_hash: Option<HexU64>,
    pub dedup_status: DedupStatus,
    /// Size of the textual form; set once the module has been disassembled.
    pub text_size: Option<u64>,
}

impl ModuleRecord {
    pub fn new(artifact: BitcodeArtifact, language_tag: LanguageTag) -> Self {
        let text_size = match artifact.encoding {
            Encoding::Textual => Some(artifact.byte_size),
            Encoding::Bitcode => None,
        };
        ModuleRecord {
            artifact,
            language_tag,
            module_hash: None,
            dedup_status: DedupStatus::Unprocessed,
            text_size,
        }
    }

    /// Corpus-relative path of the textual IR, if it exists.
    pub fn text_path(&self) -> Option<String> {
        match self.artifact.encoding {
            Encoding::Textual => Some(self.artifact.path.clone()),
            Encoding::Bitcode => self.text_size.map(|_| textual_sibling(&self.artifact.path)),
        }
    }

    pub fn read_text(&self, root: &Path) -> Result<String> {
        let rel = self
            .text_path()
            .ok_or_else(|| Error::NotFound(format!("{} has not been disassembled", self.artifact.path)))?;
        let path = root.join(&rel);
        std::fs::read_to_string(&path).at(path)
    }
}

/// `a/b/3.bc` becomes `a/b/3.ll`.
pub fn textual_sibling(path: &str) -> String {
    match path.strip_suffix(".bc") {
        Some(stem) => format!("{stem}.ll"),
        None => format!("{path}.ll"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoteKind {
    Failed,
    Skipped,
    Partial,
}

/// Per-package build outcome that did not end in a clean success.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BuildNote {
    pub package: String,
    pub kind: NoteKind,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub records: Vec<ModuleRecord>,
    pub created_at: String,
    pub tool_version: String,
    #[serde(default)]
    pub build_notes: Vec<BuildNote>,
}

impl Default for CorpusManifest {
    fn default() -> Self {
        CorpusManifest::new(Vec::new())
    }
}

impl CorpusManifest {
    pub fn new(mut records: Vec<ModuleRecord>) -> Self {
        records.sort_by(|a, b| {
            (&a.artifact.origin_package, &a.artifact.path).cmp(&(&b.artifact.origin_package, &b.artifact.path))
        });
        CorpusManifest {
            records,
            created_at: timestamp(),
            tool_version: TOOL_VERSION.to_string(),
            build_notes: Vec::new(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).at(path)?;
        let manifest: CorpusManifest = serde_json::from_str(&text)?;
        manifest.validate()?;
        Ok(manifest)
    }

    /// Load `<root>/manifest.json`.
    pub fn load_from(root: &Path) -> Result<Self> {
        Self::load(&root.join(MANIFEST_FILE))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text).at(path)
    }

    pub fn save_to(&self, root: &Path) -> Result<PathBuf> {
        let path = root.join(MANIFEST_FILE);
        self.save(&path)?;
        Ok(path)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for r in &self.records {
            if !seen.insert(r.artifact.path.as_str()) {
                return Err(Error::Validation(format!("duplicate record path {}", r.artifact.path)));
            }
            if r.dedup_status == DedupStatus::RemovedDuplicate && r.module_hash.is_none() {
                return Err(Error::Validation(format!(
                    "{} is marked removed without a module hash",
                    r.artifact.path
                )));
            }
        }
        Ok(())
    }

    pub fn count_by_language(&self) -> BTreeMap<LanguageTag, usize> {
        let mut out = BTreeMap::new();
        for r in &self.records {
            *out.entry(r.language_tag).or_default() += 1;
        }
        out
    }

    /// Records not marked as removed duplicates.
    pub fn live_records(&self) -> impl Iterator<Item = &ModuleRecord> {
        self.records
            .iter()
            .filter(|r| r.dedup_status != DedupStatus::RemovedDuplicate)
    }
}

/// RFC 3339 UTC timestamp. `SOURCE_DATE_EPOCH` pins it for reproducible runs.
pub fn timestamp() -> String {
    let pinned = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| chrono::DateTime::from_timestamp(secs, 0));
    pinned
        .unwrap_or_else(chrono::Utc::now)
        .to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}
