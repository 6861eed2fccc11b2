// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use rayon::prelude::*;

use super::build::{build_package, BuildResult, BuildStatus, Toolchain};
use super::elf::DEFAULT_SECTION_NAMES;
use super::manifest::{BuildNote, CorpusManifest, Encoding, ExtractionStrategy, ModuleRecord, NoteKind};
use super::package::{Ecosystem, PackageDescriptor};
use super::scan::{read_payload, scan_build_tree, scan_textual, FoundModule};
use super::schedule::topo_schedule;
use crate::error::{Error, IoContext, Result};
use crate::language::LanguageTag;

pub const WORK_DIR: &str = ".work";

/// Build every package wave by wave with at most `parallelism` concurrent
/// builds, harvest IR into `<out_dir>/<package>/<n>.bc` (or `.ll`), and
/// write `<out_dir>/manifest.json`. Per-package problems end up in the
/// manifest's build notes.
pub fn run_corpus_build(
    packages: &[PackageDescriptor],
    toolchain: &Toolchain,
    parallelism: usize,
    out_dir: &Path,
) -> Result<CorpusManifest> {
    if parallelism == 0 {
        return Err(Error::Validation("parallelism must be at least 1".into()));
    }
    let waves = topo_schedule(packages)?;
    std::fs::create_dir_all(out_dir).at(out_dir)?;
    let work = out_dir.join(WORK_DIR);
    std::fs::create_dir_all(&work).at(&work)?;

    let by_name: BTreeMap<&str, &PackageDescriptor> = packages.iter().map(|p| (p.name.as_str(), p)).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| Error::Validation(format!("thread pool: {e}")))?;

    let mut unusable: HashSet<String> = HashSet::new();
    let mut records = Vec::new();
    let mut notes = Vec::new();
    for wave in waves {
        let outcomes: Vec<(Vec<ModuleRecord>, Vec<BuildNote>)> = pool.install(|| {
            wave.par_iter()
                .map(|name| {
                    let desc = by_name[name.as_str()];
                    if let Some(dep) = desc.dependencies.iter().find(|d| unusable.contains(*d)) {
                        let note = BuildNote {
                            package: name.clone(),
                            kind: NoteKind::Skipped,
                            reason: format!("dependency {dep} did not build"),
                        };
                        return (Vec::new(), vec![note]);
                    }
                    let result = build_package(desc, toolchain, &work);
                    harvest_result(desc, &result, out_dir)
                })
                .collect()
        });
        for (name, (recs, ns)) in wave.iter().zip(outcomes) {
            if ns.iter().any(|n| n.kind != NoteKind::Partial) {
                unusable.insert(name.clone());
            }
            records.extend(recs);
            notes.extend(ns);
        }
    }

    let mut manifest = CorpusManifest::new(records);
    notes.sort();
    manifest.build_notes = notes;
    manifest.save_to(out_dir)?;
    Ok(manifest)
}

fn harvest_result(desc: &PackageDescriptor, result: &BuildResult, out_dir: &Path) -> (Vec<ModuleRecord>, Vec<BuildNote>) {
    let note = |kind, reason: String| BuildNote { package: desc.name.clone(), kind, reason };
    if let BuildStatus::Skipped(reason) = &result.status {
        return (Vec::new(), vec![note(NoteKind::Skipped, reason.clone())]);
    }
    let failed = matches!(result.status, BuildStatus::Failed(_));
    if failed {
        let log_path = out_dir.join(WORK_DIR).join(format!("{}.log", desc.name));
        if let Err(e) = std::fs::write(&log_path, &result.log) {
            log::warn!("could not write {}: {e}", log_path.display());
        }
    }
    let harvested = match result.build_tree.exists() {
        true => harvest(desc, &result.build_tree, out_dir),
        false => Ok(Vec::new()),
    };
    let mut notes = Vec::new();
    let records = match harvested {
        Ok(r) => r,
        Err(e) => {
            notes.push(note(NoteKind::Failed, format!("harvest failed: {e}")));
            Vec::new()
        }
    };
    if let BuildStatus::Failed(reason) = &result.status {
        if records.is_empty() {
            notes.push(note(NoteKind::Failed, reason.clone()));
        } else {
            notes.push(note(NoteKind::Partial, format!("{reason}; {} modules harvested", records.len())));
        }
    }
    (records, notes)
}

pub fn strategy_for(eco: Ecosystem) -> ExtractionStrategy {
    if eco.is_c_family() {
        ExtractionStrategy::EmbeddedSection
    } else {
        ExtractionStrategy::RawFile
    }
}

/// Copy every module found in `build_tree` into `<out_dir>/<package>/`.
pub fn harvest(desc: &PackageDescriptor, build_tree: &Path, out_dir: &Path) -> Result<Vec<ModuleRecord>> {
    let options = HarvestOptions {
        strategy: strategy_for(desc.ecosystem),
        section_names: DEFAULT_SECTION_NAMES.iter().map(|s| s.to_string()).collect(),
        include_textual: matches!(desc.ecosystem, Ecosystem::Prebuilt | Ecosystem::Swiftpm),
    };
    harvest_with(&desc.name, desc.language_tag, build_tree, &options, out_dir)
}

#[derive(Debug, Clone)]
pub struct HarvestOptions {
    pub strategy: ExtractionStrategy,
    pub section_names: Vec<String>,
    /// Also pick up `.ll` files.
    pub include_textual: bool,
}

/// Scan `build_tree` and copy what it finds to `<out_dir>/<package>/<n>.bc`
/// (or `.ll`), replacing any previous harvest of that package.
pub fn harvest_with(
    package: &str,
    language: LanguageTag,
    build_tree: &Path,
    options: &HarvestOptions,
    out_dir: &Path,
) -> Result<Vec<ModuleRecord>> {
    let names: Vec<&str> = options.section_names.iter().map(String::as_str).collect();
    let mut found: Vec<FoundModule> = scan_build_tree(build_tree, options.strategy, &names, package)?;
    if options.include_textual {
        found.extend(scan_textual(build_tree, package));
        found.sort_by(|a, b| a.artifact.path.cmp(&b.artifact.path));
    }
    let pkg_dir = out_dir.join(package);
    if pkg_dir.exists() {
        std::fs::remove_dir_all(&pkg_dir).at(&pkg_dir)?;
    }
    if found.is_empty() {
        return Ok(Vec::new());
    }
    std::fs::create_dir_all(&pkg_dir).at(&pkg_dir)?;
    let mut records = Vec::with_capacity(found.len());
    for (n, f) in found.iter().enumerate() {
        let bytes = read_payload(f, &names)?;
        let ext = match f.artifact.encoding {
            Encoding::Bitcode => "bc",
            Encoding::Textual => "ll",
        };
        let rel = format!("{package}/{n}.{ext}");
        let dest = out_dir.join(&rel);
        std::fs::write(&dest, &bytes).at(&dest)?;
        let mut artifact = f.artifact.clone();
        artifact.path = rel;
        artifact.byte_size = bytes.len() as u64;
        records.push(ModuleRecord::new(artifact, language));
    }
    Ok(records)
}
