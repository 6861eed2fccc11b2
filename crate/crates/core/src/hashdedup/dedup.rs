// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::structural::{hash_function, hash_module, HashMode};
use crate::corpus::manifest::{CorpusManifest, DedupStatus, HexU64};
use crate::corpus::parse_records;
use crate::irparse::IrModule;
use crate::language::LanguageTag;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LanguageDedup {
    pub total: usize,
    pub removed: usize,
    pub duplication_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DedupReport {
    pub mode: HashMode,
    pub total_modules: usize,
    /// Includes unprocessed records, which are never removed.
    pub kept: usize,
    pub removed: usize,
    pub unprocessed: usize,
    pub per_language: BTreeMap<LanguageTag, LanguageDedup>,
    pub bytes_before: u64,
    pub bytes_after: u64,
}

/// Module-level dedup over already parsed modules (`None` = unparseable).
/// The first record with a given hash, in manifest order, is kept. Any
/// previous dedup state is discarded, so reruns are idempotent.
pub fn dedup_parsed(
    manifest: &CorpusManifest,
    modules: &[Option<IrModule>],
    mode: HashMode,
) -> (CorpusManifest, DedupReport) {
    assert_eq!(manifest.records.len(), modules.len());
    let hashes: Vec<Option<u64>> = modules
        .iter()
        .map(|m| m.as_ref().map(|m| hash_module(m, mode).value))
        .collect();

    let mut out = manifest.clone();
    let mut first_seen: HashMap<u64, usize> = HashMap::new();
    let mut report = DedupReport {
        mode,
        total_modules: out.records.len(),
        kept: 0,
        removed: 0,
        unprocessed: 0,
        per_language: BTreeMap::new(),
        bytes_before: 0,
        bytes_after: 0,
    };
    for (i, (record, hash)) in out.records.iter_mut().zip(&hashes).enumerate() {
        let size = record.artifact.byte_size;
        report.bytes_before += size;
        let lang = report.per_language.entry(record.language_tag).or_insert(LanguageDedup {
            total: 0,
            removed: 0,
            duplication_rate: 0.0,
        });
        lang.total += 1;
        record.module_hash = hash.map(HexU64);
        record.dedup_status = match hash {
            None => {
                report.unprocessed += 1;
                DedupStatus::Unprocessed
            }
            Some(h) => {
                if first_seen.contains_key(h) {
                    lang.removed += 1;
                    DedupStatus::RemovedDuplicate
                } else {
                    first_seen.insert(*h, i);
                    DedupStatus::Kept
                }
            }
        };
        if record.dedup_status == DedupStatus::RemovedDuplicate {
            report.removed += 1;
        } else {
            report.kept += 1;
            report.bytes_after += size;
        }
    }
    for lang in report.per_language.values_mut() {
        lang.duplication_rate = lang.removed as f64 / lang.total as f64;
    }
    (out, report)
}

/// Read, parse and deduplicate every record under `root`.
pub fn dedup_corpus(manifest: &CorpusManifest, root: &Path, mode: HashMode) -> (CorpusManifest, DedupReport) {
    let modules: Vec<Option<IrModule>> = parse_records(root, &manifest.records)
        .into_iter()
        .map(|r| match r {
            Ok(m) => Some(m),
            Err(e) => {
                log::warn!("{e}");
                None
            }
        })
        .collect();
    dedup_parsed(manifest, &modules, mode)
}

/// Per-language multiset (kept as a sorted list) of defined-function hashes.
pub type FunctionHashIndex = BTreeMap<LanguageTag, Vec<u64>>;

pub fn function_hash_index_of<'a>(
    modules: impl IntoIterator<Item = (LanguageTag, &'a IrModule)>,
    mode: HashMode,
) -> FunctionHashIndex {
    let mut index = FunctionHashIndex::new();
    for (lang, module) in modules {
        let entry = index.entry(lang).or_default();
        entry.extend(module.definitions().map(|f| hash_function(f, mode).value));
    }
    for hashes in index.values_mut() {
        hashes.sort_unstable();
    }
    index
}

/// Function hashes of every live (not removed) and parseable record.
pub fn function_hash_index(manifest: &CorpusManifest, root: &Path, mode: HashMode) -> FunctionHashIndex {
    let live: Vec<_> = manifest.live_records().cloned().collect();
    let parsed = parse_records(root, &live);
    let pairs: Vec<(LanguageTag, IrModule)> = live
        .iter()
        .zip(parsed)
        .filter_map(|(r, m)| match m {
            Ok(m) => Some((r.language_tag, m)),
            Err(e) => {
                log::warn!("{e}");
                None
            }
        })
        .collect();
    function_hash_index_of(pairs.iter().map(|(l, m)| (*l, m)), mode)
}

/// Function-level duplication: counted, never removed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionDedupReport {
    pub mode: HashMode,
    pub total_functions: usize,
    pub unique_functions: usize,
    pub per_language: BTreeMap<LanguageTag, LanguageDedup>,
}

/// Within-language duplicates: every function after the first with the
/// same hash counts as removable.
pub fn function_dedup_report(index: &FunctionHashIndex, mode: HashMode) -> FunctionDedupReport {
    let mut per_language = BTreeMap::new();
    let mut total = 0;
    let mut unique = 0;
    for (lang, hashes) in index {
        let mut distinct = hashes.clone();
        distinct.dedup();
        let removed = hashes.len() - distinct.len();
        total += hashes.len();
        unique += distinct.len();
        let rate = if hashes.is_empty() { 0.0 } else { removed as f64 / hashes.len() as f64 };
        per_language.insert(*lang, LanguageDedup { total: hashes.len(), removed, duplication_rate: rate });
    }
    FunctionDedupReport { mode, total_functions: total, unique_functions: unique, per_language }
}
