// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::manifest::CorpusManifest;
use crate::corpus::parse_records;
use crate::irparse::IrModule;
use crate::language::LanguageTag;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpcodeCounts {
    pub language: LanguageTag,
    /// Mnemonic to count; unknown opcodes appear under their raw token.
    pub counts: BTreeMap<String, u64>,
    pub total: u64,
}

impl OpcodeCounts {
    pub fn new(language: LanguageTag) -> Self {
        OpcodeCounts { language, counts: BTreeMap::new(), total: 0 }
    }

    pub fn merge(&mut self, other: &OpcodeCounts) {
        for (op, n) in &other.counts {
            *self.counts.entry(op.clone()).or_default() += n;
        }
        self.total += other.total;
    }
}

/// Count every instruction by opcode. Debug intrinsic calls are skipped;
/// other intrinsics, lifetime markers included, count as `call`.
pub fn count_opcodes(module: &IrModule, language: LanguageTag) -> OpcodeCounts {
    let mut c = OpcodeCounts::new(language);
    for f in module.definitions() {
        for inst in f.counted_instructions() {
            *c.counts.entry(inst.opcode.mnemonic().to_string()).or_default() += 1;
            c.total += 1;
        }
    }
    c
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopK {
    /// Count descending, name ascending on ties.
    pub entries: Vec<(String, u64)>,
    /// Everything outside the top `k`.
    pub other: u64,
    pub total: u64,
}

pub fn top_k(counts: &BTreeMap<String, u64>, k: usize) -> TopK {
    let mut entries: Vec<(String, u64)> = counts.iter().map(|(o, n)| (o.clone(), *n)).collect();
    entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let total = entries.iter().map(|e| e.1).sum();
    let other = entries.iter().skip(k).map(|e| e.1).sum();
    entries.truncate(k);
    TopK { entries, other, total }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpcodeDistribution {
    pub k: usize,
    pub per_language: BTreeMap<LanguageTag, TopK>,
    pub aggregate: TopK,
    /// Complete per-language counts behind the top-k tables.
    pub per_language_counts: BTreeMap<LanguageTag, BTreeMap<String, u64>>,
}

/// Top-`k` opcodes per language and over the whole corpus.
pub fn opcode_distribution_of(counts: &[OpcodeCounts], k: usize) -> OpcodeDistribution {
    let mut per_lang: BTreeMap<LanguageTag, OpcodeCounts> = BTreeMap::new();
    let mut all = OpcodeCounts::new(LanguageTag::Other);
    for c in counts {
        per_lang.entry(c.language).or_insert_with(|| OpcodeCounts::new(c.language)).merge(c);
        all.merge(c);
    }
    OpcodeDistribution {
        k,
        per_language: per_lang.iter().map(|(l, c)| (*l, top_k(&c.counts, k))).collect(),
        aggregate: top_k(&all.counts, k),
        per_language_counts: per_lang.into_iter().map(|(l, c)| (l, c.counts)).collect(),
    }
}

/// Opcode counts of every live, parseable record.
pub fn corpus_opcode_counts(manifest: &CorpusManifest, root: &Path) -> Vec<OpcodeCounts> {
    let live: Vec<_> = manifest.live_records().cloned().collect();
    live.iter()
        .zip(parse_records(root, &live))
        .filter_map(|(r, m)| match m {
            Ok(m) => Some(count_opcodes(&m, r.language_tag)),
            Err(e) => {
                log::warn!("{e}");
                None
            }
        })
        .collect()
}

pub fn opcode_distribution(manifest: &CorpusManifest, root: &Path, k: usize) -> OpcodeDistribution {
    opcode_distribution_of(&corpus_opcode_counts(manifest, root), k)
}
