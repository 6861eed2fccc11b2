// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::manifest::{CorpusManifest, Encoding, ModuleRecord};
use crate::language::LanguageTag;

/// Text-to-bitcode expansion reported for the full published corpus; shown
/// next to measured ratios for comparison only.
pub const REFERENCE_TEXT_TO_BITCODE_RATIO: f64 = 4.6;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SizeRow {
    pub modules: usize,
    /// Bytes of bitcode-encoded records.
    pub bitcode_bytes: u64,
    /// Bytes of textual IR, for every record whose text size is known.
    pub text_bytes: u64,
    /// Text bytes over bitcode bytes, restricted to bitcode records that
    /// have been disassembled. Absent when there are none.
    pub text_to_bitcode_ratio: Option<f64>,
    #[serde(skip)]
    paired: (u64, u64),
}

impl SizeRow {
    fn add(&mut self, r: &ModuleRecord) {
        self.modules += 1;
        if let Some(t) = r.text_size {
            self.text_bytes += t;
        }
        if r.artifact.encoding == Encoding::Bitcode {
            self.bitcode_bytes += r.artifact.byte_size;
            if let Some(t) = r.text_size {
                self.paired.0 += t;
                self.paired.1 += r.artifact.byte_size;
            }
        }
    }

    fn finish(&mut self) {
        self.text_to_bitcode_ratio = (self.paired.1 > 0).then(|| self.paired.0 as f64 / self.paired.1 as f64);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeReport {
    pub per_language: BTreeMap<LanguageTag, SizeRow>,
    pub total: SizeRow,
    pub reference_ratio: f64,
}

/// Size accounting over every record in the manifest, duplicates included.
pub fn corpus_size_report(manifest: &CorpusManifest) -> SizeReport {
    let mut per_language: BTreeMap<LanguageTag, SizeRow> = BTreeMap::new();
    let mut total = SizeRow::default();
    for r in &manifest.records {
        per_language.entry(r.language_tag).or_default().add(r);
        total.add(r);
    }
    per_language.values_mut().for_each(SizeRow::finish);
    total.finish();
    SizeReport {
        per_language,
        total,
        reference_ratio: REFERENCE_TEXT_TO_BITCODE_RATIO,
    }
}
