// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bpe::{train_bpe, BpeModel, Encoder};
use crate::corpus::manifest::{CorpusManifest, ModuleRecord};
use crate::error::{Error, Result};
use crate::features::sample::{language_seed, sample_indices};
use crate::language::LanguageTag;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageSample {
    pub population: usize,
    pub drawn: usize,
    /// The request exceeded the population, so all of it was used.
    pub capped: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleDescription {
    pub per_language_requested: usize,
    pub seed: u64,
    pub per_language: BTreeMap<LanguageTag, LanguageSample>,
    /// Corpus-relative paths of the sampled modules, in sample order.
    pub modules: Vec<String>,
}

/// Live records that have textual IR, grouped by language in manifest order.
fn text_population(manifest: &CorpusManifest) -> BTreeMap<LanguageTag, Vec<&ModuleRecord>> {
    let mut pop: BTreeMap<LanguageTag, Vec<&ModuleRecord>> = BTreeMap::new();
    for r in manifest.live_records().filter(|r| r.text_path().is_some()) {
        pop.entry(r.language_tag).or_default().push(r);
    }
    pop
}

/// Uniformly sample up to `per_language` modules per language. Texts come
/// back grouped by language, then by manifest position.
pub fn draw_training_sample(
    manifest: &CorpusManifest,
    root: &Path,
    per_language: usize,
    seed: u64,
) -> Result<(Vec<String>, SampleDescription)> {
    if per_language == 0 {
        return Err(Error::Validation("sample size per language must be positive".into()));
    }
    let mut desc = SampleDescription {
        per_language_requested: per_language,
        seed,
        per_language: BTreeMap::new(),
        modules: Vec::new(),
    };
    let mut texts = Vec::new();
    for (lang, records) in text_population(manifest) {
        let picked = sample_indices(records.len(), per_language, language_seed(seed, lang));
        desc.per_language.insert(
            lang,
            LanguageSample { population: records.len(), drawn: picked.len(), capped: per_language > records.len() },
        );
        for i in picked {
            texts.push(records[i].read_text(root)?);
            desc.modules.push(records[i].artifact.path.clone());
        }
    }
    Ok((texts, desc))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VocabCount {
    pub vocab_size: usize,
    pub merges: usize,
    pub token_count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenCountReport {
    pub counts: Vec<VocabCount>,
    pub sample: SampleDescription,
    pub modules_counted: usize,
    pub modules_skipped: usize,
}

/// Token totals over texts, counted in parallel with one encoder per
/// worker.
pub fn count_texts(model: &BpeModel, texts: &[String]) -> u64 {
    texts
        .par_iter()
        .fold(|| (Encoder::new(model), 0u64), |(mut enc, n), t| {
            let c = enc.count(t);
            (enc, n + c)
        })
        .map(|(_, n)| n)
        .sum()
}

/// Train once at the largest vocabulary and derive the smaller models by
/// truncating the merge list, which is exactly what training each size
/// separately on the same sample produces.
pub fn train_for_sizes(texts: &[String], vocab_sizes: &[usize]) -> Result<Vec<BpeModel>> {
    let max = *vocab_sizes
        .iter()
        .max()
        .ok_or_else(|| Error::Validation("no vocabulary sizes given".into()))?;
    let full = train_bpe(texts.iter().map(String::as_str), max)?;
    vocab_sizes.iter().map(|&v| full.truncated(v)).collect()
}

/// Train on a per-language sample and count every live module per
/// vocabulary size. Unreadable modules are skipped and tallied.
pub fn corpus_token_count(
    manifest: &CorpusManifest,
    root: &Path,
    vocab_sizes: &[usize],
    per_language: usize,
    seed: u64,
) -> Result<(TokenCountReport, Vec<BpeModel>)> {
    let (sample, desc) = draw_training_sample(manifest, root, per_language, seed)?;
    let models = train_for_sizes(&sample, vocab_sizes)?;
    let live: Vec<&ModuleRecord> = manifest.live_records().collect();
    let loaded: Vec<Option<String>> = live
        .par_iter()
        .map(|r| r.read_text(root).map_err(|e| log::warn!("{e}")).ok())
        .collect();
    let texts: Vec<String> = loaded.iter().flatten().cloned().collect();
    let counts = models
        .iter()
        .map(|m| VocabCount {
            vocab_size: m.vocab_size_target,
            merges: m.merges.len(),
            token_count: count_texts(m, &texts),
        })
        .collect();
    let report = TokenCountReport {
        counts,
        sample: desc,
        modules_counted: texts.len(),
        modules_skipped: loaded.len() - texts.len(),
    };
    Ok((report, models))
}
