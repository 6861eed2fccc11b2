// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::vector::{extract_features, FeatureVector};
use crate::corpus::manifest::CorpusManifest;
use crate::corpus::parse_records;
use crate::hashdedup::fnv::fnv1a64;
use crate::irparse::IrModule;
use crate::language::LanguageTag;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FunctionRef {
    pub language: LanguageTag,
    /// Corpus-relative module path.
    pub module: String,
    pub function: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSample {
    pub function: FunctionRef,
    pub features: FeatureVector,
}

/// Uniform sample of `min(n, population)` distinct indices, ascending.
pub fn sample_indices(population: usize, n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = rand::seq::index::sample(&mut rng, population, n.min(population)).into_vec();
    picked.sort_unstable();
    picked
}

/// Per-language stream seed, so adding a language never perturbs the
/// samples of the others.
pub fn language_seed(seed: u64, lang: LanguageTag) -> u64 {
    seed ^ fnv1a64(lang.as_str().as_bytes())
}

/// Sample up to `n` defined functions per language from already parsed
/// modules and compute their features. Functions whose CFG cannot be built
/// are dropped with a warning. Output is ordered by language, then by
/// position in the population.
pub fn sample_parsed(
    modules: &[(LanguageTag, String, IrModule)],
    n: usize,
    seed: u64,
) -> Vec<FeatureSample> {
    let mut population: BTreeMap<LanguageTag, Vec<(usize, usize)>> = BTreeMap::new();
    for (mi, (lang, _, module)) in modules.iter().enumerate() {
        let pop = population.entry(*lang).or_default();
        for (fi, f) in module.functions.iter().enumerate() {
            if f.is_definition {
                pop.push((mi, fi));
            }
        }
    }
    let mut out = Vec::new();
    for (lang, pop) in population {
        for idx in sample_indices(pop.len(), n, language_seed(seed, lang)) {
            let (mi, fi) = pop[idx];
            let (_, path, module) = &modules[mi];
            let func = &module.functions[fi];
            match extract_features(func) {
                Ok(features) => out.push(FeatureSample {
                    function: FunctionRef {
                        language: lang,
                        module: path.clone(),
                        function: func.name.clone(),
                    },
                    features,
                }),
                Err(e) => log::warn!("{path} @{}: {e}", func.name),
            }
        }
    }
    out
}

/// Sample from the live (non-duplicate) records of a corpus.
pub fn sample_functions(manifest: &CorpusManifest, root: &Path, n: usize, seed: u64) -> Vec<FeatureSample> {
    let live: Vec<_> = manifest.live_records().cloned().collect();
    let modules: Vec<(LanguageTag, String, IrModule)> = live
        .iter()
        .zip(parse_records(root, &live))
        .filter_map(|(r, m)| match m {
            Ok(m) => Some((r.language_tag, r.artifact.path.clone(), m)),
            Err(e) => {
                log::warn!("{e}");
                None
            }
        })
        .collect();
    sample_parsed(&modules, n, seed)
}
