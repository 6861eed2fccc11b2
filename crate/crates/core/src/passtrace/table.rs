// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::banner::{PassEvent, PassStatus};
use crate::language::LanguageTag;

/// Events of one optimizer invocation (one function or module).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetEvents {
    pub language: LanguageTag,
    pub target: String,
    pub events: Vec<PassEvent>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LanguagePassStat {
    pub targets_seen: usize,
    pub targets_changed: usize,
    /// Absent when the pass never ran on this language.
    pub frequency: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MutationRow {
    pub pass_name: String,
    pub per_language: BTreeMap<LanguageTag, LanguagePassStat>,
}

impl MutationRow {
    pub fn max_frequency(&self) -> Option<f64> {
        self.per_language
            .values()
            .filter_map(|s| s.frequency)
            .fold(None, |m, f| Some(m.map_or(f, |m: f64| m.max(f))))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MutationTable {
    pub languages: Vec<LanguageTag>,
    pub rows: Vec<MutationRow>,
}

/// Fraction of targets each pass changed, per language. A target counts as
/// seen by a pass when the pass ran on it (any changed or unchanged event)
/// and as changed when any event changed it. Ignored events count for
/// nothing. With `per_occurrence`, repeated runs of a pass are split into
/// `Pass#1`, `Pass#2`, ... by their order on each IR unit.
pub fn mutation_frequency(targets: &[TargetEvents], per_occurrence: bool) -> MutationTable {
    let languages: BTreeSet<LanguageTag> = targets.iter().map(|t| t.language).collect();
    // (pass, language) -> (seen, changed)
    let mut tally: BTreeMap<String, BTreeMap<LanguageTag, (usize, usize)>> = BTreeMap::new();
    for t in targets {
        let mut verdict: BTreeMap<String, bool> = BTreeMap::new();
        let mut occurrences: HashMap<(&str, &str), usize> = HashMap::new();
        for e in &t.events {
            if e.status == PassStatus::Ignored {
                continue;
            }
            let key = if per_occurrence {
                let n = occurrences.entry((&e.pass_name, &e.target)).or_default();
                *n += 1;
                format!("{}#{n}", e.pass_name)
            } else {
                e.pass_name.clone()
            };
            let changed = verdict.entry(key).or_insert(false);
            *changed |= e.status == PassStatus::Changed;
        }
        for (pass, changed) in verdict {
            let entry = tally.entry(pass).or_default().entry(t.language).or_default();
            entry.0 += 1;
            entry.1 += usize::from(changed);
        }
    }

    let mut rows: Vec<MutationRow> = tally
        .into_iter()
        .map(|(pass_name, by_lang)| MutationRow {
            per_language: languages
                .iter()
                .map(|&l| {
                    let (seen, changed) = by_lang.get(&l).copied().unwrap_or((0, 0));
                    let stat = LanguagePassStat {
                        targets_seen: seen,
                        targets_changed: changed,
                        frequency: (seen > 0).then(|| changed as f64 / seen as f64),
                    };
                    (l, stat)
                })
                .collect(),
            pass_name,
        })
        .collect();
    rows.sort_by(|a, b| {
        let fa = a.max_frequency().unwrap_or(-1.0);
        let fb = b.max_frequency().unwrap_or(-1.0);
        fb.total_cmp(&fa).then_with(|| a.pass_name.cmp(&b.pass_name))
    });
    MutationTable {
        languages: languages.into_iter().collect(),
        rows,
    }
}
