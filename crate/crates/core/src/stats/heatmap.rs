// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::hashdedup::FunctionHashIndex;
use crate::language::LanguageTag;

pub const HEATMAP_DEFINITION: &str = "row-normalized: cell(a,b) = |distinct(H_a) & distinct(H_b)| / |distinct(H_a)| for a != b; \
     cell(a,a) = 1 - |distinct(H_a)| / |H_a|";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DuplicationMatrix {
    pub languages: Vec<LanguageTag>,
    /// `cells[row][col]`; absent when the row language has no functions.
    pub cells: Vec<Vec<Option<f64>>>,
    pub definition: String,
}

impl DuplicationMatrix {
    pub fn cell(&self, row: LanguageTag, col: LanguageTag) -> Option<f64> {
        let r = self.languages.iter().position(|&l| l == row)?;
        let c = self.languages.iter().position(|&l| l == col)?;
        self.cells[r][c]
    }

    pub fn is_empty(&self) -> bool {
        self.languages.is_empty()
    }
}

pub fn duplication_heatmap(index: &FunctionHashIndex) -> DuplicationMatrix {
    let languages: Vec<LanguageTag> = index.keys().copied().collect();
    let distinct: Vec<BTreeSet<u64>> = languages.iter().map(|l| index[l].iter().copied().collect()).collect();
    let cells = languages
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let all = index[row].len();
            let d = distinct[r].len();
            (0..languages.len())
                .map(|c| {
                    if all == 0 {
                        None
                    } else if r == c {
                        Some(1.0 - d as f64 / all as f64)
                    } else {
                        Some(distinct[r].intersection(&distinct[c]).count() as f64 / d as f64)
                    }
                })
                .collect()
        })
        .collect();
    DuplicationMatrix {
        languages,
        cells,
        definition: HEATMAP_DEFINITION.to_string(),
    }
}
