// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::language::LanguageTag;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub property: String,
    /// Bin `i` covers `[edges[i], edges[i + 1])`.
    pub edges: Vec<f64>,
    /// Render counts on a log axis. Binning itself is unaffected.
    pub log_scale: bool,
    pub counts: BTreeMap<LanguageTag, Vec<u64>>,
    pub sample_size: BTreeMap<LanguageTag, usize>,
    /// Values below the first edge or at/above the last one.
    pub out_of_range: BTreeMap<LanguageTag, usize>,
}

pub fn histogram(
    property: &str,
    values: &BTreeMap<LanguageTag, Vec<f64>>,
    edges: &[f64],
    log_scale: bool,
) -> Result<Histogram> {
    if edges.len() < 2 {
        return Err(Error::Validation("a histogram needs at least one bin (two edges)".into()));
    }
    if edges.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Validation(format!("bin edges must be strictly increasing: {edges:?}")));
    }
    let bins = edges.len() - 1;
    let mut h = Histogram {
        property: property.to_string(),
        edges: edges.to_vec(),
        log_scale,
        counts: BTreeMap::new(),
        sample_size: BTreeMap::new(),
        out_of_range: BTreeMap::new(),
    };
    for (lang, vals) in values {
        let mut counts = vec![0u64; bins];
        let mut outside = 0;
        for &v in vals {
            // first edge strictly greater than v, minus one
            let upper = edges.partition_point(|&e| e <= v);
            if upper == 0 || upper > bins {
                outside += 1;
            } else {
                counts[upper - 1] += 1;
            }
        }
        h.counts.insert(*lang, counts);
        h.sample_size.insert(*lang, vals.len());
        h.out_of_range.insert(*lang, outside);
    }
    Ok(h)
}

/// `[0, 1, 2, 4, ..., 2^k]` with `2^k` the first power of two above `max`.
pub fn log2_edges(max: f64) -> Vec<f64> {
    let mut edges = vec![0.0, 1.0];
    while *edges.last().unwrap() <= max {
        let next = edges.last().unwrap() * 2.0;
        edges.push(next);
    }
    edges
}
