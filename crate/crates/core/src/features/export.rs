// SPDX-License-Identifier: Apache-2.0

use std::path::Path;

use super::sample::FeatureSample;
use super::vector::FEATURE_NAMES;
use crate::error::{IoContext, Result};

pub const ID_COLUMNS: [&str; 3] = ["language", "module", "function"];

/// Write samples as CSV: identifying columns, then one column per feature.
/// Rows keep the order of `samples`. Returns the number of data rows.
pub fn export_feature_table(samples: &[FeatureSample], out_path: &Path) -> Result<usize> {
    if let Some(parent) = out_path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).at(parent)?;
    }
    let file = std::fs::File::create(out_path).at(out_path)?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(ID_COLUMNS.iter().chain(FEATURE_NAMES.iter()))?;
    for s in samples {
        let mut row = vec![
            s.function.language.to_string(),
            s.function.module.clone(),
            s.function.function.clone(),
        ];
        row.extend(s.features.values().iter().map(|v| v.to_string()));
        w.write_record(&row)?;
    }
    w.flush().at(out_path)?;
    Ok(samples.len())
}
