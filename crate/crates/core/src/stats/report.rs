// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};

use serde::Serialize;

use super::heatmap::DuplicationMatrix;
use super::opcodes::OpcodeDistribution;
use super::svg;
use crate::error::{IoContext, Result};
use crate::features::Histogram;
use crate::passtrace::MutationTable;

pub const REPORTS_DIR: &str = "reports";

/// Everything a report can contain; absent parts are skipped.
#[derive(Default)]
pub struct ReportInputs<'a> {
    pub opcodes: Option<&'a OpcodeDistribution>,
    pub heatmap: Option<&'a DuplicationMatrix>,
    pub histograms: &'a [Histogram],
    pub passes: Option<&'a MutationTable>,
    /// Extra tables written as JSON only, as `(file stem, value)`.
    pub tables: Vec<(&'a str, serde_json::Value)>,
}

#[derive(Debug, Default)]
pub struct RenderOutcome {
    pub written: Vec<PathBuf>,
    pub notices: Vec<String>,
}

fn json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, json(value)?).at(path)
}

/// Write each table as JSON plus an SVG chart under `<out_dir>/reports/`.
pub fn render_report(inputs: &ReportInputs<'_>, out_dir: &Path) -> Result<RenderOutcome> {
    let dir = out_dir.join(REPORTS_DIR);
    std::fs::create_dir_all(&dir).at(&dir)?;
    let mut outcome = RenderOutcome::default();
    let emit = |name: String, body: &str, outcome: &mut RenderOutcome| -> Result<()> {
        let p = dir.join(name);
        std::fs::write(&p, body).at(&p)?;
        outcome.written.push(p);
        Ok(())
    };
    if let Some(d) = inputs.opcodes {
        emit("opcodes.json".into(), &json(d)?, &mut outcome)?;
        emit("opcodes.svg".into(), &opcode_svg(d), &mut outcome)?;
    }
    if let Some(m) = inputs.heatmap {
        emit("dup_heatmap.json".into(), &json(m)?, &mut outcome)?;
        if m.is_empty() {
            outcome.notices.push("duplication matrix is empty; dup_heatmap.svg skipped".into());
        } else {
            let labels: Vec<String> = m.languages.iter().map(|l| l.to_string()).collect();
            let body = svg::grid("Function duplication between languages", &labels, &labels, &m.cells);
            emit("dup_heatmap.svg".into(), &body, &mut outcome)?;
        }
    }
    for h in inputs.histograms {
        let stem = format!("hist_{}", h.property);
        emit(format!("{stem}.json"), &json(h)?, &mut outcome)?;
        let bins: Vec<String> = h.edges.windows(2).map(|w| format!("[{}, {})", w[0], w[1])).collect();
        let series: Vec<String> = h.counts.keys().map(|l| l.to_string()).collect();
        let counts: Vec<Vec<u64>> = h.counts.values().cloned().collect();
        let body = svg::histogram_bars(&h.property, &bins, &series, &counts, h.log_scale);
        emit(format!("{stem}.svg"), &body, &mut outcome)?;
    }
    if let Some(t) = inputs.passes {
        emit("passes.json".into(), &json(t)?, &mut outcome)?;
        if t.rows.is_empty() {
            outcome.notices.push("mutation table is empty; passes.svg skipped".into());
        } else {
            let rows: Vec<String> = t.rows.iter().map(|r| r.pass_name.clone()).collect();
            let cols: Vec<String> = t.languages.iter().map(|l| l.to_string()).collect();
            let cells: Vec<Vec<Option<f64>>> = t
                .rows
                .iter()
                .map(|r| t.languages.iter().map(|l| r.per_language[l].frequency).collect())
                .collect();
            emit("passes.svg".into(), &svg::grid("Pass mutation frequency", &rows, &cols, &cells), &mut outcome)?;
        }
    }
    for (stem, value) in &inputs.tables {
        emit(format!("{stem}.json"), &json(value)?, &mut outcome)?;
    }
    for n in &outcome.notices {
        log::info!("{n}");
    }
    Ok(outcome)
}

/// Aggregate top-k opcodes (plus "other") as a share of each language's
/// instructions.
fn opcode_svg(d: &OpcodeDistribution) -> String {
    let mut rows: Vec<String> = d.aggregate.entries.iter().map(|(o, _)| o.clone()).collect();
    let series: Vec<String> = d.per_language_counts.keys().map(|l| l.to_string()).collect();
    let mut values: Vec<Vec<f64>> = vec![Vec::new(); rows.len() + 1];
    for counts in d.per_language_counts.values() {
        let total: u64 = counts.values().sum();
        let share = |n: u64| if total == 0 { 0.0 } else { n as f64 / total as f64 };
        let mut named = 0;
        for (i, op) in rows.iter().enumerate() {
            let n = counts.get(op).copied().unwrap_or(0);
            named += n;
            values[i].push(share(n));
        }
        values[rows.len()].push(share(total - named));
    }
    rows.push("other".into());
    svg::grouped_bars(&format!("Top {} opcodes", d.k), &rows, &series, &values)
}
