// SPDX-License-Identifier: Apache-2.0

//! Opcode distributions, the cross-language duplication heatmap, and
//! JSON/SVG report emission.

pub mod heatmap;
pub mod opcodes;
pub mod report;
pub mod svg;

pub use heatmap::{duplication_heatmap, DuplicationMatrix, HEATMAP_DEFINITION};
pub use opcodes::{
    corpus_opcode_counts, count_opcodes, opcode_distribution, opcode_distribution_of, top_k, OpcodeCounts,
    OpcodeDistribution, TopK,
};
pub use report::{render_report, write_json, RenderOutcome, ReportInputs, REPORTS_DIR};
