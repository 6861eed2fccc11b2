// SPDX-License-Identifier: Apache-2.0

//! Textual LLVM-IR: a pragmatic parser plus CFG, dominator and loop analyses.
//!
//! Types are never interpreted; they are captured as canonical token strings,
//! so typed-pointer and opaque-pointer IR parse the same way. Metadata
//! attachments and attribute groups are skipped during operand extraction.

pub mod cfg;
pub mod dom;
pub(crate) mod lexer;
pub mod loops;
pub mod model;
pub(crate) mod parser;

pub use cfg::{build_cfg, Cfg};
pub use dom::{compute_dominators, DomTree};
pub use loops::{find_natural_loops, LoopForest, NaturalLoop};
pub use model::*;
pub use parser::parse_module;

/// CFG, dominators and loops of one function definition.
#[derive(Debug, Clone)]
pub struct FunctionAnalysis {
    pub cfg: Cfg,
    pub dom: DomTree,
    pub loops: LoopForest,
}

pub fn analyze_function(func: &IrFunction) -> crate::Result<FunctionAnalysis> {
    let cfg = build_cfg(func)?;
    let dom = compute_dominators(&cfg);
    let loops = find_natural_loops(&cfg, &dom);
    Ok(FunctionAnalysis { cfg, dom, loops })
}
