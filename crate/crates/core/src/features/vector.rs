// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::irparse::{analyze_function, IrFunction, Opcode};

pub const FEATURE_COUNT: usize = 26;

/// Column names, in vector order.
pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "total_instructions",
    "basic_block_count",
    "blocks_reached_from_cond_branch",
    "direct_call_count",
    "indirect_call_count",
    "intrinsic_call_count",
    "load_count",
    "store_count",
    "alloca_count",
    "integer_arith_count",
    "float_arith_count",
    "cast_count",
    "cmp_count",
    "phi_count",
    "select_count",
    "gep_count",
    "cond_branch_count",
    "uncond_branch_count",
    "switch_count",
    "return_count",
    "unreachable_count",
    "argument_count",
    "top_level_loop_count",
    "max_loop_depth",
    "critical_edge_count",
    "mean_block_size",
];

/// Properties of one function definition. Debug intrinsic calls are
/// invisible to every entry.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub total_instructions: u64,
    pub basic_block_count: u64,
    /// Distinct blocks that are a successor of some conditional `br`.
    pub blocks_reached_from_cond_branch: u64,
    /// `call`s with a direct, non-intrinsic callee.
    pub direct_call_count: u64,
    pub indirect_call_count: u64,
    /// Non-debug `llvm.*` calls, lifetime markers included.
    pub intrinsic_call_count: u64,
    pub load_count: u64,
    pub store_count: u64,
    pub alloca_count: u64,
    pub integer_arith_count: u64,
    pub float_arith_count: u64,
    pub cast_count: u64,
    pub cmp_count: u64,
    pub phi_count: u64,
    pub select_count: u64,
    pub gep_count: u64,
    pub cond_branch_count: u64,
    pub uncond_branch_count: u64,
    pub switch_count: u64,
    pub return_count: u64,
    pub unreachable_count: u64,
    pub argument_count: u64,
    pub top_level_loop_count: u64,
    pub max_loop_depth: u64,
    /// Edges whose source has several successors and whose target has
    /// several predecessors.
    pub critical_edge_count: u64,
    /// `total_instructions / basic_block_count`.
    pub mean_block_size: f64,
}

pub fn is_integer_arith(op: &Opcode) -> bool {
    use Opcode::*;
    matches!(op, Add | Sub | Mul | UDiv | SDiv | URem | SRem | Shl | LShr | AShr | And | Or | Xor)
}

pub fn is_float_arith(op: &Opcode) -> bool {
    use Opcode::*;
    matches!(op, FAdd | FSub | FMul | FDiv | FRem) || *op == Opcode::Other("fneg".into())
}

pub fn is_cast(op: &Opcode) -> bool {
    use Opcode::*;
    matches!(
        op,
        BitCast | Trunc | ZExt | SExt | FPTrunc | FPExt | FPToUI | FPToSI | UIToFP | SIToFP | PtrToInt | IntToPtr
            | AddrSpaceCast
    )
}

impl FeatureVector {
    pub fn values(&self) -> [f64; FEATURE_COUNT] {
        [
            self.total_instructions as f64,
            self.basic_block_count as f64,
            self.blocks_reached_from_cond_branch as f64,
            self.direct_call_count as f64,
            self.indirect_call_count as f64,
            self.intrinsic_call_count as f64,
            self.load_count as f64,
            self.store_count as f64,
            self.alloca_count as f64,
            self.integer_arith_count as f64,
            self.float_arith_count as f64,
            self.cast_count as f64,
            self.cmp_count as f64,
            self.phi_count as f64,
            self.select_count as f64,
            self.gep_count as f64,
            self.cond_branch_count as f64,
            self.uncond_branch_count as f64,
            self.switch_count as f64,
            self.return_count as f64,
            self.unreachable_count as f64,
            self.argument_count as f64,
            self.top_level_loop_count as f64,
            self.max_loop_depth as f64,
            self.critical_edge_count as f64,
            self.mean_block_size,
        ]
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        FEATURE_NAMES.iter().position(|n| *n == name).map(|i| self.values()[i])
    }

    /// Sum of the disjoint opcode categories (calls, memory, arithmetic,
    /// casts, compares, phi, select, gep, terminators). Instructions outside
    /// all of them make up the difference to `total_instructions`.
    pub fn categorized_instructions(&self) -> u64 {
        self.direct_call_count
            + self.indirect_call_count
            + self.intrinsic_call_count
            + self.load_count
            + self.store_count
            + self.alloca_count
            + self.integer_arith_count
            + self.float_arith_count
            + self.cast_count
            + self.cmp_count
            + self.phi_count
            + self.select_count
            + self.gep_count
            + self.cond_branch_count
            + self.uncond_branch_count
            + self.switch_count
            + self.return_count
            + self.unreachable_count
    }
}

/// Compute the feature vector of a definition.
pub fn extract_features(func: &IrFunction) -> Result<FeatureVector> {
    let analysis = analyze_function(func)?;
    let mut v = FeatureVector {
        basic_block_count: func.blocks.len() as u64,
        argument_count: func.params.len() as u64,
        top_level_loop_count: analysis.loops.top_level_loop_count() as u64,
        max_loop_depth: analysis.loops.max_loop_depth() as u64,
        ..FeatureVector::default()
    };
    let mut cond_targets: BTreeSet<&str> = BTreeSet::new();
    for inst in func.counted_instructions() {
        v.total_instructions += 1;
        let op = &inst.opcode;
        match op {
            Opcode::Call if inst.is_intrinsic_call => v.intrinsic_call_count += 1,
            Opcode::Call if inst.callee.is_some() => v.direct_call_count += 1,
            Opcode::Call => v.indirect_call_count += 1,
            Opcode::Load => v.load_count += 1,
            Opcode::Store => v.store_count += 1,
            Opcode::Alloca => v.alloca_count += 1,
            Opcode::ICmp | Opcode::FCmp => v.cmp_count += 1,
            Opcode::Phi => v.phi_count += 1,
            Opcode::Select => v.select_count += 1,
            Opcode::GetElementPtr => v.gep_count += 1,
            Opcode::Br if inst.is_conditional_branch() => {
                v.cond_branch_count += 1;
                cond_targets.extend(inst.labels());
            }
            Opcode::Br => v.uncond_branch_count += 1,
            Opcode::Switch => v.switch_count += 1,
            Opcode::Ret => v.return_count += 1,
            Opcode::Unreachable => v.unreachable_count += 1,
            op if is_integer_arith(op) => v.integer_arith_count += 1,
            op if is_float_arith(op) => v.float_arith_count += 1,
            op if is_cast(op) => v.cast_count += 1,
            _ => {}
        }
    }
    v.blocks_reached_from_cond_branch = cond_targets.len() as u64;
    let cfg = &analysis.cfg;
    v.critical_edge_count = cfg
        .edges()
        .filter(|&(from, to)| cfg.successors[from].len() > 1 && cfg.predecessors[to].len() > 1)
        .count() as u64;
    v.mean_block_size = if func.blocks.is_empty() {
        0.0
    } else {
        v.total_instructions as f64 / func.blocks.len() as f64
    };
    Ok(v)
}
