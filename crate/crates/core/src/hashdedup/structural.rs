// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::fnv::{Fnv64, FNV_OFFSET_BASIS};
use crate::error::Error;
use crate::irparse::{IrFunction, IrGlobal, IrModule, Opcode, OperandKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HashMode {
    #[default]
    Coarse,
    Detailed,
}

impl fmt::Display for HashMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HashMode::Coarse => "coarse",
            HashMode::Detailed => "detailed",
        })
    }
}

impl FromStr for HashMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "coarse" => Ok(HashMode::Coarse),
            "detailed" => Ok(HashMode::Detailed),
            other => Err(Error::Validation(format!("unknown hash mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StructuralHash {
    pub value: u64,
    pub mode: HashMode,
}

/// Hash of a module with no hashed items: the untouched FNV offset basis.
pub const EMPTY_MODULE_HASH: u64 = FNV_OFFSET_BASIS;

const TAG_FUNCTION: u8 = 1;
const TAG_GLOBAL: u8 = 2;

/// Hash a function body. Local names, metadata and attributes never enter
/// the stream; debug intrinsic calls are skipped entirely.
pub fn hash_function(func: &IrFunction, mode: HashMode) -> StructuralHash {
    let mut h = Fnv64::new();
    h.write_u64(func.blocks.len() as u64);
    for block in &func.blocks {
        for inst in block.instructions.iter().filter(|i| !i.is_debug_intrinsic) {
            h.write_u64(inst.opcode.id());
            if let Opcode::Other(raw) = &inst.opcode {
                h.write_str(raw);
            }
            if mode == HashMode::Detailed {
                h.write_str(&inst.type_token);
                let operands = inst.operands.iter().filter(|o| o.kind != OperandKind::Metadata);
                h.write_u64(operands.clone().count() as u64);
                for op in operands {
                    h.write_u64(op.kind.id());
                    match op.kind {
                        OperandKind::ConstantInt => match op.int_value {
                            Some(v) => h.write_i128(v),
                            None => h.write_str(&op.text),
                        },
                        OperandKind::ConstantFp => h.write_str(&op.text),
                        _ => {}
                    }
                }
                match &inst.callee {
                    Some(callee) => {
                        h.write_u8(1);
                        h.write_str(callee);
                    }
                    None => h.write_u8(0),
                }
            }
        }
    }
    StructuralHash { value: h.finish(), mode }
}

/// Hash a global from its type, initializer and constness. The name is
/// excluded; the stream is the same in both modes.
pub fn hash_global(global: &IrGlobal, mode: HashMode) -> StructuralHash {
    let mut h = Fnv64::new();
    h.write_str(&global.type_token);
    h.write_u64(global.initializer_tokens.len() as u64);
    for tok in &global.initializer_tokens {
        h.write_str(tok);
    }
    h.write_u8(u8::from(global.is_constant));
    StructuralHash { value: h.finish(), mode }
}

/// Order-independent combination of every defined function and every
/// non-external global.
pub fn hash_module(module: &IrModule, mode: HashMode) -> StructuralHash {
    let mut items: Vec<(u8, u64)> = module
        .definitions()
        .map(|f| (TAG_FUNCTION, hash_function(f, mode).value))
        .chain(
            module
                .globals
                .iter()
                .filter(|g| !g.is_declaration)
                .map(|g| (TAG_GLOBAL, hash_global(g, mode).value)),
        )
        .collect();
    items.sort_unstable();
    let mut h = Fnv64::new();
    for (tag, value) in items {
        h.write_u8(tag);
        h.write_u64(value);
    }
    StructuralHash { value: h.finish(), mode }
}
