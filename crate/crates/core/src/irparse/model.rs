// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use serde::{Deserialize, Serialize};

/// Instruction opcodes recognized by the parser. Anything outside this set is
/// kept as [`Opcode::Other`] with its raw spelling.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Opcode {
    Add,
    FAdd,
    Sub,
    FSub,
    Mul,
    FMul,
    UDiv,
    SDiv,
    FDiv,
    URem,
    SRem,
    FRem,
    Shl,
    LShr,
    AShr,
    And,
    Or,
    Xor,
    ICmp,
    FCmp,
    Load,
    Store,
    Alloca,
    GetElementPtr,
    Phi,
    Select,
    Call,
    Br,
    Switch,
    Ret,
    Unreachable,
    Invoke,
    BitCast,
    Trunc,
    ZExt,
    SExt,
    FPTrunc,
    FPExt,
    FPToUI,
    FPToSI,
    UIToFP,
    SIToFP,
    PtrToInt,
    IntToPtr,
    AddrSpaceCast,
    ExtractValue,
    InsertValue,
    ExtractElement,
    InsertElement,
    ShuffleVector,
    Freeze,
    AtomicRMW,
    CmpXchg,
    Fence,
    LandingPad,
    Resume,
    Other(String),
}

const KNOWN: &[(&str, Opcode)] = &[
    ("add", Opcode::Add),
    ("fadd", Opcode::FAdd),
    ("sub", Opcode::Sub),
    ("fsub", Opcode::FSub),
    ("mul", Opcode::Mul),
    ("fmul", Opcode::FMul),
    ("udiv", Opcode::UDiv),
    ("sdiv", Opcode::SDiv),
    ("fdiv", Opcode::FDiv),
    ("urem", Opcode::URem),
    ("srem", Opcode::SRem),
    ("frem", Opcode::FRem),
    ("shl", Opcode::Shl),
    ("lshr", Opcode::LShr),
    ("ashr", Opcode::AShr),
    ("and", Opcode::And),
    ("or", Opcode::Or),
    ("xor", Opcode::Xor),
    ("icmp", Opcode::ICmp),
    ("fcmp", Opcode::FCmp),
    ("load", Opcode::Load),
    ("store", Opcode::Store),
    ("alloca", Opcode::Alloca),
    ("getelementptr", Opcode::GetElementPtr),
    ("phi", Opcode::Phi),
    ("select", Opcode::Select),
    ("call", Opcode::Call),
    ("br", Opcode::Br),
    ("switch", Opcode::Switch),
    ("ret", Opcode::Ret),
    ("unreachable", Opcode::Unreachable),
    ("invoke", Opcode::Invoke),
    ("bitcast", Opcode::BitCast),
    ("trunc", Opcode::Trunc),
    ("zext", Opcode::ZExt),
    ("sext", Opcode::SExt),
    ("fptrunc", Opcode::FPTrunc),
    ("fpext", Opcode::FPExt),
    ("fptoui", Opcode::FPToUI),
    ("fptosi", Opcode::FPToSI),
    ("uitofp", Opcode::UIToFP),
    ("sitofp", Opcode::SIToFP),
    ("ptrtoint", Opcode::PtrToInt),
    ("inttoptr", Opcode::IntToPtr),
    ("addrspacecast", Opcode::AddrSpaceCast),
    ("extractvalue", Opcode::ExtractValue),
    ("insertvalue", Opcode::InsertValue),
    ("extractelement", Opcode::ExtractElement),
    ("insertelement", Opcode::InsertElement),
    ("shufflevector", Opcode::ShuffleVector),
    ("freeze", Opcode::Freeze),
    ("atomicrmw", Opcode::AtomicRMW),
    ("cmpxchg", Opcode::CmpXchg),
    ("fence", Opcode::Fence),
    ("landingpad", Opcode::LandingPad),
    ("resume", Opcode::Resume),
];

/// Terminators outside the fixed set. They end a block and their label
/// operands are successors.
const OTHER_TERMINATORS: &[&str] = &[
    "indirectbr",
    "callbr",
    "catchswitch",
    "catchret",
    "cleanupret",
];

impl Opcode {
    pub fn from_mnemonic(word: &str) -> Opcode {
        KNOWN
            .iter()
            .find(|(name, _)| *name == word)
            .map(|(_, op)| op.clone())
            .unwrap_or_else(|| Opcode::Other(word.to_string()))
    }

    pub fn mnemonic(&self) -> &str {
        match self {
            Opcode::Other(raw) => raw,
            op => KNOWN
                .iter()
                .find(|(_, known)| known == op)
                .map(|(name, _)| *name)
                .expect("every fixed opcode has a mnemonic"),
        }
    }

    /// Stable numeric id used by the structural hash. `Other` shares one id;
    /// its raw spelling is hashed separately.
    pub fn id(&self) -> u64 {
        match self {
            Opcode::Other(_) => KNOWN.len() as u64 + 1,
            op => {
                KNOWN
                    .iter()
                    .position(|(_, known)| known == op)
                    .expect("every fixed opcode has an id") as u64
                    + 1
            }
        }
    }

    pub fn is_terminator(&self) -> bool {
        match self {
            Opcode::Br
            | Opcode::Switch
            | Opcode::Ret
            | Opcode::Unreachable
            | Opcode::Invoke
            | Opcode::Resume => true,
            Opcode::Other(raw) => OTHER_TERMINATORS.contains(&raw.as_str()),
            _ => false,
        }
    }

    pub fn all_known() -> impl Iterator<Item = &'static Opcode> {
        KNOWN.iter().map(|(_, op)| op)
    }
}

impl fmt::Display for Opcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperandKind {
    Local,
    Global,
    ConstantInt,
    ConstantFp,
    BlockLabel,
    OtherConstant,
    Metadata,
}

impl OperandKind {
    pub fn id(self) -> u64 {
        match self {
            OperandKind::Local => 1,
            OperandKind::Global => 2,
            OperandKind::ConstantInt => 3,
            OperandKind::ConstantFp => 4,
            OperandKind::BlockLabel => 5,
            OperandKind::OtherConstant => 6,
            OperandKind::Metadata => 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperandRef {
    pub kind: OperandKind,
    /// Canonical spelling. Locals, globals and labels carry their name without
    /// the sigil.
    pub text: String,
    /// Set for `ConstantInt` operands whose literal fits in 128 bits.
    pub int_value: Option<i128>,
}

impl OperandRef {
    pub fn new(kind: OperandKind, text: impl Into<String>) -> Self {
        OperandRef {
            kind,
            text: text.into(),
            int_value: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrInstruction {
    pub opcode: Opcode,
    pub result_name: Option<String>,
    /// First type appearing in the instruction, rendered canonically. Empty
    /// for instructions without one (`unreachable`, `fence`).
    pub type_token: String,
    pub operands: Vec<OperandRef>,
    /// Direct callee symbol of a `call`, without the `@` sigil.
    pub callee: Option<String>,
    pub is_intrinsic_call: bool,
    /// `llvm.dbg.*` calls. Excluded from every count and hash.
    pub is_debug_intrinsic: bool,
    /// 1-based source line of the instruction's first line.
    pub line: usize,
}

impl IrInstruction {
    pub fn is_terminator(&self) -> bool {
        self.opcode.is_terminator()
    }

    pub fn is_conditional_branch(&self) -> bool {
        self.opcode == Opcode::Br && self.labels().count() == 2
    }

    /// Block-label operands in textual order.
    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.operands
            .iter()
            .filter(|op| op.kind == OperandKind::BlockLabel)
            .map(|op| op.text.as_str())
    }

    /// Successor labels of a terminator. Empty for non-terminators.
    pub fn successor_labels(&self) -> Vec<&str> {
        if self.is_terminator() {
            self.labels().collect()
        } else {
            Vec::new()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrBlock {
    /// Label without the `%` sigil. Unnamed entry blocks get their implicit
    /// slot number.
    pub label: String,
    pub instructions: Vec<IrInstruction>,
}

impl IrBlock {
    pub fn terminator(&self) -> Option<&IrInstruction> {
        self.instructions.last().filter(|i| i.is_terminator())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrParam {
    pub type_token: String,
    pub name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrFunction {
    pub name: String,
    pub params: Vec<IrParam>,
    pub is_vararg: bool,
    pub return_type_token: String,
    pub blocks: Vec<IrBlock>,
    pub is_definition: bool,
}

impl IrFunction {
    pub fn instructions(&self) -> impl Iterator<Item = &IrInstruction> {
        self.blocks.iter().flat_map(|b| b.instructions.iter())
    }

    /// Instructions that count towards statistics (debug intrinsics removed).
    pub fn counted_instructions(&self) -> impl Iterator<Item = &IrInstruction> {
        self.instructions().filter(|i| !i.is_debug_intrinsic)
    }

    pub fn block_index(&self, label: &str) -> Option<usize> {
        self.blocks.iter().position(|b| b.label == label)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GlobalKind {
    Variable,
    Alias,
    IFunc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrGlobal {
    /// Symbol without the `@` sigil.
    pub name: String,
    pub kind: GlobalKind,
    pub type_token: String,
    /// Canonical tokens of the initializer (aliasee for aliases). Empty for
    /// external declarations.
    pub initializer_tokens: Vec<String>,
    pub is_constant: bool,
    pub is_declaration: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrModule {
    pub source_filename: Option<String>,
    pub target_triple: Option<String>,
    pub datalayout: Option<String>,
    pub type_names: Vec<String>,
    pub globals: Vec<IrGlobal>,
    /// Definitions and declarations, in source order.
    pub functions: Vec<IrFunction>,
    /// Names of declared-only functions.
    pub declarations: Vec<String>,
}

impl IrModule {
    pub fn function(&self, name: &str) -> Option<&IrFunction> {
        self.functions.iter().find(|f| f.name == name)
    }

    pub fn definitions(&self) -> impl Iterator<Item = &IrFunction> {
        self.functions.iter().filter(|f| f.is_definition)
    }

    /// Instruction count excluding debug intrinsics.
    pub fn instruction_count(&self) -> usize {
        self.functions
            .iter()
            .map(|f| f.counted_instructions().count())
            .sum()
    }
}
