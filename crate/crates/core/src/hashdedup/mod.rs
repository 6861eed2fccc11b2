// SPDX-License-Identifier: Apache-2.0

//! Structural hashing of functions, globals and modules, and module-level
//! corpus deduplication.

pub mod dedup;
pub mod fnv;
pub mod structural;

pub use dedup::{
    dedup_corpus, dedup_parsed, function_dedup_report, function_hash_index, function_hash_index_of, DedupReport, FunctionDedupReport, FunctionHashIndex,
    LanguageDedup,
};
pub use structural::{hash_function, hash_global, hash_module, HashMode, StructuralHash, EMPTY_MODULE_HASH};
