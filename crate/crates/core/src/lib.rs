// SPDX-License-Identifier: Apache-2.0

//! Tooling for building LLVM-IR corpora and analyzing them.
//!
//! The pipeline runs in stages that mirror the modules of this crate:
//! packages are built with IR-emitting flags ([`corpus`]), the resulting
//! bitcode is harvested into a manifested corpus, modules are parsed
//! ([`irparse`]) and deduplicated by structural hash ([`hashdedup`]), and the
//! analyses ([`features`], [`passtrace`], [`stats`], [`tokenizer`]) run over
//! the deduplicated corpus. [`cli`] wires everything behind the `ir-forge`
//! binary.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod features;
pub mod hashdedup;
pub mod irparse;
pub mod language;
pub mod passtrace;
pub mod stats;
pub mod tokenizer;

pub use error::{Error, Result};
pub use language::LanguageTag;
