// SPDX-License-Identifier: Apache-2.0

//! Package lists, dependency-ordered builds with IR-emitting flags, IR
//! harvesting from build trees, disassembly, function extraction and the
//! corpus manifest.

pub mod build;
pub mod disasm;
pub mod elf;
pub mod extract;
pub mod manifest;
pub mod package;
pub mod pipeline;
pub mod scan;
pub mod schedule;
pub mod size;

use std::path::Path;

use rayon::prelude::*;

pub use build::{build_package, BuildResult, BuildStatus, Toolchain};
pub use disasm::{disassemble, disassemble_corpus};
pub use elf::{extract_embedded_bitcode, BITCODE_MAGIC, DEFAULT_SECTION_NAMES};
pub use extract::extract_function;
pub use manifest::{BitcodeArtifact, CorpusManifest, DedupStatus, Encoding, ExtractionStrategy, ModuleRecord};
pub use package::{load_package_list, parse_package_list, Ecosystem, PackageDescriptor, Source};
pub use pipeline::{harvest_with, run_corpus_build, HarvestOptions};
pub use scan::scan_build_tree;
pub use schedule::topo_schedule;
pub use size::{corpus_size_report, SizeReport};

use crate::error::Result;
use crate::irparse::{parse_module, IrModule};

/// Read and parse the textual IR of each record, in parallel, preserving
/// order.
pub fn parse_records(root: &Path, records: &[ModuleRecord]) -> Vec<Result<IrModule>> {
    records
        .par_iter()
        .map(|r| {
            let text = r.read_text(root)?;
            parse_module(&text).map_err(|e| match e {
                crate::Error::Parse { line, message } => crate::Error::Parse {
                    line,
                    message: format!("{}: {message}", r.artifact.path),
                },
                other => other,
            })
        })
        .collect()
}
