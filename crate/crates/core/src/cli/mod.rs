// SPDX-License-Identifier: Apache-2.0

//! The `ir-forge` command line.
//!
//! Every subcommand works on a corpus directory (`--out`, default `.`)
//! holding `manifest.json` and the harvested modules. Reports go to
//! `<out>/reports/`. Exit codes: 0 on success, 1 when an operation fails,
//! 2 on usage errors.

mod commands;
pub mod config;
pub mod probe;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::corpus::ExtractionStrategy;
use crate::hashdedup::HashMode;
use crate::language::LanguageTag;
use crate::passtrace::Granularity;

pub use config::{ConfigFile, ToolchainConfig};
pub use probe::{probe_toolchain, Capabilities, ProbeReport, ToolStatus};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ir-forge", version, about = "Build, harvest, deduplicate and analyze LLVM-IR corpora")]
pub struct Cli {
    /// Corpus directory (manifest, modules, reports).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    /// `key = value` file with tool paths and defaults.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Seed for every sampling step.
    #[arg(long, global = true, value_name = "S")]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the packages of a package list and harvest their IR.
    Build {
        /// JSON package list.
        #[arg(long, value_name = "FILE")]
        packages: PathBuf,
    },
    /// Harvest IR from an existing build tree into the corpus.
    Scan(ScanArgs),
    /// Disassemble bitcode records into textual IR next to them.
    Disassemble,
    /// Print a self-contained module holding one function of a module.
    ExtractFn {
        /// Textual IR module.
        module: PathBuf,
        /// Name of the defined function, without `@`.
        function: String,
        /// Write here instead of standard output.
        #[arg(short = 'o', long = "output", value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Structural deduplication.
    Dedup {
        /// `coarse` hashes opcodes and block counts; `detailed` adds types, constants and callees.
        #[arg(long, default_value = "coarse", value_parser = parse_mode)]
        mode: HashMode,
        /// `module` marks duplicates in the manifest; `function` only counts them.
        #[arg(long, value_enum, default_value_t = Level::Module)]
        level: Level,
    },
    /// Corpus analyses.
    #[command(subcommand)]
    Analyze(Analyze),
    /// Train BPE vocabularies on a sample and count corpus tokens.
    Tokenize {
        /// Comma-separated vocabulary sizes.
        #[arg(long, value_delimiter = ',', required = true, value_name = "SIZES")]
        vocab: Vec<usize>,
        /// Training modules drawn per language.
        #[arg(long, default_value_t = 400, value_name = "N")]
        sample_per_lang: usize,
    },
    /// Bitcode and textual sizes per language.
    SizeReport,
    /// Render every offline analysis into `<out>/reports/`.
    Report(ReportArgs),
    /// Show which external tools are available.
    Probe,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Directory holding build products.
    pub tree: PathBuf,
    /// Package name recorded as the origin of each module.
    #[arg(long)]
    pub package: String,
    #[arg(long, value_parser = parse_language)]
    pub language: LanguageTag,
    /// `embedded-section` reads bitcode sections of objects; `raw-file` takes bitcode files.
    #[arg(long, default_value = "embedded-section", value_parser = parse_strategy)]
    pub strategy: ExtractionStrategy,
    /// Section names to try, in order. Defaults to the usual bitcode sections.
    #[arg(long = "section", value_name = "NAME")]
    pub sections: Vec<String>,
    /// Also harvest `.ll` files.
    #[arg(long)]
    pub textual: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Opcodes listed per language.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    /// Functions sampled per language for the histograms.
    #[arg(long, default_value_t = 1000)]
    pub sample: usize,
    /// Hash mode of the duplication heatmap.
    #[arg(long, default_value = "coarse", value_parser = parse_mode)]
    pub mode: HashMode,
    /// Include pass statistics from recorded logs.
    #[arg(long, value_name = "DIR")]
    pub replay: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Module,
    Function,
}

#[derive(Debug, Subcommand)]
pub enum Analyze {
    /// Sample functions, export their features as CSV, and plot histograms.
    Features {
        /// Functions sampled per language.
        #[arg(long, default_value_t = 1000, value_name = "N")]
        sample: usize,
    },
    /// Most frequent opcodes per language.
    Opcodes {
        /// Opcodes listed per language.
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Per-pass mutation frequencies.
    Passes(PassArgs),
    /// Cross-language function duplication.
    DupHeatmap {
        /// Hash mode used to match functions.
        #[arg(long, default_value = "coarse", value_parser = parse_mode)]
        mode: HashMode,
    },
}

#[derive(Debug, Args)]
pub struct PassArgs {
    /// Pass pipeline given to the optimizer.
    #[arg(long, default_value = "default<O3>")]
    pub pipeline: String,
    /// Trace each function on its own, or whole modules.
    #[arg(long, value_enum, default_value_t = GranularityArg::Function)]
    pub granularity: GranularityArg,
    /// Leave a language out of the table. Repeatable.
    #[arg(long = "exclude-lang", value_parser = parse_language, value_name = "LANG")]
    pub exclude_lang: Vec<LanguageTag>,
    /// Read `<DIR>/<language>/<target>.log` instead of running the optimizer.
    #[arg(long, value_name = "DIR")]
    pub replay: Option<PathBuf>,
    /// Keep the logs of a live run under this directory.
    #[arg(long, value_name = "DIR")]
    pub record: Option<PathBuf>,
    /// Count each occurrence of a pass in the pipeline separately.
    #[arg(long)]
    pub per_occurrence: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GranularityArg {
    Function,
    Module,
}

impl From<GranularityArg> for Granularity {
    fn from(g: GranularityArg) -> Self {
        match g {
            GranularityArg::Function => Granularity::Function,
            GranularityArg::Module => Granularity::Module,
        }
    }
}

impl PassArgs {
    fn excluded(&self) -> BTreeSet<LanguageTag> {
        self.exclude_lang.iter().copied().collect()
    }
}

fn parse_mode(s: &str) -> Result<HashMode, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

fn parse_language(s: &str) -> Result<LanguageTag, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

fn parse_strategy(s: &str) -> Result<ExtractionStrategy, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

/// Run with explicit arguments (the first is the program name) and return
/// the exit code. Diagnostics go to standard error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match commands::run(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}

pub fn main() -> i32 {
    main_with_args(std::env::args_os())
}
