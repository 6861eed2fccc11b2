// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::path::Path;

use super::config::{ConfigFile, ToolchainConfig};
use super::probe::probe_toolchain;
use super::{Analyze, Cli, Command, Level, PassArgs, ReportArgs, ScanArgs};
use crate::corpus::manifest::MANIFEST_FILE;
use crate::corpus::{
    corpus_size_report, disassemble_corpus, extract_function, harvest_with, load_package_list, run_corpus_build,
    CorpusManifest, HarvestOptions, DEFAULT_SECTION_NAMES,
};
use crate::error::{Error, IoContext, Result};
use crate::features::{export_feature_table, histogram, log2_edges, sample_functions, FeatureSample, Histogram};
use crate::hashdedup::{dedup_corpus, function_dedup_report, function_hash_index, HashMode};
use crate::language::LanguageTag;
use crate::passtrace::{replay_corpus, trace_corpus, MutationTable, TraceOptions};
use crate::stats::{duplication_heatmap, opcode_distribution, render_report, write_json, ReportInputs, REPORTS_DIR};
use crate::tokenizer::corpus_token_count;

pub const DEDUP_REPORT_FILE: &str = "dedup_report.json";
pub const FUNCTION_DEDUP_REPORT_FILE: &str = "function_dedup_report.json";
pub const FEATURES_FILE: &str = "features.csv";
pub const TOKENS_FILE: &str = "tokens.json";
pub const SIZE_REPORT_FILE: &str = "size_report.json";
/// Feature histograms drawn by `analyze features` and `report`.
pub const HISTOGRAM_PROPERTIES: [&str; 2] = ["total_instructions", "basic_block_count"];

pub(super) fn run(cli: Cli) -> Result<()> {
    let file = cli.config.as_deref().map(ConfigFile::load).transpose()?;
    let cfg = ToolchainConfig::resolve(cli.jobs, cli.out, cli.seed, file)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Validation(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(cli.command, &cfg))
}

fn load_manifest(out: &Path) -> Result<CorpusManifest> {
    let path = out.join(MANIFEST_FILE);
    if !path.exists() {
        return Err(Error::NotFound(format!("{} (run `build` or `scan` first)", path.display())));
    }
    CorpusManifest::load(&path)
}

fn dispatch(command: Command, cfg: &ToolchainConfig) -> Result<()> {
    let out = cfg.out_dir.as_path();
    match command {
        Command::Build { packages } => {
            let pkgs = load_package_list(&packages)?;
            let m = run_corpus_build(&pkgs, &cfg.toolchain, cfg.jobs, out)?;
            for note in &m.build_notes {
                eprintln!("{}: {:?}: {}", note.package, note.kind, note.reason);
            }
            println!("{} modules from {} packages", m.records.len(), pkgs.len());
            Ok(())
        }
        Command::Scan(args) => scan(&args, out),
        Command::Disassemble => {
            let m = load_manifest(out)?;
            let dis = cfg.toolchain.resolved_disassembler();
            let (m, errors) = disassemble_corpus(&m, out, dis.as_deref());
            m.save_to(out)?;
            for (path, e) in &errors {
                eprintln!("{path}: {e}");
            }
            if errors.is_empty() {
                Ok(())
            } else {
                Err(Error::Tool { tool: "disassembler".into(), diagnostic: format!("{} modules failed", errors.len()) })
            }
        }
        Command::ExtractFn { module, function, output } => {
            let text = std::fs::read_to_string(&module).at(&module)?;
            let extracted = extract_function(&text, &function)?;
            match output {
                Some(p) => std::fs::write(&p, extracted).at(&p),
                None => {
                    print!("{extracted}");
                    Ok(())
                }
            }
        }
        Command::Dedup { mode, level } => dedup(out, mode, level),
        Command::Analyze(a) => analyze(a, cfg),
        Command::Tokenize { vocab, sample_per_lang } => {
            let m = load_manifest(out)?;
            let (report, models) = corpus_token_count(&m, out, &vocab, sample_per_lang, cfg.seed)?;
            let dir = out.join("bpe");
            std::fs::create_dir_all(&dir).at(&dir)?;
            for model in &models {
                model.save_merges(&dir.join(format!("vocab-{}.merges", model.vocab_size_target)))?;
            }
            write_json(&out.join(TOKENS_FILE), &report)?;
            for c in &report.counts {
                println!("{}\t{}", c.vocab_size, c.token_count);
            }
            Ok(())
        }
        Command::SizeReport => {
            let report = corpus_size_report(&load_manifest(out)?);
            write_json(&out.join(SIZE_REPORT_FILE), &report)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(())
        }
        Command::Report(args) => report(&args, cfg),
        Command::Probe => {
            println!("{}", serde_json::to_string_pretty(&probe_toolchain(&cfg.toolchain))?);
            Ok(())
        }
    }
}

fn scan(args: &ScanArgs, out: &Path) -> Result<()> {
    let options = HarvestOptions {
        strategy: args.strategy,
        section_names: if args.sections.is_empty() {
            DEFAULT_SECTION_NAMES.iter().map(|s| s.to_string()).collect()
        } else {
            args.sections.clone()
        },
        include_textual: args.textual,
    };
    std::fs::create_dir_all(out).at(out)?;
    let records = harvest_with(&args.package, args.language, &args.tree, &options, out)?;
    let mut manifest =
        if out.join(MANIFEST_FILE).exists() { load_manifest(out)? } else { CorpusManifest::new(Vec::new()) };
    let found = records.len();
    let mut all: Vec<_> = manifest.records.drain(..).filter(|r| r.artifact.origin_package != args.package).collect();
    all.extend(records);
    let mut merged = CorpusManifest::new(all);
    merged.build_notes = manifest.build_notes;
    merged.save_to(out)?;
    println!("{found} modules from {}", args.tree.display());
    Ok(())
}

fn dedup(out: &Path, mode: HashMode, level: Level) -> Result<()> {
    let m = load_manifest(out)?;
    match level {
        Level::Module => {
            let (m, report) = dedup_corpus(&m, out, mode);
            m.save_to(out)?;
            write_json(&out.join(DEDUP_REPORT_FILE), &report)?;
            println!("kept {} removed {} unprocessed {}", report.kept, report.removed, report.unprocessed);
        }
        Level::Function => {
            let report = function_dedup_report(&function_hash_index(&m, out, mode), mode);
            write_json(&out.join(FUNCTION_DEDUP_REPORT_FILE), &report)?;
            println!("functions {} unique {}", report.total_functions, report.unique_functions);
        }
    }
    Ok(())
}

/// Histograms over log2 bins of the given feature columns.
pub fn feature_histograms(samples: &[FeatureSample], properties: &[&str]) -> Result<Vec<Histogram>> {
    properties
        .iter()
        .map(|&prop| {
            let mut values: BTreeMap<LanguageTag, Vec<f64>> = BTreeMap::new();
            for s in samples {
                let v = s.features.get(prop).ok_or_else(|| Error::Validation(format!("unknown feature {prop:?}")))?;
                values.entry(s.function.language).or_default().push(v);
            }
            let max = values.values().flatten().copied().fold(0.0, f64::max);
            histogram(prop, &values, &log2_edges(max), true)
        })
        .collect()
}

fn render(inputs: &ReportInputs<'_>, out: &Path) -> Result<()> {
    let outcome = render_report(inputs, out)?;
    for n in &outcome.notices {
        eprintln!("{n}");
    }
    println!("{} files written to {}", outcome.written.len(), out.join(REPORTS_DIR).display());
    Ok(())
}

fn pass_table(args: &PassArgs, cfg: &ToolchainConfig, m: Option<&CorpusManifest>) -> Result<MutationTable> {
    if let Some(dir) = &args.replay {
        return replay_corpus(dir, &args.excluded(), args.per_occurrence);
    }
    let opt = cfg.toolchain.resolved_optimizer().ok_or_else(|| Error::ToolUnavailable {
        tool: "optimizer".into(),
        reason: "set IRFORGE_OPT or `opt` in the config file, or use --replay".into(),
    })?;
    let owned;
    let m = match m {
        Some(m) => m,
        None => {
            owned = load_manifest(&cfg.out_dir)?;
            &owned
        }
    };
    let options = TraceOptions {
        pipeline: args.pipeline.clone(),
        granularity: args.granularity.into(),
        exclude_languages: args.excluded(),
        per_occurrence: args.per_occurrence,
        jobs: cfg.jobs,
        record_dir: args.record.clone(),
    };
    let outcome = trace_corpus(m, &cfg.out_dir, &opt, &options)?;
    for (target, e) in &outcome.failures {
        eprintln!("{target}: {e}");
    }
    Ok(outcome.table)
}

fn analyze(a: Analyze, cfg: &ToolchainConfig) -> Result<()> {
    let out = cfg.out_dir.as_path();
    match a {
        Analyze::Features { sample } => {
            let m = load_manifest(out)?;
            let samples = sample_functions(&m, out, sample, cfg.seed);
            let rows = export_feature_table(&samples, &out.join(FEATURES_FILE))?;
            eprintln!("{rows} functions exported to {}", out.join(FEATURES_FILE).display());
            let hists = feature_histograms(&samples, &HISTOGRAM_PROPERTIES)?;
            render(&ReportInputs { histograms: &hists, ..Default::default() }, out)
        }
        Analyze::Opcodes { top } => {
            let d = opcode_distribution(&load_manifest(out)?, out, top);
            render(&ReportInputs { opcodes: Some(&d), ..Default::default() }, out)
        }
        Analyze::Passes(args) => {
            let table = pass_table(&args, cfg, None)?;
            render(&ReportInputs { passes: Some(&table), ..Default::default() }, out)
        }
        Analyze::DupHeatmap { mode } => {
            let matrix = duplication_heatmap(&function_hash_index(&load_manifest(out)?, out, mode));
            render(&ReportInputs { heatmap: Some(&matrix), ..Default::default() }, out)
        }
    }
}

fn read_json_table(path: &Path) -> Result<Option<serde_json::Value>> {
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(path).at(path)?;
    Ok(Some(serde_json::from_str(&text)?))
}

fn report(args: &ReportArgs, cfg: &ToolchainConfig) -> Result<()> {
    let out = cfg.out_dir.as_path();
    let m = load_manifest(out)?;
    let (opcodes, (heatmap, samples)) = rayon::join(
        || opcode_distribution(&m, out, args.top),
        || {
            rayon::join(
                || duplication_heatmap(&function_hash_index(&m, out, args.mode)),
                || sample_functions(&m, out, args.sample, cfg.seed),
            )
        },
    );
    let hists = feature_histograms(&samples, &HISTOGRAM_PROPERTIES)?;
    let passes = match &args.replay {
        Some(dir) => Some(replay_corpus(dir, &Default::default(), false)?),
        None => None,
    };
    let mut tables = vec![("size", serde_json::to_value(corpus_size_report(&m))?)];
    for (stem, file) in [("dedup", DEDUP_REPORT_FILE), ("function_dedup", FUNCTION_DEDUP_REPORT_FILE), ("tokens", TOKENS_FILE)] {
        if let Some(v) = read_json_table(&out.join(file))? {
            tables.push((stem, v));
        }
    }
    let inputs = ReportInputs {
        opcodes: Some(&opcodes),
        heatmap: Some(&heatmap),
        histograms: &hists,
        passes: passes.as_ref(),
        tables,
    };
    render(&inputs, out)
}
