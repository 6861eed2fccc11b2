// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::banner::parse_print_changed;
use super::table::{mutation_frequency, MutationTable, TargetEvents};
use crate::corpus::extract::extract_function;
use crate::corpus::manifest::CorpusManifest;
use crate::error::{Error, IoContext, Result};
use crate::irparse::parse_module;
use crate::language::LanguageTag;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    #[default]
    Function,
    Module,
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Granularity::Function => "function",
            Granularity::Module => "module",
        })
    }
}

impl FromStr for Granularity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "function" => Ok(Granularity::Function),
            "module" => Ok(Granularity::Module),
            other => Err(Error::Validation(format!("unknown granularity {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptRun {
    pub log: String,
    /// The optimizer exited non-zero but still produced banners.
    pub exit_failed: bool,
}

/// Run `<opt> -passes=<pipeline> -print-changed -disable-output <module>` and
/// return its diagnostic stream.
pub fn run_opt_trace(opt: &Path, module_path: &Path, pipeline_spec: &str) -> Result<OptRun> {
    if pipeline_spec.trim().is_empty() {
        return Err(Error::Validation("empty pass pipeline".into()));
    }
    let out = Command::new(opt)
        .arg(format!("-passes={pipeline_spec}"))
        .arg("-print-changed")
        .arg("-disable-output")
        .arg(module_path)
        .output()
        .map_err(|e| Error::ToolUnavailable {
            tool: opt.display().to_string(),
            reason: e.to_string(),
        })?;
    let mut log = String::from_utf8_lossy(&out.stderr).into_owned();
    log.push_str(&String::from_utf8_lossy(&out.stdout));
    let exit_failed = !out.status.success();
    if exit_failed && parse_print_changed(&log).is_empty() {
        return Err(Error::Tool {
            tool: opt.display().to_string(),
            diagnostic: if log.trim().is_empty() {
                format!("exited with {} and no output", out.status)
            } else {
                log.trim().to_string()
            },
        });
    }
    Ok(OptRun { log, exit_failed })
}

#[derive(Debug, Clone)]
pub struct TraceOptions {
    pub pipeline: String,
    pub granularity: Granularity,
    pub exclude_languages: BTreeSet<LanguageTag>,
    pub per_occurrence: bool,
    pub jobs: usize,
    /// Write each target's log as `<dir>/<language>/<target>.log`.
    pub record_dir: Option<PathBuf>,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            pipeline: "default<O3>".into(),
            granularity: Granularity::Function,
            exclude_languages: BTreeSet::new(),
            per_occurrence: false,
            jobs: 1,
            record_dir: None,
        }
    }
}

#[derive(Debug)]
pub struct TraceOutcome {
    pub table: MutationTable,
    pub targets: Vec<TargetEvents>,
    /// Targets excluded because the optimizer failed on them.
    pub failures: Vec<(String, Error)>,
}

struct Job {
    language: LanguageTag,
    id: String,
    text: String,
}

/// Trace every live record (or each of its functions) through the
/// optimizer and aggregate mutation frequencies. Failing targets are
/// excluded from the denominators and reported.
pub fn trace_corpus(manifest: &CorpusManifest, root: &Path, opt: &Path, options: &TraceOptions) -> Result<TraceOutcome> {
    if options.pipeline.trim().is_empty() {
        return Err(Error::Validation("empty pass pipeline".into()));
    }
    let mut jobs = Vec::new();
    let mut failures = Vec::new();
    for r in manifest.live_records() {
        if options.exclude_languages.contains(&r.language_tag) {
            continue;
        }
        let text = match r.read_text(root) {
            Ok(t) => t,
            Err(e) => {
                failures.push((r.artifact.path.clone(), e));
                continue;
            }
        };
        match options.granularity {
            Granularity::Module => jobs.push(Job { language: r.language_tag, id: r.artifact.path.clone(), text }),
            Granularity::Function => {
                let module = match parse_module(&text) {
                    Ok(m) => m,
                    Err(e) => {
                        failures.push((r.artifact.path.clone(), e));
                        continue;
                    }
                };
                for f in module.definitions() {
                    let id = format!("{}@{}", r.artifact.path, f.name);
                    match extract_function(&text, &f.name) {
                        Ok(t) => jobs.push(Job { language: r.language_tag, id, text: t }),
                        Err(e) => failures.push((id, e)),
                    }
                }
            }
        }
    }

    let scratch = tempfile::tempdir().map_err(|e| Error::io(std::env::temp_dir(), e))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs.max(1))
        .build()
        .map_err(|e| Error::Validation(format!("thread pool: {e}")))?;
    let results: Vec<(usize, Result<String>)> = pool.install(|| {
        jobs.par_iter()
            .enumerate()
            .map(|(i, job)| {
                let path = scratch.path().join(format!("{i}.ll"));
                let run = std::fs::write(&path, &job.text)
                    .at(&path)
                    .and_then(|_| run_opt_trace(opt, &path, &options.pipeline))
                    .map(|r| r.log);
                (i, run)
            })
            .collect()
    });

    let mut targets = Vec::new();
    for (i, res) in results {
        let job = &jobs[i];
        match res {
            Ok(log) => {
                if let Some(dir) = &options.record_dir {
                    record_log(dir, job.language, &job.id, &log)?;
                }
                targets.push(TargetEvents {
                    language: job.language,
                    target: job.id.clone(),
                    events: parse_print_changed(&log),
                });
            }
            Err(e) => failures.push((job.id.clone(), e)),
        }
    }
    Ok(TraceOutcome {
        table: mutation_frequency(&targets, options.per_occurrence),
        targets,
        failures,
    })
}

fn log_file_name(id: &str) -> String {
    let safe: String = id
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || "._-@".contains(c) { c } else { '_' })
        .collect();
    format!("{safe}.log")
}

fn record_log(dir: &Path, lang: LanguageTag, id: &str, log: &str) -> Result<()> {
    let d = dir.join(lang.as_str());
    std::fs::create_dir_all(&d).at(&d)?;
    let p = d.join(log_file_name(id));
    std::fs::write(&p, log).at(p)
}

/// Load recorded logs laid out as `<dir>/<language>/<target>.log`, sorted by
/// language and file name.
pub fn replay_logs(dir: &Path) -> Result<Vec<TargetEvents>> {
    let mut out = Vec::new();
    let mut langs: Vec<_> = std::fs::read_dir(dir).at(dir)?.filter_map(|e| e.ok()).collect();
    langs.sort_by_key(|e| e.file_name());
    for entry in langs {
        if !entry.file_type().is_ok_and(|t| t.is_dir()) {
            continue;
        }
        let name = entry.file_name().to_string_lossy().into_owned();
        let language: LanguageTag = name
            .parse()
            .map_err(|_| Error::Validation(format!("log directory {name:?} is not a language tag")))?;
        let mut logs: Vec<_> = std::fs::read_dir(entry.path())
            .at(entry.path())?
            .filter_map(|e| e.ok())
            .filter(|e| e.path().extension().is_some_and(|x| x == "log"))
            .collect();
        logs.sort_by_key(|e| e.file_name());
        for log in logs {
            let text = std::fs::read_to_string(log.path()).at(log.path())?;
            let stem = log.path().file_stem().unwrap().to_string_lossy().into_owned();
            out.push(TargetEvents {
                language,
                target: stem,
                events: parse_print_changed(&text),
            });
        }
    }
    Ok(out)
}

/// Aggregate recorded logs, skipping excluded languages.
pub fn replay_corpus(dir: &Path, exclude: &BTreeSet<LanguageTag>, per_occurrence: bool) -> Result<MutationTable> {
    let targets: Vec<TargetEvents> = replay_logs(dir)?.into_iter().filter(|t| !exclude.contains(&t.language)).collect();
    Ok(mutation_frequency(&targets, per_occurrence))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_pipeline_is_rejected_before_running() {
        let err = run_opt_trace(Path::new("/nonexistent/opt"), Path::new("x.ll"), "  ").unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn missing_optimizer_is_unavailable() {
        let err = run_opt_trace(Path::new("/nonexistent/opt"), Path::new("x.ll"), "default<O3>").unwrap_err();
        assert!(matches!(err, Error::ToolUnavailable { .. }));
    }

    #[test]
    fn log_names_are_filesystem_safe() {
        assert_eq!(log_file_name("pkg/0.ll@main"), "pkg_0.ll@main.log");
    }
}
