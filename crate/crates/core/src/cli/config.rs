// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::corpus::Toolchain;
use crate::error::{Error, IoContext, Result};

/// Settings resolved from flags, environment and the config file, in that
/// order of precedence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToolchainConfig {
    pub toolchain: Toolchain,
    pub jobs: usize,
    pub out_dir: PathBuf,
    pub seed: u64,
}

/// Contents of a `key = value` config file. Blank lines and `#` comments
/// are ignored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigFile {
    pub toolchain: Toolchain,
    pub jobs: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<ConfigFile> {
        let text = std::fs::read_to_string(path).at(path)?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Relative paths are taken relative to `base`, except bare tool names,
    /// which are looked up on `PATH` later.
    pub fn parse(text: &str, base: &Path) -> Result<ConfigFile> {
        let mut cfg = ConfigFile::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::parse(i + 1, format!("expected `key = value`, found {line:?}")))?;
            let tool = || {
                let p = PathBuf::from(value);
                if p.is_relative() && p.components().count() > 1 {
                    base.join(p)
                } else {
                    p
                }
            };
            let number = |what: &str| {
                value.parse::<u64>().map_err(|_| Error::parse(i + 1, format!("{what} must be a non-negative integer")))
            };
            match key {
                "cc" => cfg.toolchain.cc = Some(tool()),
                "cxx" => cfg.toolchain.cxx = Some(tool()),
                "cargo" => cfg.toolchain.cargo = Some(tool()),
                "dis" | "disassembler" => cfg.toolchain.disassembler = Some(tool()),
                "opt" | "optimizer" => cfg.toolchain.optimizer = Some(tool()),
                "jobs" => cfg.jobs = Some(number("jobs")? as usize),
                "seed" => cfg.seed = Some(number("seed")?),
                "out" => cfg.out_dir = Some(base.join(value)),
                other => return Err(Error::parse(i + 1, format!("unknown config key {other:?}"))),
            }
        }
        Ok(cfg)
    }
}

pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

impl ToolchainConfig {
    pub fn resolve(
        jobs: Option<usize>,
        out_dir: Option<PathBuf>,
        seed: Option<u64>,
        file: Option<ConfigFile>,
    ) -> Result<ToolchainConfig> {
        let file = file.unwrap_or_default();
        let jobs = jobs.or(file.jobs).unwrap_or_else(default_jobs);
        if jobs == 0 {
            return Err(Error::Validation("--jobs must be at least 1".into()));
        }
        Ok(ToolchainConfig {
            toolchain: Toolchain::from_env().or(file.toolchain),
            jobs,
            out_dir: out_dir.or(file.out_dir).unwrap_or_else(|| PathBuf::from(".")),
            seed: seed.or(file.seed).unwrap_or(0),
        })
    }
}
