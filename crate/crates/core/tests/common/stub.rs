// SPDX-License-Identifier: Apache-2.0

//! Drives the `ir-forge` binary over the stub-toolchain fixture.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_ir-forge"))
}

pub fn stub_dir() -> PathBuf {
    super::fixtures_dir().join("stub")
}

pub fn toolchain_dir() -> PathBuf {
    super::fixtures_dir().join("toolchain")
}

pub fn clang_available() -> bool {
    Command::new("clang").arg("--version").output().is_ok_and(|o| o.status.success())
}

/// Run the CLI with a clean tool environment.
pub fn run(args: &[&str], extra_env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(bin());
    cmd.args(args)
        .env("SOURCE_DATE_EPOCH", "0")
        .env_remove("IRFORGE_CC")
        .env_remove("IRFORGE_CXX")
        .env_remove("IRFORGE_DIS")
        .env_remove("IRFORGE_OPT")
        .env_remove("RUST_LOG");
    for (k, v) in extra_env {
        cmd.env(k, v);
    }
    cmd.output().expect("spawn ir-forge")
}

fn check(step: &str, out: &Output) -> Result<(), String> {
    if out.status.code() == Some(0) {
        Ok(())
    } else {
        Err(format!(
            "`{step}` exited with {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr).trim()
        ))
    }
}

/// build -> scan -> disassemble -> dedup -> analyze opcodes -> report, into `out`.
pub fn run_pipeline(out: &Path) -> Result<(), String> {
    let conf = stub_dir().join("toolchain.conf");
    let pkgs = stub_dir().join("packages.json");
    let objects = stub_dir().join("objects");
    let o = out.to_str().unwrap();
    let c = conf.to_str().unwrap();
    let steps: Vec<Vec<&str>> = vec![
        vec!["--config", c, "--out", o, "--jobs", "2", "build", "--packages", pkgs.to_str().unwrap()],
        vec!["--out", o, "scan", objects.to_str().unwrap(), "--package", "loose-objects", "--language", "C"],
        vec!["--config", c, "--out", o, "disassemble"],
        vec!["--out", o, "dedup", "--mode", "coarse"],
        vec!["--out", o, "analyze", "opcodes", "--top", "10"],
        vec!["--out", o, "--seed", "7", "report"],
    ];
    for args in steps {
        let step = args.join(" ");
        check(&step, &run(&args, &[]))?;
    }
    Ok(())
}

/// Every file under `dir`, keyed by relative path.
pub fn read_tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    walkdir::WalkDir::new(dir)
        .sort_by_file_name()
        .into_iter()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_type().is_file())
        .map(|e| {
            let rel = e.path().strip_prefix(dir).unwrap().to_string_lossy().into_owned();
            (rel, std::fs::read(e.path()).unwrap())
        })
        .collect()
}
