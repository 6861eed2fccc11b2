// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::Command;

use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use super::package::{Ecosystem, PackageDescriptor, Source};
use crate::error::{Error, IoContext, Result};

/// Flags that make clang store each translation unit's bitcode in the object.
pub const EMBED_BITCODE_FLAGS: &str = "-Xclang -fembed-bitcode=all";
/// rustc flags for unoptimized bitcode next to the regular outputs.
pub const RUST_BITCODE_FLAGS: &str = "--emit=llvm-bc,link -C opt-level=0";

/// External tools. Unset entries are looked up on `PATH` where a sensible
/// default name exists.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Toolchain {
    pub cc: Option<PathBuf>,
    pub cxx: Option<PathBuf>,
    pub cargo: Option<PathBuf>,
    pub disassembler: Option<PathBuf>,
    pub optimizer: Option<PathBuf>,
}

impl Toolchain {
    /// `IRFORGE_CC`, `IRFORGE_CXX`, `IRFORGE_CARGO`, `IRFORGE_DIS`, `IRFORGE_OPT`.
    pub fn from_env() -> Self {
        let var = |k: &str| std::env::var_os(k).filter(|v| !v.is_empty()).map(PathBuf::from);
        Toolchain {
            cc: var("IRFORGE_CC"),
            cxx: var("IRFORGE_CXX"),
            cargo: var("IRFORGE_CARGO"),
            disassembler: var("IRFORGE_DIS"),
            optimizer: var("IRFORGE_OPT"),
        }
    }

    /// Fill unset entries from `other`.
    pub fn or(self, other: Toolchain) -> Toolchain {
        Toolchain {
            cc: self.cc.or(other.cc),
            cxx: self.cxx.or(other.cxx),
            cargo: self.cargo.or(other.cargo),
            disassembler: self.disassembler.or(other.disassembler),
            optimizer: self.optimizer.or(other.optimizer),
        }
    }

    pub fn resolved_cc(&self) -> Option<PathBuf> {
        self.cc.as_deref().and_then(resolve_tool)
    }

    /// Explicit CXX, else a `clang++` next to a `clang` CC, else CC itself.
    pub fn resolved_cxx(&self) -> Option<PathBuf> {
        if let Some(cxx) = &self.cxx {
            return resolve_tool(cxx);
        }
        let cc = self.resolved_cc()?;
        if cc.file_name().is_some_and(|n| n == "clang") {
            if let Some(pp) = resolve_tool(&cc.with_file_name("clang++")) {
                return Some(pp);
            }
        }
        Some(cc)
    }

    pub fn resolved_cargo(&self) -> Option<PathBuf> {
        resolve_tool(self.cargo.as_deref().unwrap_or(Path::new("cargo")))
    }

    pub fn resolved_disassembler(&self) -> Option<PathBuf> {
        self.disassembler.as_deref().and_then(resolve_tool)
    }

    pub fn resolved_optimizer(&self) -> Option<PathBuf> {
        self.optimizer.as_deref().and_then(resolve_tool)
    }
}

/// A path containing a separator must name an executable file and comes
/// back absolute, since builds run in other directories; a bare name is
/// searched on `PATH`.
pub fn resolve_tool(tool: &Path) -> Option<PathBuf> {
    if tool.components().count() > 1 || tool.is_absolute() {
        return is_executable(tool).then(|| std::path::absolute(tool).ok()).flatten();
    }
    let path = std::env::var_os("PATH")?;
    std::env::split_paths(&path)
        .map(|dir| dir.join(tool))
        .find(|p| is_executable(p))
}

fn is_executable(p: &Path) -> bool {
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        p.metadata().is_ok_and(|m| m.is_file() && m.permissions().mode() & 0o111 != 0)
    }
    #[cfg(not(unix))]
    {
        p.is_file()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "lowercase")]
pub enum BuildStatus {
    Success,
    Failed(String),
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildResult {
    pub package: String,
    pub status: BuildStatus,
    /// Where the sources were fetched and built; harvested afterwards.
    pub build_tree: PathBuf,
    pub log: String,
}

/// Fetch and build one package under `workdir/<name>`, with the IR flags of
/// its ecosystem injected. Never returns an error: problems become
/// `Failed` or `Skipped` results.
pub fn build_package(desc: &PackageDescriptor, toolchain: &Toolchain, workdir: &Path) -> BuildResult {
    let build_tree = workdir.join(&desc.name);
    let mut result = BuildResult {
        package: desc.name.clone(),
        status: BuildStatus::Success,
        build_tree: build_tree.clone(),
        log: String::new(),
    };

    let env = match injected_env(desc, toolchain) {
        Ok(env) => env,
        Err(reason) => {
            result.status = BuildStatus::Skipped(reason);
            return result;
        }
    };

    if let Err(e) = fetch(desc, &build_tree, &mut result.log) {
        result.status = BuildStatus::Failed(format!("fetch failed: {e}"));
        return result;
    }

    let commands = if desc.build_commands.is_empty() {
        default_commands(desc.ecosystem)
    } else {
        desc.build_commands.clone()
    };
    for template in &commands {
        let cmd = expand_template(template, &env);
        result.log.push_str(&format!("$ {cmd}\n"));
        let output = Command::new("sh")
            .arg("-c")
            .arg(&cmd)
            .current_dir(&build_tree)
            .envs(env.iter().map(|(k, v)| (k, v)))
            .output();
        match output {
            Ok(out) => {
                result.log.push_str(&String::from_utf8_lossy(&out.stdout));
                result.log.push_str(&String::from_utf8_lossy(&out.stderr));
                if !out.status.success() {
                    result.status = BuildStatus::Failed(format!("`{cmd}` exited with {}", out.status));
                    return result;
                }
            }
            Err(e) => {
                result.status = BuildStatus::Failed(format!("could not run `{cmd}`: {e}"));
                return result;
            }
        }
    }
    result
}

/// Environment for the build commands, or the reason the toolchain is
/// missing.
fn injected_env(desc: &PackageDescriptor, tc: &Toolchain) -> std::result::Result<Vec<(String, String)>, String> {
    let extra = desc.extra_flags.join(" ");
    let with_extra = |base: &str| {
        if extra.is_empty() {
            base.to_string()
        } else {
            format!("{base} {extra}")
        }
    };
    let unavailable = |tool: &str| format!("toolchain unavailable: no usable {tool}");
    let mut env = Vec::new();
    if desc.ecosystem.is_c_family() {
        let cc = tc.resolved_cc().ok_or_else(|| unavailable("C compiler (IRFORGE_CC)"))?;
        let cxx = tc.resolved_cxx().ok_or_else(|| unavailable("C++ compiler"))?;
        let flags = with_extra(EMBED_BITCODE_FLAGS);
        env.push(("CC".into(), cc.to_string_lossy().into_owned()));
        env.push(("CXX".into(), cxx.to_string_lossy().into_owned()));
        env.push(("CFLAGS".into(), flags.clone()));
        env.push(("CXXFLAGS".into(), flags));
    } else if desc.ecosystem == Ecosystem::Cargo {
        let cargo = tc.resolved_cargo().ok_or_else(|| unavailable("cargo"))?;
        env.push(("CARGO".into(), cargo.to_string_lossy().into_owned()));
        env.push(("RUSTFLAGS".into(), with_extra(RUST_BITCODE_FLAGS)));
    }
    Ok(env)
}

fn default_commands(eco: Ecosystem) -> Vec<String> {
    let v = |cmds: &[&str]| cmds.iter().map(|s| s.to_string()).collect();
    match eco {
        Ecosystem::Cargo => v(&["\"{CARGO}\" build"]),
        Ecosystem::Cmake => v(&[
            "cmake -S . -B _irforge_build -DCMAKE_C_COMPILER=\"{CC}\" -DCMAKE_CXX_COMPILER=\"{CXX}\"",
            "cmake --build _irforge_build",
        ]),
        Ecosystem::Autotools | Ecosystem::SpackLike => v(&["./configure", "make"]),
        Ecosystem::RawShell | Ecosystem::Swiftpm | Ecosystem::Prebuilt => Vec::new(),
    }
}

/// Replace `{VAR}` with values from the injected environment.
pub fn expand_template(template: &str, env: &[(String, String)]) -> String {
    let mut out = template.to_string();
    for (k, v) in env {
        out = out.replace(&format!("{{{k}}}"), v);
    }
    out
}

fn fetch(desc: &PackageDescriptor, dest: &Path, log: &mut String) -> Result<()> {
    match fetch_source(&desc.source, dest, log) {
        Ok(()) => Ok(()),
        Err(primary) => match &desc.fallback_source {
            Some(fb) => {
                log.push_str(&format!("primary source failed ({primary}); trying fallback\n"));
                fetch_source(fb, dest, log)
            }
            None => Err(primary),
        },
    }
}

fn fetch_source(src: &Source, dest: &Path, log: &mut String) -> Result<()> {
    if dest.exists() {
        std::fs::remove_dir_all(dest).at(dest)?;
    }
    match src {
        Source::Local { path } => copy_tree(path, dest),
        Source::Git { url, reference } => {
            run_tool(Command::new("git").arg("clone").arg("--quiet").arg(url).arg(dest), "git", log)?;
            if let Some(r) = reference {
                run_tool(Command::new("git").arg("-C").arg(dest).arg("checkout").arg("--quiet").arg(r), "git", log)?;
            }
            Ok(())
        }
        Source::Tarball { location } => {
            std::fs::create_dir_all(dest).at(dest)?;
            let archive = if location.contains("://") {
                let tmp = dest.with_extension("download");
                run_tool(Command::new("curl").arg("-fsSL").arg("-o").arg(&tmp).arg(location), "curl", log)?;
                tmp
            } else {
                PathBuf::from(location)
            };
            run_tool(Command::new("tar").arg("-xf").arg(&archive).arg("-C").arg(dest), "tar", log)?;
            hoist_single_directory(dest)
        }
    }
}

/// Archives usually wrap everything in one top-level directory; build from
/// inside it.
fn hoist_single_directory(dest: &Path) -> Result<()> {
    let entries: Vec<_> = std::fs::read_dir(dest).at(dest)?.filter_map(|e| e.ok()).collect();
    if let [only] = entries.as_slice() {
        if only.file_type().is_ok_and(|t| t.is_dir()) {
            let inner = only.path();
            let tmp = dest.with_extension("hoist");
            std::fs::rename(&inner, &tmp).at(&inner)?;
            std::fs::remove_dir(dest).at(dest)?;
            std::fs::rename(&tmp, dest).at(&tmp)?;
        }
    }
    Ok(())
}

fn run_tool(cmd: &mut Command, tool: &str, log: &mut String) -> Result<()> {
    let out = cmd.output().map_err(|e| Error::ToolUnavailable {
        tool: tool.into(),
        reason: e.to_string(),
    })?;
    log.push_str(&String::from_utf8_lossy(&out.stderr));
    if out.status.success() {
        Ok(())
    } else {
        Err(Error::Tool {
            tool: tool.into(),
            diagnostic: String::from_utf8_lossy(&out.stderr).trim().to_string(),
        })
    }
}

pub(crate) fn copy_tree(from: &Path, to: &Path) -> Result<()> {
    if !from.is_dir() {
        return Err(Error::NotFound(format!("source directory {}", from.display())));
    }
    for entry in WalkDir::new(from) {
        let entry = entry.map_err(|e| Error::Validation(e.to_string()))?;
        let rel = entry.path().strip_prefix(from).expect("walkdir yields children");
        let target = to.join(rel);
        if entry.file_type().is_dir() {
            std::fs::create_dir_all(&target).at(&target)?;
        } else {
            std::fs::copy(entry.path(), &target).at(&target)?;
        }
    }
    Ok(())
}
