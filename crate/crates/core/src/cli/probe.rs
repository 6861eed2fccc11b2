// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Stdio};

use serde::Serialize;

use crate::corpus::Toolchain;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToolStatus {
    pub found: bool,
    pub path: Option<String>,
    pub version: Option<String>,
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Capabilities {
    pub build: bool,
    pub disassembly: bool,
    pub pass_tracing: bool,
    /// Parsing, dedup and the analyses over textual IR need no tools.
    pub offline_analyses: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub tools: BTreeMap<String, ToolStatus>,
    pub capabilities: Capabilities,
}

fn first_line_of_version(path: &Path) -> Option<String> {
    let out = Command::new(path)
        .arg("--version")
        .stdin(Stdio::null())
        .output()
        .ok()?;
    let text = if out.stdout.is_empty() { out.stderr } else { out.stdout };
    String::from_utf8_lossy(&text).lines().map(str::trim).find(|l| !l.is_empty()).map(String::from)
}

fn probe_one(configured: Option<&Path>, resolved: Option<std::path::PathBuf>) -> ToolStatus {
    match (configured, resolved) {
        (_, Some(p)) => ToolStatus {
            found: true,
            path: Some(p.display().to_string()),
            version: first_line_of_version(&p),
            diagnostic: None,
        },
        (Some(c), None) => ToolStatus {
            found: false,
            path: None,
            version: None,
            diagnostic: Some(format!("{} is not an executable file", c.display())),
        },
        (None, None) => ToolStatus { found: false, path: None, version: None, diagnostic: Some("not configured".into()) },
    }
}

/// Check which configured tools exist. Never fails; missing tools only
/// disable the stages that need them.
pub fn probe_toolchain(tc: &Toolchain) -> ProbeReport {
    let mut tools = BTreeMap::new();
    tools.insert("cc".to_string(), probe_one(tc.cc.as_deref(), tc.resolved_cc()));
    tools.insert(
        "disassembler".to_string(),
        probe_one(tc.disassembler.as_deref(), tc.resolved_disassembler()),
    );
    tools.insert("optimizer".to_string(), probe_one(tc.optimizer.as_deref(), tc.resolved_optimizer()));
    let found = |k: &str| tools[k].found;
    let capabilities = Capabilities {
        build: found("cc"),
        disassembly: found("disassembler"),
        pass_tracing: found("optimizer"),
        offline_analyses: true,
    };
    ProbeReport { tools, capabilities }
}
