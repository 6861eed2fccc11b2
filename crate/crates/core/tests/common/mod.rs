// SPDX-License-Identifier: Apache-2.0
#![allow(dead_code)]

pub mod criteria;
pub mod elfgen;
pub mod graph;
pub mod mutate;
pub mod stub;
pub mod synth;

use std::collections::BTreeMap;
use std::path::PathBuf;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixtures_dir().join("ir").join(name)).unwrap()
}

/// All `.ll` fixtures, sorted by file name.
pub fn ir_fixtures() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = std::fs::read_dir(fixtures_dir().join("ir"))
        .unwrap()
        .filter_map(|e| {
            let p = e.unwrap().path();
            (p.extension()? == "ll").then(|| {
                let name = p.file_name().unwrap().to_string_lossy().into_owned();
                (name, std::fs::read_to_string(&p).unwrap())
            })
        })
        .collect();
    out.sort();
    out
}

/// Independent opcode counter: a line is an instruction when it sits inside a
/// `define` body and is not a label, comment, closing brace or continuation.
/// The opcode is the first word after an optional `%x =` and call markers.
pub fn scan_opcodes(text: &str) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    let mut in_body = false;
    let mut depth = 0i32; // bracket depth of a multi-line instruction
    for raw in text.lines() {
        let line = raw.trim();
        if !in_body {
            if line.starts_with("define ") && line.ends_with('{') {
                in_body = true;
            }
            continue;
        }
        if depth > 0 {
            depth += bracket_delta(line);
            continue;
        }
        if line == "}" {
            in_body = false;
            continue;
        }
        if line.is_empty()
            || line.starts_with(';')
            || line.starts_with("#dbg_")
            || line.ends_with(':') && !line.contains(' ')
            || line.starts_with('"') && line.contains("\":")
            || line.split(';').next().unwrap().trim_end().ends_with(':')
            || line == "cleanup"
            || line.starts_with("cleanup,")
            || line.starts_with("catch ")
            || line.starts_with("filter ")
            || line.starts_with("to label ")
        {
            continue;
        }
        depth += bracket_delta(line);
        let mut words = line.split_whitespace().peekable();
        if words.peek().is_some_and(|w| w.starts_with('%')) {
            words.next();
            words.next(); // "="
        }
        let mut op = words.next().unwrap_or("");
        while matches!(op, "tail" | "musttail" | "notail") {
            op = words.next().unwrap_or("");
        }
        *counts.entry(op.to_string()).or_default() += 1;
    }
    counts
}

fn bracket_delta(line: &str) -> i32 {
    let mut d = 0;
    let mut in_str = false;
    for c in line.chars() {
        match c {
            '"' => in_str = !in_str,
            ';' if !in_str => break,
            '[' | '(' | '{' if !in_str => d += 1,
            ']' | ')' | '}' if !in_str => d -= 1,
            _ => {}
        }
    }
    d
}
