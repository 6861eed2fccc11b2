// SPDX-License-Identifier: Apache-2.0

//! Text-level rewrites of IR functions that must not (or must) change
//! structural hashes.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Debug, Clone)]
pub struct FnSpan {
    pub name: String,
    /// Index of the `define` line.
    pub header: usize,
    /// Index of the closing `}` line.
    pub end: usize,
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || "._$-".contains(c)
}

fn define_name(line: &str) -> Option<String> {
    let at = line.find(" @")? + 2;
    let rest = &line[at..];
    if rest.starts_with('"') {
        return None;
    }
    let end = rest.find('(')?;
    Some(rest[..end].to_string())
}

/// Definitions whose names and locals are plain identifiers.
pub fn function_spans(lines: &[String]) -> Vec<FnSpan> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let l = &lines[i];
        if l.starts_with("define ") && l.trim_end().ends_with('{') {
            let end = (i + 1..lines.len()).find(|&j| lines[j] == "}").expect("unterminated function");
            let quoted = lines[i..=end].iter().any(|x| x.contains("%\""));
            if let Some(name) = define_name(l).filter(|_| !quoted) {
                out.push(FnSpan { name, header: i, end });
            }
            i = end;
        }
        i += 1;
    }
    out
}

pub fn named_types(lines: &[String]) -> BTreeSet<String> {
    lines
        .iter()
        .filter_map(|l| {
            let rest = l.strip_prefix('%')?;
            let (name, tail) = rest.split_once(" = ")?;
            tail.starts_with("type ").then(|| name.to_string())
        })
        .collect()
}

/// `%name` tokens outside string literals, as (byte offset of `%`, name).
fn local_tokens(line: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut in_str = false;
    let chars: Vec<(usize, char)> = line.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c == '"' {
            in_str = !in_str;
        } else if c == ';' && !in_str {
            break;
        } else if c == '%' && !in_str {
            let mut j = i + 1;
            while j < chars.len() && ident_char(chars[j].1) {
                j += 1;
            }
            if j > i + 1 {
                let end = if j < chars.len() { chars[j].0 } else { line.len() };
                out.push((pos, line[pos + 1..end].to_string()));
            }
            i = j;
            continue;
        }
        i += 1;
    }
    out
}

fn label_of(line: &str) -> Option<&str> {
    let head = line.split(';').next()?.trim_end();
    let name = head.strip_suffix(':')?;
    (!name.is_empty() && name.chars().all(ident_char)).then_some(name)
}

/// Values and labels defined inside a function (parameters included).
pub fn locals(lines: &[String], span: &FnSpan, types: &BTreeSet<String>) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for (_, name) in local_tokens(&lines[span.header]) {
        if !types.contains(&name) {
            out.insert(name);
        }
    }
    for l in &lines[span.header + 1..span.end] {
        let t = l.trim_start();
        if let Some(name) = label_of(t) {
            out.insert(name.to_string());
        } else if let Some((pos, name)) = local_tokens(t).first() {
            if *pos == 0 && t[1 + name.len()..].starts_with(" = ") {
                out.insert(name.clone());
            }
        }
    }
    out
}

fn rewrite_locals(line: &str, map: &BTreeMap<String, String>) -> String {
    let mut out = String::with_capacity(line.len());
    let mut last = 0;
    for (pos, name) in local_tokens(line) {
        if let Some(new) = map.get(&name) {
            out.push_str(&line[last..pos + 1]);
            out.push_str(new);
            last = pos + 1 + name.len();
        }
    }
    out.push_str(&line[last..]);
    if let Some(label) = label_of(out.trim_start()) {
        if let Some(new) = map.get(label) {
            let indent = out.len() - out.trim_start().len();
            out = format!("{}{}{}", &out[..indent], new, &out[indent + label.len()..]);
        }
    }
    out
}

/// Consistently rename every local value and label of the function.
pub fn alpha_rename<R: Rng>(lines: &mut [String], span: &FnSpan, rng: &mut R) -> usize {
    let types = named_types(lines);
    let names = locals(lines, span, &types);
    let salt: u32 = rng.gen();
    let mut order: Vec<&String> = names.iter().collect();
    order.shuffle(rng);
    let map: BTreeMap<String, String> =
        order.iter().enumerate().map(|(i, n)| ((*n).clone(), format!("r{salt:x}.{i}"))).collect();
    for l in &mut lines[span.header..span.end] {
        *l = rewrite_locals(l, &map);
    }
    map.len()
}

/// Position right after the parameter list of a `define` line.
fn after_params(header: &str, name: &str) -> Option<usize> {
    let start = header.find(&format!("@{name}("))? + name.len() + 1;
    let mut depth = 0;
    for (i, c) in header[start..].char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(start + i + 1);
                }
            }
            _ => {}
        }
    }
    None
}

/// Add function, parameter and attribute-group attributes. Returns how many
/// were inserted.
pub fn insert_attributes<R: Rng>(lines: &mut [String], span: &FnSpan, rng: &mut R) -> usize {
    let mut inserted = 0;
    let tag: u32 = rng.gen();
    let header = lines[span.header].clone();
    if let Some(pos) = after_params(&header, &span.name) {
        let mut h = header.clone();
        h.insert_str(pos, &format!(" \"probe-{tag:x}\""));
        // a parameter attribute on the first named parameter
        let types = named_types(lines);
        let param = local_tokens(&h[..pos])
            .into_iter()
            .find(|(_, n)| !types.contains(n));
        if let Some((p, _)) = param.filter(|_| rng.gen_bool(0.7)) {
            if !h[..p].ends_with("noundef ") {
                h.insert_str(p, "noundef ");
                inserted += 1;
            }
        }
        lines[span.header] = h;
        inserted += 1;
    }
    for l in lines.iter_mut() {
        if l.starts_with("attributes #") && l.trim_end().ends_with('}') && rng.gen_bool(0.5) {
            let close = l.rfind('}').unwrap();
            l.insert_str(close, &format!("\"group-{tag:x}\"=\"1\" "));
            inserted += 1;
        }
    }
    inserted
}

/// Whether metadata may be appended to this line of a function body.
fn attachable(line: &str, next: Option<&str>) -> bool {
    let t = line.trim();
    if t.is_empty() || t.starts_with(';') || label_of(t).is_some() || t.contains(';') {
        return false;
    }
    let opens = t.chars().filter(|c| "[({".contains(*c)).count();
    let closes = t.chars().filter(|c| "])}".contains(*c)).count();
    if opens != closes {
        return false;
    }
    let next = next.map(str::trim).unwrap_or("");
    !(next.starts_with("to label")
        || next.starts_with("cleanup")
        || next.starts_with("catch ")
        || next.starts_with("filter ")
        || next.starts_with(']'))
}

/// Attach fresh metadata to some instructions and edit existing metadata
/// strings. New nodes are appended to `lines`. Returns edits made.
pub fn edit_metadata<R: Rng>(lines: &mut Vec<String>, span: &FnSpan, rng: &mut R, node_id: usize) -> usize {
    let mut edits = 0;
    let candidates: Vec<usize> = (span.header + 1..span.end)
        .filter(|&i| attachable(&lines[i], lines.get(i + 1).map(String::as_str)))
        .collect();
    for &i in &candidates {
        if rng.gen_bool(0.4) {
            lines[i].push_str(&format!(", !probe !{node_id}"));
            edits += 1;
        }
    }
    if edits == 0 {
        if let Some(&i) = candidates.first() {
            lines[i].push_str(&format!(", !probe !{node_id}"));
            edits += 1;
        }
    }
    for l in lines.iter_mut() {
        if l.starts_with('!') && l.contains("!\"") && rng.gen_bool(0.5) {
            *l = l.replacen("!\"", "!\"edited ", 1);
            edits += 1;
        }
    }
    lines.push(format!("!{node_id} = !{{!\"probe\", i32 {}}}", rng.gen_range(0..1000)));
    edits
}

/// Rename `@callee` inside one function and declare the new name by copying
/// the callee's declaration.
pub fn rename_callee(lines: &mut Vec<String>, span: &FnSpan, callee: &str, new_name: &str) -> bool {
    let decl = lines
        .iter()
        .find(|l| l.starts_with("declare ") && l.contains(&format!("@{callee}(")))
        .cloned();
    let Some(decl) = decl else { return false };
    let pat = format!("@{callee}");
    let mut changed = false;
    for l in &mut lines[span.header + 1..span.end] {
        let mut out = String::new();
        let mut rest = l.as_str();
        while let Some(p) = rest.find(&pat) {
            let after = &rest[p + pat.len()..];
            let boundary = after.chars().next().is_none_or(|c| !ident_char(c));
            out.push_str(&rest[..p]);
            if boundary {
                out.push('@');
                out.push_str(new_name);
                changed = true;
            } else {
                out.push_str(&pat);
            }
            rest = after;
        }
        out.push_str(rest);
        *l = out;
    }
    lines.push(decl.replacen(&format!("@{callee}("), &format!("@{new_name}("), 1));
    changed
}

pub fn split_lines(text: &str) -> Vec<String> {
    text.lines().map(String::from).collect()
}

pub fn join_lines(lines: &[String]) -> String {
    let mut s = lines.join("\n");
    s.push('\n');
    s
}
