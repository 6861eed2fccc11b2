// SPDX-License-Identifier: Apache-2.0

use std::collections::HashSet;

use super::lexer::{self, lex_trees, render, split_commas, Delim, Token, Tree};
use super::model::*;
use crate::error::{Error, Result};

/// What a top-level statement declares. Used by function extraction, which
/// slices the original text instead of re-printing the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum ItemKind {
    Header,
    TypeDef,
    Comdat,
    Global,
    FunctionDef,
    FunctionDecl,
    AttrGroup,
    Metadata,
    Other,
}

#[derive(Debug, Clone)]
pub(crate) struct TopItem {
    pub kind: ItemKind,
    /// Symbol name without sigil; empty for headers and "other" items.
    pub name: String,
    /// Zero-based inclusive line range in the source text.
    pub first_line: usize,
    pub last_line: usize,
}

/// Parse textual IR into an [`IrModule`].
pub fn parse_module(text: &str) -> Result<IrModule> {
    parse_with_items(text).map(|(m, _)| m)
}

pub(crate) fn parse_with_items(text: &str) -> Result<(IrModule, Vec<TopItem>)> {
    let lines: Vec<&str> = text.lines().collect();
    let type_names = collect_type_names(&lines);
    let mut p = ModuleParser {
        lines: &lines,
        pos: 0,
        types: &type_names,
        module: IrModule {
            type_names: {
                let mut v: Vec<String> = type_names.iter().cloned().collect();
                v.sort();
                v
            },
            ..IrModule::default()
        },
        items: Vec::new(),
        fn_names: HashSet::new(),
    };
    p.run()?;
    Ok((p.module, p.items))
}

fn collect_type_names(lines: &[&str]) -> HashSet<String> {
    let mut names = HashSet::new();
    for line in lines {
        let t = line.trim_start();
        if !t.starts_with('%') {
            continue;
        }
        if let Ok(toks) = lexer::lex(lexer::strip_comment(t)) {
            if let [Token::Local(name), Token::Equals, Token::Word(w), ..] = toks.as_slice() {
                if w == "type" {
                    names.insert(name.clone());
                }
            }
        }
    }
    names
}

struct ModuleParser<'a> {
    lines: &'a [&'a str],
    pos: usize,
    types: &'a HashSet<String>,
    module: IrModule,
    items: Vec<TopItem>,
    fn_names: HashSet<String>,
}

fn lex_err(line: usize, e: lexer::LexError) -> Error {
    Error::parse(line, e.0)
}

impl<'a> ModuleParser<'a> {
    fn run(&mut self) -> Result<()> {
        while self.pos < self.lines.len() {
            let start = self.pos;
            let stripped = lexer::strip_comment(self.lines[start]).trim();
            if stripped.is_empty() {
                self.pos += 1;
                continue;
            }
            if stripped.starts_with("define") && stripped[6..].starts_with(char::is_whitespace) {
                self.parse_define()?;
                continue;
            }
            let first = stripped.chars().next().unwrap();
            // metadata and attribute groups are recorded but never lexed
            if first == '!' || stripped.starts_with("attributes") {
                self.pos += 1;
                let (kind, name) = if first == '!' {
                    (ItemKind::Metadata, metadata_def_name(stripped))
                } else {
                    (ItemKind::AttrGroup, attr_group_name(stripped))
                };
                self.items.push(TopItem {
                    kind,
                    name,
                    first_line: start,
                    last_line: start,
                });
                continue;
            }
            if stripped == "}" {
                return Err(Error::parse(start + 1, "unexpected '}' outside a function body"));
            }
            let text = self.gather_statement();
            let last = self.pos - 1;
            self.top_level_statement(&text, start, last)?;
        }
        Ok(())
    }

    /// Join lines until brackets balance. Advances `pos` past the statement.
    fn gather_statement(&mut self) -> String {
        let mut text = String::new();
        let mut depth = 0i64;
        loop {
            let line = lexer::strip_comment(self.lines[self.pos]);
            depth += lexer::depth_delta(line);
            if !text.is_empty() {
                text.push(' ');
            }
            text.push_str(line.trim());
            self.pos += 1;
            if depth <= 0 || self.pos >= self.lines.len() {
                break;
            }
        }
        text
    }

    fn top_level_statement(&mut self, text: &str, first: usize, last: usize) -> Result<()> {
        let line_no = first + 1;
        let trees = lex_trees(text).map_err(|e| lex_err(line_no, e))?;
        let mut item = TopItem {
            kind: ItemKind::Other,
            name: String::new(),
            first_line: first,
            last_line: last,
        };
        match trees.as_slice() {
            [Tree::Leaf(Token::Word(w)), rest @ ..] if w == "source_filename" => {
                item.kind = ItemKind::Header;
                self.module.source_filename = string_after_equals(rest);
            }
            [Tree::Leaf(Token::Word(w)), Tree::Leaf(Token::Word(which)), rest @ ..] if w == "target" => {
                item.kind = ItemKind::Header;
                match which.as_str() {
                    "triple" => self.module.target_triple = string_after_equals(rest),
                    "datalayout" => self.module.datalayout = string_after_equals(rest),
                    _ => {}
                }
            }
            [Tree::Leaf(Token::Local(name)), Tree::Leaf(Token::Equals), Tree::Leaf(Token::Word(w)), ..]
                if w == "type" =>
            {
                item.kind = ItemKind::TypeDef;
                item.name = name.clone();
            }
            [Tree::Leaf(Token::Comdat(name)), Tree::Leaf(Token::Equals), ..] => {
                item.kind = ItemKind::Comdat;
                item.name = name.clone();
            }
            [Tree::Leaf(Token::Global(name)), Tree::Leaf(Token::Equals), rest @ ..] => {
                let global = self.parse_global(name, rest, line_no)?;
                item.kind = ItemKind::Global;
                item.name = name.clone();
                self.module.globals.push(global);
            }
            [Tree::Leaf(Token::Word(w)), ..] if w == "declare" => {
                let f = self.parse_header(&trees[1..], line_no, false)?;
                if !self.fn_names.insert(f.name.clone()) {
                    return Err(Error::parse(line_no, format!("function @{} declared twice", f.name)));
                }
                item.kind = ItemKind::FunctionDecl;
                item.name = f.name.clone();
                self.module.declarations.push(f.name.clone());
                self.module.functions.push(f);
            }
            // module asm, uselistorder and friends carry no structure we model
            _ => {}
        }
        self.items.push(item);
        Ok(())
    }

    fn parse_global(&self, name: &str, rest: &[Tree], line: usize) -> Result<IrGlobal> {
        let kw_pos = rest
            .iter()
            .position(|t| matches!(t.word(), Some("global" | "constant" | "alias" | "ifunc")))
            .ok_or_else(|| Error::parse(line, format!("cannot find the kind of global @{name}")))?;
        let kw = rest[kw_pos].word().unwrap();
        let linkage_external = rest[..kw_pos]
            .iter()
            .any(|t| matches!(t.word(), Some("external" | "extern_weak")));
        let body = &rest[kw_pos + 1..];
        let (type_token, after_type) = parse_type(body, 0, self.types, true)
            .ok_or_else(|| Error::parse(line, format!("missing type for global @{name}")))?;
        let tail = &body[after_type..];
        let kind = match kw {
            "alias" => GlobalKind::Alias,
            "ifunc" => GlobalKind::IFunc,
            _ => GlobalKind::Variable,
        };
        let init_trees: &[Tree] = match kind {
            GlobalKind::Variable => {
                let chunks = split_commas(tail);
                chunks.first().copied().unwrap_or(&[])
            }
            // `alias <ty>, <aliasee ty> @target`
            _ => {
                let chunks = split_commas(tail);
                chunks.get(1).copied().unwrap_or(&[])
            }
        };
        let initializer_tokens: Vec<String> = init_trees
            .iter()
            .map(|t| render(std::slice::from_ref(t)))
            .collect();
        Ok(IrGlobal {
            name: name.to_string(),
            kind,
            type_token,
            is_declaration: kind == GlobalKind::Variable && linkage_external && initializer_tokens.is_empty(),
            initializer_tokens,
            is_constant: kw == "constant",
        })
    }

    /// Parse `[linkage…] <ret> @name(<params>) [attrs…]` (without the keyword).
    fn parse_header(&self, trees: &[Tree], line: usize, definition: bool) -> Result<IrFunction> {
        let gi = trees
            .iter()
            .position(|t| matches!(t, Tree::Leaf(Token::Global(_))))
            .ok_or_else(|| Error::parse(line, "function header without a name"))?;
        let Tree::Leaf(Token::Global(name)) = &trees[gi] else {
            unreachable!()
        };
        let return_type_token = (0..gi)
            .find_map(|k| match parse_type(trees, k, self.types, true) {
                Some((ty, end)) if end == gi => Some(ty),
                _ => None,
            })
            .ok_or_else(|| Error::parse(line, format!("cannot find return type of @{name}")))?;
        let Some(Tree::Group(Delim::Paren, params_trees)) = trees.get(gi + 1) else {
            return Err(Error::parse(line, format!("missing parameter list for @{name}")));
        };
        let mut params = Vec::new();
        let mut is_vararg = false;
        for chunk in split_commas(params_trees) {
            if matches!(chunk, [Tree::Leaf(Token::Ellipsis)]) {
                is_vararg = true;
                continue;
            }
            let (type_token, end) = parse_type(chunk, 0, self.types, true)
                .ok_or_else(|| Error::parse(line, format!("bad parameter in @{name}")))?;
            let name = chunk[end..].iter().rev().find_map(|t| match t {
                Tree::Leaf(Token::Local(n)) => Some(n.clone()),
                _ => None,
            });
            params.push(IrParam { type_token, name });
        }
        Ok(IrFunction {
            name: name.clone(),
            params,
            is_vararg,
            return_type_token,
            blocks: Vec::new(),
            is_definition: definition,
        })
    }

    fn parse_define(&mut self) -> Result<()> {
        let start = self.pos;
        // header runs up to the opening brace of the body
        let mut header = String::new();
        loop {
            if self.pos >= self.lines.len() {
                return Err(Error::parse(start + 1, "unterminated function header"));
            }
            let line = lexer::strip_comment(self.lines[self.pos]).trim();
            self.pos += 1;
            if let Some(h) = line.strip_suffix('{') {
                header.push(' ');
                header.push_str(h);
                if lexer::depth_delta(&header) == 0 {
                    break;
                }
                header.push('{');
            } else {
                header.push(' ');
                header.push_str(line);
            }
        }
        let header = header.trim();
        let trees = lex_trees(header).map_err(|e| lex_err(start + 1, e))?;
        let mut func = self.parse_header(&trees[1..], start + 1, true)?;
        if !self.fn_names.insert(func.name.clone()) {
            return Err(Error::parse(start + 1, format!("function @{} defined twice", func.name)));
        }
        func.blocks = self.parse_body(&func, start)?;
        self.items.push(TopItem {
            kind: ItemKind::FunctionDef,
            name: func.name.clone(),
            first_line: start,
            last_line: self.pos - 1,
        });
        self.module.functions.push(func);
        Ok(())
    }

    fn parse_body(&mut self, func: &IrFunction, header_line: usize) -> Result<Vec<IrBlock>> {
        let mut blocks: Vec<IrBlock> = Vec::new();
        let mut labels: HashSet<String> = HashSet::new();
        let mut locals: HashSet<String> = HashSet::new();
        let mut implicit = 0usize;
        for p in &func.params {
            match &p.name {
                Some(n) => {
                    if n.chars().all(|c| c.is_ascii_digit()) {
                        implicit += 1;
                    }
                    if !locals.insert(n.clone()) {
                        return Err(Error::parse(header_line + 1, format!("parameter %{n} defined twice")));
                    }
                }
                None => {
                    locals.insert(implicit.to_string());
                    implicit += 1;
                }
            }
        }
        let entry_implicit = implicit.to_string();

        let open_block = |blocks: &mut Vec<IrBlock>, labels: &mut HashSet<String>, label: String, line: usize| -> Result<()> {
            if let Some(prev) = blocks.last() {
                match prev.instructions.last() {
                    None => return Err(Error::parse(line, format!("block %{} is empty", prev.label))),
                    Some(i) if !i.is_terminator() => {
                        return Err(Error::parse(
                            line,
                            format!("block %{} does not end with a terminator", prev.label),
                        ))
                    }
                    _ => {}
                }
            }
            if !labels.insert(label.clone()) {
                return Err(Error::parse(line, format!("duplicate label %{label}")));
            }
            blocks.push(IrBlock {
                label,
                instructions: Vec::new(),
            });
            Ok(())
        };

        loop {
            if self.pos >= self.lines.len() {
                return Err(Error::parse(
                    header_line + 1,
                    format!("unterminated body of function @{}", func.name),
                ));
            }
            let line_idx = self.pos;
            let raw = self.lines[line_idx];
            let trimmed = raw.trim();
            if let Some(label) = legacy_label(trimmed) {
                self.pos += 1;
                open_block(&mut blocks, &mut labels, label, line_idx + 1)?;
                continue;
            }
            let stripped = lexer::strip_comment(raw).trim();
            if stripped.is_empty() || stripped.starts_with("#dbg_") {
                self.pos += 1;
                continue;
            }
            if stripped == "}" {
                self.pos += 1;
                break;
            }
            if let Some(label) = label_definition(stripped) {
                self.pos += 1;
                open_block(&mut blocks, &mut labels, label, line_idx + 1)?;
                continue;
            }
            let mut text = self.gather_statement();
            // landingpad clauses and invoke destinations live on their own lines
            while self.pos < self.lines.len() {
                let next = lexer::strip_comment(self.lines[self.pos]).trim();
                let is_clause = next == "cleanup"
                    || next.starts_with("cleanup,")
                    || next.starts_with("catch ")
                    || next.starts_with("filter ")
                    || next.starts_with("to label ");
                if !is_clause {
                    break;
                }
                text.push(' ');
                text.push_str(&self.gather_statement());
            }
            let trees = lex_trees(&text).map_err(|e| lex_err(line_idx + 1, e))?;
            let inst = parse_instruction(&trees, line_idx + 1, self.types)?;
            if blocks.is_empty() {
                open_block(&mut blocks, &mut labels, entry_implicit.clone(), line_idx + 1)?;
            } else if blocks.last().unwrap().terminator().is_some() {
                return Err(Error::parse(
                    line_idx + 1,
                    "instruction follows a terminator without a block label",
                ));
            }
            if let Some(name) = &inst.result_name {
                if !locals.insert(name.clone()) {
                    return Err(Error::parse(
                        line_idx + 1,
                        format!("local %{name} defined more than once in @{}", func.name),
                    ));
                }
            }
            blocks.last_mut().unwrap().instructions.push(inst);
        }

        match blocks.last() {
            None => {
                return Err(Error::parse(
                    header_line + 1,
                    format!("function @{} has no basic blocks", func.name),
                ))
            }
            Some(b) if b.terminator().is_none() => {
                return Err(Error::parse(
                    self.pos,
                    format!("block %{} does not end with a terminator", b.label),
                ))
            }
            _ => {}
        }
        Ok(blocks)
    }
}

fn string_after_equals(rest: &[Tree]) -> Option<String> {
    match rest {
        [Tree::Leaf(Token::Equals), Tree::Leaf(Token::Str(s)), ..] => Some(s.clone()),
        _ => None,
    }
}

fn metadata_def_name(stripped: &str) -> String {
    stripped[1..]
        .split(|c: char| c.is_whitespace() || c == '=')
        .next()
        .unwrap_or("")
        .to_string()
}

fn attr_group_name(stripped: &str) -> String {
    stripped
        .split_whitespace()
        .nth(1)
        .and_then(|s| s.strip_prefix('#'))
        .unwrap_or("")
        .to_string()
}

/// `; <label>:12:` comments emitted by older producers for unnamed blocks.
fn legacy_label(trimmed: &str) -> Option<String> {
    let rest = trimmed.strip_prefix("; <label>:")?;
    let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
    (!digits.is_empty()).then_some(digits)
}

fn label_definition(stripped: &str) -> Option<String> {
    let body = stripped.strip_suffix(':')?;
    if let Some(q) = body.strip_prefix('"') {
        return q.strip_suffix('"').map(str::to_string);
    }
    (!body.is_empty() && body.chars().all(lexer::is_ident_char)).then(|| body.to_string())
}

const PRIMITIVE_TYPES: &[&str] = &[
    "void", "half", "bfloat", "float", "double", "x86_fp80", "fp128", "ppc_fp128", "label",
    "metadata", "x86_mmx", "x86_amx", "token", "ptr", "opaque",
];

fn is_int_type(w: &str) -> bool {
    w.len() > 1 && w.starts_with('i') && w[1..].chars().all(|c| c.is_ascii_digit())
}

fn is_sized_group(children: &[Tree]) -> bool {
    matches!(children, [Tree::Leaf(Token::Int(_)), Tree::Leaf(Token::Word(x)), ..] if x == "x")
        || matches!(children, [Tree::Leaf(Token::Word(v)), Tree::Leaf(Token::Int(_)), Tree::Leaf(Token::Word(x)), ..] if v == "vscale" && x == "x")
}

fn looks_like_param_types(children: &[Tree], types: &HashSet<String>) -> bool {
    match children.first() {
        None => true,
        Some(Tree::Leaf(Token::Ellipsis)) => true,
        Some(_) => parse_type(children, 0, types, true).is_some(),
    }
}

/// Parse a type starting at `trees[i]`. Returns the canonical rendering and
/// the index just past it. `brace_is_type` resolves the `{ … }` ambiguity
/// between struct types and aggregate constants.
pub(crate) fn parse_type(
    trees: &[Tree],
    i: usize,
    types: &HashSet<String>,
    brace_is_type: bool,
) -> Option<(String, usize)> {
    let mut j = match trees.get(i)? {
        Tree::Leaf(Token::Word(w)) if PRIMITIVE_TYPES.contains(&w.as_str()) || is_int_type(w) => i + 1,
        Tree::Leaf(Token::Word(w)) if w == "target" && trees.get(i + 1).is_some_and(|t| t.is_group(Delim::Paren)) => {
            i + 2
        }
        Tree::Leaf(Token::Local(n)) if types.contains(n) => i + 1,
        Tree::Group(Delim::Brace, _) if brace_is_type => i + 1,
        Tree::Group(Delim::Angle, children)
            if is_sized_group(children) || matches!(children.as_slice(), [Tree::Group(Delim::Brace, _)]) =>
        {
            i + 1
        }
        Tree::Group(Delim::Bracket, children) if is_sized_group(children) => i + 1,
        _ => return None,
    };
    loop {
        match trees.get(j) {
            Some(Tree::Leaf(Token::Star)) => j += 1,
            Some(Tree::Leaf(Token::Word(w)))
                if w == "addrspace" && trees.get(j + 1).is_some_and(|t| t.is_group(Delim::Paren)) =>
            {
                j += 2
            }
            Some(Tree::Group(Delim::Paren, children)) if looks_like_param_types(children, types) => j += 1,
            _ => break,
        }
    }
    Some((render(&trees[i..j]), j))
}

const CONSTANT_WORDS: &[&str] = &["null", "undef", "poison", "zeroinitializer", "none"];

const CONSTEXPR_WORDS: &[&str] = &[
    "getelementptr", "bitcast", "ptrtoint", "inttoptr", "addrspacecast", "trunc", "zext", "sext",
    "fptrunc", "fpext", "fptoui", "fptosi", "uitofp", "sitofp", "add", "sub", "mul", "shl", "lshr",
    "ashr", "and", "or", "xor", "udiv", "sdiv", "urem", "srem", "icmp", "fcmp", "select",
    "extractelement", "insertelement", "shufflevector", "extractvalue", "insertvalue", "fneg",
    "blockaddress", "splat",
];

fn int_operand(text: &str) -> OperandRef {
    let mut op = OperandRef::new(OperandKind::ConstantInt, text);
    op.int_value = text.parse::<i128>().ok();
    op
}

/// Parse a value at `trees[i]` assuming its type has already been consumed.
/// Returns `None` if `trees[i]` cannot start a value.
fn parse_value(trees: &[Tree], i: usize) -> Option<(OperandRef, usize)> {
    let t = trees.get(i)?;
    let simple = |op: OperandRef| Some((op, i + 1));
    match t {
        Tree::Leaf(Token::Local(n)) => simple(OperandRef::new(OperandKind::Local, n.clone())),
        Tree::Leaf(Token::Global(n)) => simple(OperandRef::new(OperandKind::Global, n.clone())),
        Tree::Leaf(Token::Int(s)) => simple(int_operand(s)),
        Tree::Leaf(Token::Float(s)) => simple(OperandRef::new(OperandKind::ConstantFp, s.clone())),
        Tree::Leaf(Token::CStr(_)) | Tree::Leaf(Token::Str(_)) => {
            simple(OperandRef::new(OperandKind::OtherConstant, render(&trees[i..=i])))
        }
        Tree::Leaf(Token::Metadata(_)) => {
            let end = if trees.get(i + 1).is_some_and(|t| t.is_group(Delim::Paren) || t.is_group(Delim::Brace)) {
                i + 2
            } else {
                i + 1
            };
            Some((OperandRef::new(OperandKind::Metadata, render(&trees[i..end])), end))
        }
        Tree::Group(_, _) => simple(OperandRef::new(OperandKind::OtherConstant, render(&trees[i..=i]))),
        Tree::Leaf(Token::Word(w)) => match w.as_str() {
            "true" => {
                let mut op = OperandRef::new(OperandKind::ConstantInt, "true");
                op.int_value = Some(1);
                simple(op)
            }
            "false" => {
                let mut op = OperandRef::new(OperandKind::ConstantInt, "false");
                op.int_value = Some(0);
                simple(op)
            }
            w if CONSTANT_WORDS.contains(&w) => simple(OperandRef::new(OperandKind::OtherConstant, w)),
            "dso_local_equivalent" | "no_cfi" => {
                let end = (i + 2).min(trees.len());
                Some((OperandRef::new(OperandKind::OtherConstant, render(&trees[i..end])), end))
            }
            "asm" => {
                let mut j = i + 1;
                while j < trees.len() && !trees[j].is_group(Delim::Paren) {
                    j += 1;
                }
                Some((OperandRef::new(OperandKind::OtherConstant, "asm"), j))
            }
            w if CONSTEXPR_WORDS.contains(&w) => {
                let mut j = i + 1;
                while j < trees.len() && matches!(trees[j], Tree::Leaf(Token::Word(_))) {
                    j += 1;
                }
                if trees.get(j).is_some_and(|t| t.is_group(Delim::Paren)) {
                    Some((OperandRef::new(OperandKind::OtherConstant, render(&trees[i..=j])), j + 1))
                } else {
                    None
                }
            }
            _ => None,
        },
        _ => None,
    }
}

struct OperandScanner<'a> {
    types: &'a HashSet<String>,
    first_type: Option<String>,
    operands: Vec<OperandRef>,
    is_call: bool,
    callee_seen: bool,
    callee: Option<String>,
}

#[derive(Clone, PartialEq)]
enum Pending {
    None,
    Value,
    Label,
    Metadata,
}

impl<'a> OperandScanner<'a> {
    fn note_type(&mut self, ty: &str) {
        if self.first_type.is_none() {
            self.first_type = Some(ty.to_string());
        }
    }

    fn push_value(&mut self, mut op: OperandRef, pending: &Pending) {
        if *pending == Pending::Label {
            op.kind = OperandKind::BlockLabel;
        }
        if self.is_call && !self.callee_seen && op.kind != OperandKind::BlockLabel {
            self.callee_seen = true;
            if op.kind == OperandKind::Global {
                self.callee = Some(op.text.clone());
            }
        }
        self.operands.push(op);
    }

    fn scan(&mut self, trees: &[Tree]) {
        let mut pending = Pending::None;
        let mut i = 0;
        while i < trees.len() {
            let t = &trees[i];
            if t.is_comma() {
                pending = Pending::None;
                i += 1;
                continue;
            }
            if t.is_word("align") && matches!(trees.get(i + 1), Some(Tree::Leaf(Token::Int(_)))) {
                i += 2;
                continue;
            }
            match t {
                Tree::Leaf(Token::AttrGroup(_)) => {
                    i += 1;
                    continue;
                }
                // `!name !N` attachment (never an operand)
                Tree::Leaf(Token::Metadata(_)) if pending != Pending::Metadata => {
                    i += 1;
                    if matches!(trees.get(i), Some(Tree::Leaf(Token::Metadata(_)))) {
                        i += 1;
                    }
                    if trees.get(i).is_some_and(|t| t.is_group(Delim::Brace) || t.is_group(Delim::Paren)) {
                        i += 1;
                    }
                    continue;
                }
                _ => {}
            }
            if pending == Pending::Metadata {
                // `metadata <ty> <val>` or `metadata !node`
                if let Some((_, end)) = parse_type(trees, i, self.types, true) {
                    let vend = parse_value(trees, end).map(|(_, e)| e).unwrap_or(end);
                    let text = render(&trees[i..vend]);
                    self.operands.push(OperandRef::new(OperandKind::Metadata, text));
                    i = vend;
                } else if let Some((mut op, end)) = parse_value(trees, i) {
                    op.kind = OperandKind::Metadata;
                    op.int_value = None;
                    self.operands.push(op);
                    i = end;
                } else {
                    i += 1;
                }
                pending = Pending::None;
                continue;
            }
            if pending == Pending::None {
                if let Some((ty, end)) = parse_type(trees, i, self.types, true) {
                    self.note_type(&ty);
                    pending = match ty.as_str() {
                        "label" => Pending::Label,
                        "metadata" => Pending::Metadata,
                        _ => Pending::Value,
                    };
                    i = end;
                    continue;
                }
                match t {
                    Tree::Leaf(Token::Int(s)) => {
                        self.operands.push(int_operand(s));
                        i += 1;
                    }
                    Tree::Leaf(Token::Local(_)) | Tree::Leaf(Token::Global(_)) => {
                        let (op, end) = parse_value(trees, i).unwrap();
                        self.push_value(op, &pending);
                        i = end;
                    }
                    Tree::Group(Delim::Paren, children) | Tree::Group(Delim::Bracket, children) => {
                        self.scan(children);
                        i += 1;
                    }
                    Tree::Leaf(Token::Word(_)) => {
                        // flag, predicate, ordering or attribute (possibly with arguments)
                        i += 1;
                        if trees.get(i).is_some_and(|t| t.is_group(Delim::Paren)) {
                            i += 1;
                        }
                    }
                    _ => i += 1,
                }
                continue;
            }
            // a type is pending: parameter attributes may precede the value
            if let Some((op, end)) = parse_value(trees, i) {
                self.push_value(op, &pending);
                pending = Pending::None;
                i = end;
                continue;
            }
            match t {
                Tree::Leaf(Token::Word(_)) => {
                    i += 1;
                    if trees.get(i).is_some_and(|t| t.is_group(Delim::Paren)) {
                        i += 1;
                    }
                }
                _ => i += 1,
            }
        }
    }
}

pub(crate) fn parse_instruction(trees: &[Tree], line: usize, types: &HashSet<String>) -> Result<IrInstruction> {
    let mut idx = 0;
    let result_name = match trees {
        [Tree::Leaf(Token::Local(n)), Tree::Leaf(Token::Equals), ..] => {
            idx = 2;
            Some(n.clone())
        }
        _ => None,
    };
    while trees
        .get(idx)
        .is_some_and(|t| matches!(t.word(), Some("tail" | "musttail" | "notail")))
    {
        idx += 1;
    }
    let opcode = match trees.get(idx) {
        Some(Tree::Leaf(Token::Word(w))) => Opcode::from_mnemonic(w),
        _ => {
            return Err(Error::parse(
                line,
                format!("expected an opcode, found {}", lexer::debug_trees(&trees[idx.min(trees.len())..])),
            ))
        }
    };
    let rest = &trees[idx + 1..];
    let mut scanner = OperandScanner {
        types,
        first_type: None,
        operands: Vec::new(),
        is_call: matches!(opcode, Opcode::Call | Opcode::Invoke) || opcode == Opcode::Other("callbr".into()),
        callee_seen: false,
        callee: None,
    };
    if opcode == Opcode::Phi {
        scan_phi(&mut scanner, rest, line)?;
    } else {
        scanner.scan(rest);
    }
    let callee = if opcode == Opcode::Call { scanner.callee } else { None };
    let is_intrinsic_call = callee.as_deref().is_some_and(|c| c.starts_with("llvm."));
    let is_debug_intrinsic = callee.as_deref().is_some_and(|c| c.starts_with("llvm.dbg."));
    Ok(IrInstruction {
        opcode,
        result_name,
        type_token: scanner.first_type.unwrap_or_default(),
        operands: scanner.operands,
        callee,
        is_intrinsic_call,
        is_debug_intrinsic,
        line,
    })
}

fn scan_phi(scanner: &mut OperandScanner<'_>, rest: &[Tree], line: usize) -> Result<()> {
    let mut i = 0;
    let ty_start = loop {
        match rest.get(i) {
            Some(_) if parse_type(rest, i, scanner.types, true).is_some() => break i,
            Some(Tree::Leaf(Token::Word(_))) => i += 1,
            _ => return Err(Error::parse(line, "phi without a type")),
        }
    };
    let (ty, mut i) = parse_type(rest, ty_start, scanner.types, true).unwrap();
    scanner.note_type(&ty);
    while i < rest.len() {
        match &rest[i] {
            Tree::Group(Delim::Bracket, children) => {
                let parts = split_commas(children);
                let [value, label] = parts.as_slice() else {
                    return Err(Error::parse(line, "malformed phi incoming pair"));
                };
                let (op, _) = parse_value(value, 0)
                    .ok_or_else(|| Error::parse(line, "malformed phi incoming value"))?;
                scanner.operands.push(op);
                match label {
                    [Tree::Leaf(Token::Local(l))] => {
                        scanner.operands.push(OperandRef::new(OperandKind::BlockLabel, l.clone()))
                    }
                    _ => return Err(Error::parse(line, "malformed phi incoming block")),
                }
                i += 1;
            }
            Tree::Leaf(Token::Comma) => i += 1,
            // trailing metadata attachments
            _ => break,
        }
    }
    Ok(())
}
