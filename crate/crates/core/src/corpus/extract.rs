// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::irparse::lexer::{self, Token};
use crate::irparse::parser::{parse_with_items, ItemKind, TopItem};
use crate::irparse::{GlobalKind, IrFunction, IrGlobal, IrModule};

/// Named metadata kept in every extracted module so debug info stays valid.
const KEPT_NAMED_METADATA: [&str; 2] = ["llvm.module.flags", "llvm.dbg.cu"];

#[derive(Default)]
struct Refs {
    globals: BTreeSet<String>,
    locals: BTreeSet<String>,
    attrs: BTreeSet<String>,
    metadata: BTreeSet<String>,
    comdats: BTreeSet<String>,
}

impl Refs {
    fn scan(&mut self, line: &str) {
        // unlexable lines (exotic metadata) contribute no references
        let Ok(tokens) = lexer::lex(lexer::strip_comment(line)) else {
            return;
        };
        for t in tokens {
            match t {
                Token::Global(n) => self.globals.insert(n),
                Token::Local(n) => self.locals.insert(n),
                Token::AttrGroup(n) => self.attrs.insert(n),
                Token::Metadata(n) if !n.is_empty() => self.metadata.insert(n),
                Token::Comdat(n) => self.comdats.insert(n),
                _ => false,
            };
        }
    }
}

/// Slice one function out of a module into a standalone module: the
/// definition verbatim, `declare`s for referenced functions, `external`
/// declarations for referenced globals, and the named types, attribute
/// groups, comdats and metadata they need. Debug metadata is kept.
pub fn extract_function(module_text: &str, function_name: &str) -> Result<String> {
    let (module, items) = parse_with_items(module_text)?;
    let lines: Vec<&str> = module_text.lines().collect();
    let target = items
        .iter()
        .position(|it| it.kind == ItemKind::FunctionDef && it.name == function_name)
        .ok_or_else(|| Error::NotFound(format!("function @{function_name}")))?;

    let span = |it: &TopItem| &lines[it.first_line..=it.last_line];
    let mut refs = Refs::default();
    for l in span(&items[target]) {
        refs.scan(l);
    }
    if header_has_bare_comdat(&lines[items[target].first_line]) {
        refs.comdats.insert(function_name.to_string());
    }
    for n in KEPT_NAMED_METADATA {
        refs.metadata.insert(n.to_string());
    }

    let index: HashMap<(ItemKind, &str), usize> =
        items.iter().enumerate().map(|(i, it)| ((kind_class(it.kind), it.name.as_str()), i)).collect();
    let functions: HashMap<&str, &IrFunction> = module.functions.iter().map(|f| (f.name.as_str(), f)).collect();
    let globals: HashMap<&str, &IrGlobal> = module.globals.iter().map(|g| (g.name.as_str(), g)).collect();

    // metadata closure; metadata may mention globals, which feed the symbol pass
    let mut selected: BTreeSet<usize> = BTreeSet::from([target]);
    let mut pending: Vec<String> = refs.metadata.iter().cloned().collect();
    let mut seen_md: BTreeSet<String> = BTreeSet::new();
    while let Some(name) = pending.pop() {
        if !seen_md.insert(name.clone()) {
            continue;
        }
        if let Some(&i) = index.get(&(ItemKind::Metadata, name.as_str())) {
            selected.insert(i);
            let mut inner = Refs::default();
            for l in span(&items[i]) {
                inner.scan(l);
            }
            pending.extend(inner.metadata.iter().cloned());
            refs.globals.extend(inner.globals);
        }
    }

    // referenced symbols become declarations
    let mut replacement: HashMap<usize, String> = HashMap::new();
    for name in refs.globals.clone() {
        if name == function_name {
            continue;
        }
        if let Some(&i) = index.get(&(ItemKind::FunctionDecl, name.as_str())) {
            match items[i].kind {
                ItemKind::FunctionDecl => {
                    selected.insert(i);
                    for l in span(&items[i]) {
                        refs.scan(l);
                    }
                }
                _ => {
                    let f = functions[name.as_str()];
                    let decl = synthesize_declare(f);
                    refs.scan(&decl);
                    replacement.insert(i, decl);
                    selected.insert(i);
                }
            }
        } else if let Some(&i) = index.get(&(ItemKind::Global, name.as_str())) {
            if let Some(g) = globals.get(name.as_str()) {
                let decl = synthesize_external(g);
                refs.scan(&decl);
                replacement.insert(i, decl);
                selected.insert(i);
            }
        }
    }

    // named types, transitively
    let mut pending: Vec<String> = refs.locals.iter().cloned().collect();
    let mut seen_ty: BTreeSet<String> = BTreeSet::new();
    while let Some(name) = pending.pop() {
        if !seen_ty.insert(name.clone()) {
            continue;
        }
        if let Some(&i) = index.get(&(ItemKind::TypeDef, name.as_str())) {
            selected.insert(i);
            let mut inner = Refs::default();
            for l in span(&items[i]) {
                inner.scan(l);
            }
            pending.extend(inner.locals);
        }
    }
    for a in &refs.attrs {
        if let Some(&i) = index.get(&(ItemKind::AttrGroup, a.as_str())) {
            selected.insert(i);
        }
    }
    for c in &refs.comdats {
        if let Some(&i) = index.get(&(ItemKind::Comdat, c.as_str())) {
            selected.insert(i);
        }
    }
    for (i, it) in items.iter().enumerate() {
        if it.kind == ItemKind::Header {
            selected.insert(i);
        }
    }

    let mut out = String::new();
    for i in selected {
        match replacement.get(&i) {
            Some(text) => out.push_str(text),
            None => {
                for l in span(&items[i]) {
                    out.push_str(l);
                    out.push('\n');
                }
            }
        }
        out.push('\n');
    }
    Ok(out)
}

/// Functions defined and declared share the symbol namespace; so do globals
/// of every kind.
fn kind_class(kind: ItemKind) -> ItemKind {
    match kind {
        ItemKind::FunctionDef => ItemKind::FunctionDecl,
        k => k,
    }
}

fn header_has_bare_comdat(line: &str) -> bool {
    let Ok(tokens) = lexer::lex(lexer::strip_comment(line)) else {
        return false;
    };
    tokens.iter().enumerate().any(|(i, t)| {
        matches!(t, Token::Word(w) if w == "comdat") && !matches!(tokens.get(i + 1), Some(Token::Open(_)))
    })
}

fn global_ref(name: &str) -> String {
    lexer::render_token(&Token::Global(name.to_string()))
}

fn synthesize_declare(f: &IrFunction) -> String {
    let mut params: Vec<&str> = f.params.iter().map(|p| p.type_token.as_str()).collect();
    if f.is_vararg {
        params.push("...");
    }
    format!("declare {} {}({})\n", f.return_type_token, global_ref(&f.name), params.join(", "))
}

fn synthesize_external(g: &IrGlobal) -> String {
    let name = global_ref(&g.name);
    if g.kind != GlobalKind::Variable {
        if let Some((ret, params)) = split_function_type(&g.type_token) {
            return format!("declare {ret} {name}{params}\n");
        }
    }
    let class = if g.is_constant { "constant" } else { "global" };
    format!("{name} = external {class} {}\n", g.type_token)
}

/// `i32 (i8*, ...)` into `("i32", "(i8*, ...)")`.
fn split_function_type(ty: &str) -> Option<(&str, &str)> {
    if !ty.ends_with(')') {
        return None;
    }
    let mut depth = 0;
    for (i, c) in ty.char_indices().rev() {
        match c {
            ')' => depth += 1,
            '(' => {
                depth -= 1;
                if depth == 0 {
                    let ret = ty[..i].trim_end();
                    return (!ret.is_empty()).then_some((ret, &ty[i..]));
                }
            }
            _ => {}
        }
    }
    None
}

/// Names of all function definitions, in source order.
pub fn defined_function_names(module: &IrModule) -> Vec<String> {
    module.definitions().map(|f| f.name.clone()).collect()
}
