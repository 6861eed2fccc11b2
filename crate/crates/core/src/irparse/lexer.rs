// SPDX-License-Identifier: Apache-2.0

//! Tokenizer for textual IR statements.
//!
//! Statements are lexed into a flat token list and then folded into bracket
//! trees, so that later stages can skip whole type or constant groups without
//! tracking nesting themselves. Types and values are never interpreted here.

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    /// `%name`, `%"quoted"`, `%7`. Text excludes the sigil and quotes.
    Local(String),
    /// `@name`, `@"quoted"`, `@7`.
    Global(String),
    /// `!name`, `!7`, `!"str"`. A bare `!` (before `{`) has empty text.
    Metadata(String),
    /// `#7`
    AttrGroup(String),
    /// `$name`
    Comdat(String),
    Int(String),
    Float(String),
    /// Quoted string, with its raw (still escaped) contents.
    Str(String),
    /// `c"..."`
    CStr(String),
    Word(String),
    Comma,
    Equals,
    Star,
    Colon,
    Ellipsis,
    Open(Delim),
    Close(Delim),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Delim {
    Paren,
    Bracket,
    Brace,
    Angle,
}

impl Delim {
    fn open(self) -> char {
        match self {
            Delim::Paren => '(',
            Delim::Bracket => '[',
            Delim::Brace => '{',
            Delim::Angle => '<',
        }
    }

    fn close(self) -> char {
        match self {
            Delim::Paren => ')',
            Delim::Bracket => ']',
            Delim::Brace => '}',
            Delim::Angle => '>',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tree {
    Leaf(Token),
    Group(Delim, Vec<Tree>),
}

impl Tree {
    pub fn word(&self) -> Option<&str> {
        match self {
            Tree::Leaf(Token::Word(w)) => Some(w),
            _ => None,
        }
    }

    pub fn is_word(&self, w: &str) -> bool {
        self.word() == Some(w)
    }

    pub fn is_group(&self, d: Delim) -> bool {
        matches!(self, Tree::Group(got, _) if *got == d)
    }

    pub fn is_comma(&self) -> bool {
        matches!(self, Tree::Leaf(Token::Comma))
    }
}

pub fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '$' | '-')
}

/// Strip a `;` comment, respecting string literals.
pub fn strip_comment(line: &str) -> &str {
    let mut in_str = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_str = !in_str,
            ';' if !in_str => return &line[..i],
            _ => {}
        }
    }
    line
}

/// Net bracket depth change of a comment-free line.
pub fn depth_delta(line: &str) -> i64 {
    let mut in_str = false;
    let mut depth = 0;
    for c in line.chars() {
        match c {
            '"' => in_str = !in_str,
            '(' | '[' | '{' | '<' if !in_str => depth += 1,
            ')' | ']' | '}' | '>' if !in_str => depth -= 1,
            _ => {}
        }
    }
    depth
}

#[derive(Debug)]
pub struct LexError(pub String);

pub fn lex(src: &str) -> Result<Vec<Token>, LexError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            ';' => break,
            ',' => {
                out.push(Token::Comma);
                i += 1;
            }
            '=' => {
                out.push(Token::Equals);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            ':' => {
                out.push(Token::Colon);
                i += 1;
            }
            '(' | '[' | '{' | '<' => {
                out.push(Token::Open(match c {
                    '(' => Delim::Paren,
                    '[' => Delim::Bracket,
                    '{' => Delim::Brace,
                    _ => Delim::Angle,
                }));
                i += 1;
            }
            ')' | ']' | '}' | '>' => {
                out.push(Token::Close(match c {
                    ')' => Delim::Paren,
                    ']' => Delim::Bracket,
                    '}' => Delim::Brace,
                    _ => Delim::Angle,
                }));
                i += 1;
            }
            '"' => {
                let (s, next) = read_string(&chars, i)?;
                out.push(Token::Str(s));
                i = next;
            }
            '%' | '@' | '!' | '#' | '$' => {
                let (name, next) = read_name(&chars, i + 1)?;
                i = next;
                out.push(match c {
                    '%' => Token::Local(name),
                    '@' => Token::Global(name),
                    '!' => Token::Metadata(name),
                    '#' => Token::AttrGroup(name),
                    _ => Token::Comdat(name),
                });
            }
            '.' if chars.get(i + 1) == Some(&'.') && chars.get(i + 2) == Some(&'.') => {
                out.push(Token::Ellipsis);
                i += 3;
            }
            'c' if chars.get(i + 1) == Some(&'"') => {
                let (s, next) = read_string(&chars, i + 1)?;
                out.push(Token::CStr(s));
                i = next;
            }
            c if c.is_ascii_digit() || c == '-' || c == '+' => {
                let start = i;
                i += 1;
                while i < chars.len() && (is_ident_char(chars[i]) || chars[i] == '+') {
                    // exponent sign in 1.0e+00
                    if chars[i] == '+' && !matches!(chars[i - 1], 'e' | 'E') {
                        break;
                    }
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(classify_number(text));
            }
            c if is_ident_char(c) => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                out.push(Token::Word(chars[start..i].iter().collect()));
            }
            other => return Err(LexError(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

fn classify_number(text: String) -> Token {
    let body = text.trim_start_matches(['-', '+']);
    let is_int = !body.is_empty() && body.chars().all(|c| c.is_ascii_digit());
    let is_float = body.starts_with("0x")
        || (body.chars().next().is_some_and(|c| c.is_ascii_digit())
            && body
                .chars()
                .all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'))
            && body.contains(['.', 'e', 'E']));
    if is_int {
        Token::Int(text)
    } else if is_float {
        Token::Float(text)
    } else {
        // labels such as `4:` are ints; anything else numeric-ish (`-foo`) is a word
        Token::Word(text)
    }
}

fn read_string(chars: &[char], quote: usize) -> Result<(String, usize), LexError> {
    let mut i = quote + 1;
    let start = i;
    while i < chars.len() && chars[i] != '"' {
        i += 1;
    }
    if i >= chars.len() {
        return Err(LexError("unterminated string literal".into()));
    }
    Ok((chars[start..i].iter().collect(), i + 1))
}

fn read_name(chars: &[char], start: usize) -> Result<(String, usize), LexError> {
    if chars.get(start) == Some(&'"') {
        return read_string(chars, start);
    }
    let mut i = start;
    while i < chars.len() && is_ident_char(chars[i]) {
        i += 1;
    }
    Ok((chars[start..i].iter().collect(), i))
}

/// Fold a flat token list into bracket trees.
pub fn build_trees(tokens: Vec<Token>) -> Result<Vec<Tree>, LexError> {
    let mut stack: Vec<(Delim, Vec<Tree>)> = vec![];
    let mut top: Vec<Tree> = vec![];
    for tok in tokens {
        match tok {
            Token::Open(d) => stack.push((d, std::mem::take(&mut top))),
            Token::Close(d) => {
                let (open, parent) = stack
                    .pop()
                    .ok_or_else(|| LexError(format!("unbalanced {:?}", d.close())))?;
                if open != d {
                    return Err(LexError(format!(
                        "mismatched {:?} closed by {:?}",
                        open.open(),
                        d.close()
                    )));
                }
                let children = std::mem::replace(&mut top, parent);
                top.push(Tree::Group(d, children));
            }
            tok => top.push(Tree::Leaf(tok)),
        }
    }
    if let Some((d, _)) = stack.last() {
        return Err(LexError(format!("unclosed {:?}", d.open())));
    }
    Ok(top)
}

pub fn lex_trees(src: &str) -> Result<Vec<Tree>, LexError> {
    build_trees(lex(src)?)
}

fn quote_if_needed(name: &str) -> String {
    if !name.is_empty() && name.chars().all(is_ident_char) {
        name.to_string()
    } else {
        format!("\"{name}\"")
    }
}

pub fn render_token(tok: &Token) -> String {
    match tok {
        Token::Local(n) => format!("%{}", quote_if_needed(n)),
        Token::Global(n) => format!("@{}", quote_if_needed(n)),
        Token::Metadata(n) if n.is_empty() => "!".into(),
        Token::Metadata(n) => format!("!{}", quote_if_needed(n)),
        Token::AttrGroup(n) => format!("#{n}"),
        Token::Comdat(n) => format!("${}", quote_if_needed(n)),
        Token::Int(s) | Token::Float(s) | Token::Word(s) => s.clone(),
        Token::Str(s) => format!("\"{s}\""),
        Token::CStr(s) => format!("c\"{s}\""),
        Token::Comma => ",".into(),
        Token::Equals => "=".into(),
        Token::Star => "*".into(),
        Token::Colon => ":".into(),
        Token::Ellipsis => "...".into(),
        Token::Open(d) => d.open().to_string(),
        Token::Close(d) => d.close().to_string(),
    }
}

/// Canonical rendering of a tree sequence. Spacing is normalized so the
/// same construct prints identically regardless of the producer's layout.
pub fn render(trees: &[Tree]) -> String {
    let mut out = String::new();
    render_into(trees, &mut out);
    out
}

/// Keywords whose parenthesized argument LLVM prints without a space.
const GLUED_KEYWORDS: &[&str] = &[
    "addrspace", "align", "alignstack", "allockind", "allocsize", "blockaddress", "byref", "byval",
    "captures", "dereferenceable", "dereferenceable_or_null", "elementtype", "inalloca",
    "initializes", "memory", "nofpclass", "preallocated", "range", "sret", "target", "uwtable",
    "vscale_range",
];

fn render_into(trees: &[Tree], out: &mut String) {
    for (i, t) in trees.iter().enumerate() {
        let glue = matches!(t, Tree::Leaf(Token::Star) | Tree::Leaf(Token::Comma))
            || (t.is_group(Delim::Paren)
                && i > 0
                && match &trees[i - 1] {
                    Tree::Leaf(Token::Word(w)) => GLUED_KEYWORDS.contains(&w.as_str()),
                    Tree::Leaf(Token::Metadata(_)) => true,
                    _ => false,
                });
        if i > 0 && !glue {
            out.push(' ');
        }
        match t {
            Tree::Leaf(tok) => out.push_str(&render_token(tok)),
            Tree::Group(d, children) => {
                let pad = *d == Delim::Brace && !children.is_empty();
                out.push(d.open());
                if pad {
                    out.push(' ');
                }
                render_into(children, out);
                if pad {
                    out.push(' ');
                }
                out.push(d.close());
            }
        }
    }
}

/// Split a tree sequence at top-level commas.
pub fn split_commas(trees: &[Tree]) -> Vec<&[Tree]> {
    if trees.is_empty() {
        return vec![];
    }
    trees.split(|t| t.is_comma()).collect()
}

pub fn debug_trees(trees: &[Tree]) -> String {
    let mut s = String::new();
    for t in trees {
        let _ = write!(s, "{t:?} ");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_instruction_line() {
        let toks = lex("%3 = add nsw i32 %1, %0 ; trailing").unwrap();
        assert_eq!(
            toks,
            vec![
                Token::Local("3".into()),
                Token::Equals,
                Token::Word("add".into()),
                Token::Word("nsw".into()),
                Token::Word("i32".into()),
                Token::Local("1".into()),
                Token::Comma,
                Token::Local("0".into()),
            ]
        );
    }

    #[test]
    fn numbers_and_strings() {
        let toks = lex(r#"-12 1.5e+00 0x3FF0000000000000 c"hi\00" @"a b" !dbg !12"#).unwrap();
        assert_eq!(toks[0], Token::Int("-12".into()));
        assert_eq!(toks[1], Token::Float("1.5e+00".into()));
        assert_eq!(toks[2], Token::Float("0x3FF0000000000000".into()));
        assert_eq!(toks[3], Token::CStr("hi\\00".into()));
        assert_eq!(toks[4], Token::Global("a b".into()));
        assert_eq!(toks[5], Token::Metadata("dbg".into()));
        assert_eq!(toks[6], Token::Metadata("12".into()));
    }

    #[test]
    fn trees_nest_and_render() {
        let trees = lex_trees("getelementptr inbounds ([4 x i8], [4 x i8]* @.str, i64 0, i64 0)").unwrap();
        assert_eq!(trees.len(), 3);
        assert!(trees[2].is_group(Delim::Paren));
        assert_eq!(
            render(&trees),
            "getelementptr inbounds ([4 x i8], [4 x i8]* @.str, i64 0, i64 0)"
        );
        assert_eq!(render(&lex_trees("{i32,i64}").unwrap()), "{ i32, i64 }");
    }

    #[test]
    fn unbalanced_is_an_error() {
        assert!(lex_trees("(i32").is_err());
        assert!(lex_trees("[i32)").is_err());
        assert!(lex("\"open").is_err());
    }

    #[test]
    fn comments_respect_strings() {
        assert_eq!(strip_comment(r#"@s = constant [2 x i8] c";\00" ; x"#), r#"@s = constant [2 x i8] c";\00" "#);
        assert_eq!(depth_delta("switch i32 %x, label %d ["), 1);
    }
}
