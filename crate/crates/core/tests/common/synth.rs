// SPDX-License-Identifier: Apache-2.0

//! Synthetic modules with controllable names, for dedup tests.

use rand::seq::SliceRandom;
use rand::Rng;

const BINOPS: [&str; 6] = ["add", "sub", "mul", "and", "or", "xor"];

/// A straight-line program: `len` binary operations over the arguments and
/// earlier results, plus a global that the function reads.
#[derive(Debug, Clone)]
pub struct Program {
    pub ops: Vec<(usize, usize, usize)>,
    pub global_init: i64,
    pub branchy: bool,
}

impl Program {
    /// Distinct `len`s give distinct instruction streams.
    pub fn random<R: Rng>(rng: &mut R, len: usize) -> Program {
        let ops = (0..len)
            .map(|i| (rng.gen_range(0..BINOPS.len()), rng.gen_range(0..i + 2), rng.gen_range(0..i + 2)))
            .collect();
        Program { ops, global_init: rng.gen_range(-1000..1000), branchy: rng.gen_bool(0.5) }
    }
}

#[derive(Debug, Clone)]
pub struct Names {
    pub function: String,
    pub global: String,
    pub prefix: String,
}

impl Names {
    pub fn plain(i: usize) -> Names {
        Names { function: format!("f{i}"), global: format!("g{i}"), prefix: "v".into() }
    }

    pub fn random<R: Rng>(rng: &mut R) -> Names {
        let mut alpha: Vec<char> = ('a'..='z').collect();
        alpha.shuffle(rng);
        let word: String = alpha[..8].iter().collect();
        Names {
            function: format!("fn_{word}"),
            global: format!("gl_{word}"),
            prefix: format!("t{}_", rng.gen_range(0..100_000)),
        }
    }
}

pub fn render(p: &Program, n: &Names) -> String {
    let v = |i: usize| match i {
        0 => "%a".to_string(),
        1 => "%b".to_string(),
        k => format!("%{}{}", n.prefix, k - 2),
    };
    let mut s = format!("@{} = global i32 {}\n\ndefine i32 @{}(i32 %a, i32 %b) {{\nentry:\n", n.global, p.global_init, n.function);
    for (k, &(op, l, r)) in p.ops.iter().enumerate() {
        s.push_str(&format!("  {} = {} i32 {}, {}\n", v(k + 2), BINOPS[op], v(l), v(r)));
    }
    let last = v(p.ops.len() + 1);
    s.push_str(&format!("  %{}g = load i32, i32* @{}\n", n.prefix, n.global));
    if p.branchy {
        s.push_str(&format!(
            "  %{0}c = icmp slt i32 {1}, %{0}g\n  br i1 %{0}c, label %{0}yes, label %{0}no\n{0}yes:\n  ret i32 {1}\n{0}no:\n  ret i32 %{0}g\n}}\n",
            n.prefix, last
        ));
    } else {
        s.push_str(&format!("  %{0}s = add i32 {1}, %{0}g\n  ret i32 %{0}s\n}}\n", n.prefix, last));
    }
    s
}
