// SPDX-License-Identifier: Apache-2.0

//! Brute-force dominator and loop oracles over small random graphs.

use std::collections::BTreeSet;

use rand::Rng;

/// Random graph with node 0 as entry. Edges may repeat, self loops and
/// unreachable nodes are allowed.
pub fn random_graph<R: Rng>(rng: &mut R, max_nodes: usize) -> (usize, Vec<(usize, usize)>) {
    let n = rng.gen_range(1..=max_nodes);
    let density = rng.gen_range(0.05..0.45);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if rng.gen_bool(density) {
                edges.push((a, b));
            }
        }
    }
    // bias towards mostly reachable graphs: a forward spine
    if n > 1 && rng.gen_bool(0.7) {
        for a in 0..n - 1 {
            if rng.gen_bool(0.8) {
                edges.push((a, a + 1));
            }
        }
    }
    (n, edges)
}

/// Nodes reachable from node 0 while pretending `removed` does not exist.
pub fn reachable_without(n: usize, edges: &[(usize, usize)], removed: Option<usize>) -> Vec<bool> {
    let mut seen = vec![false; n];
    if removed == Some(0) || n == 0 {
        return seen;
    }
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in edges {
            if a == v && Some(b) != removed && !seen[b] {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    seen
}

/// `d` dominates `v` iff removing `d` cuts `v` off from the entry.
pub fn brute_dominators(n: usize, edges: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
    let reach = reachable_without(n, edges, None);
    let mut doms = vec![BTreeSet::new(); n];
    for d in 0..n {
        if !reach[d] {
            continue;
        }
        let without = reachable_without(n, edges, Some(d));
        for v in 0..n {
            if reach[v] && (v == d || !without[v]) {
                doms[v].insert(d);
            }
        }
    }
    doms
}

/// Immediate dominator: the strict dominator that every other strict
/// dominator dominates, i.e. the one with the largest dominator set. The
/// entry maps to itself; unreachable nodes to `None`.
pub fn brute_idoms(n: usize, edges: &[(usize, usize)]) -> Vec<Option<usize>> {
    let doms = brute_dominators(n, edges);
    (0..n)
        .map(|v| {
            if doms[v].is_empty() {
                None
            } else if v == 0 {
                Some(0)
            } else {
                doms[v].iter().copied().filter(|&d| d != v).max_by_key(|&d| doms[d].len())
            }
        })
        .collect()
}

/// Natural loop of every header: the header plus all nodes that reach one of
/// its back-edge sources without passing through the header.
pub fn brute_loops(n: usize, edges: &[(usize, usize)]) -> Vec<(usize, BTreeSet<usize>)> {
    let doms = brute_dominators(n, edges);
    let mut out = Vec::new();
    for h in 0..n {
        let latches: Vec<usize> =
            edges.iter().filter(|&&(a, b)| b == h && doms[a].contains(&h)).map(|&(a, _)| a).collect();
        if latches.is_empty() {
            continue;
        }
        let mut body: BTreeSet<usize> = BTreeSet::from([h]);
        let mut stack: Vec<usize> = latches.into_iter().filter(|&l| body.insert(l)).collect();
        while let Some(v) = stack.pop() {
            for &(a, b) in edges {
                if b == v && doms[a].contains(&0) && body.insert(a) {
                    stack.push(a);
                }
            }
        }
        out.push((h, body));
    }
    out
}

/// Whether `to` is reachable from `from` using only nodes of `within`.
pub fn reaches_within(edges: &[(usize, usize)], from: usize, to: usize, within: &BTreeSet<usize>) -> bool {
    let mut seen = BTreeSet::from([from]);
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        if v == to {
            return true;
        }
        for &(a, b) in edges {
            if a == v && within.contains(&b) && seen.insert(b) {
                stack.push(b);
            }
        }
    }
    false
}
