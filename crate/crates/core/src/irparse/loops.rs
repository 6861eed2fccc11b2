// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;

use serde::Serialize;

use super::cfg::Cfg;
use super::dom::DomTree;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NaturalLoop {
    pub header: usize,
    pub latches: Vec<usize>,
    /// Includes the header.
    pub body: BTreeSet<usize>,
    pub parent: Option<usize>,
    /// 1 for top-level loops.
    pub depth: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LoopForest {
    pub loops: Vec<NaturalLoop>,
}

impl LoopForest {
    pub fn top_level_loop_count(&self) -> usize {
        self.loops.iter().filter(|l| l.parent.is_none()).count()
    }

    pub fn max_loop_depth(&self) -> usize {
        self.loops.iter().map(|l| l.depth).max().unwrap_or(0)
    }
}

/// One loop per header, merging every back edge into that header. Bodies
/// are found by walking predecessors from the latches up to the header.
pub fn find_natural_loops(cfg: &Cfg, dom: &DomTree) -> LoopForest {
    let mut loops: Vec<NaturalLoop> = Vec::new();
    for header in 0..cfg.len() {
        if !dom.is_reachable(header) {
            continue;
        }
        let mut latches: Vec<usize> = cfg.predecessors[header]
            .iter()
            .copied()
            .filter(|&p| dom.is_reachable(p) && dom.dominates(header, p))
            .collect();
        latches.sort_unstable();
        latches.dedup();
        if latches.is_empty() {
            continue;
        }
        let mut body = BTreeSet::from([header]);
        let mut stack: Vec<usize> = latches.clone();
        while let Some(n) = stack.pop() {
            if body.insert(n) {
                stack.extend(
                    cfg.predecessors[n]
                        .iter()
                        .copied()
                        .filter(|&p| dom.is_reachable(p)),
                );
            }
        }
        loops.push(NaturalLoop {
            header,
            latches,
            body,
            parent: None,
            depth: 0,
        });
    }

    // parent = smallest strictly enclosing loop
    for i in 0..loops.len() {
        let parent = (0..loops.len())
            .filter(|&j| j != i && loops[j].body.contains(&loops[i].header))
            .filter(|&j| loops[j].body.is_superset(&loops[i].body) && loops[j].body.len() > loops[i].body.len())
            .min_by_key(|&j| loops[j].body.len());
        loops[i].parent = parent;
    }
    for i in 0..loops.len() {
        let mut depth = 1;
        let mut cur = loops[i].parent;
        while let Some(p) = cur {
            depth += 1;
            cur = loops[p].parent;
        }
        loops[i].depth = depth;
    }
    LoopForest { loops }
}
