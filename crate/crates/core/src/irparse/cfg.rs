// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use super::model::IrFunction;
use crate::error::{Error, Result};

/// Block-indexed control-flow graph. Edges keep multiplicity: a `switch`
/// with two cases and a default contributes three successor entries even if
/// some share a target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cfg {
    pub successors: Vec<Vec<usize>>,
    pub predecessors: Vec<Vec<usize>>,
}

impl Cfg {
    pub fn from_edges(nodes: usize, edges: &[(usize, usize)]) -> Cfg {
        let mut successors = vec![Vec::new(); nodes];
        let mut predecessors = vec![Vec::new(); nodes];
        for &(from, to) in edges {
            successors[from].push(to);
            predecessors[to].push(from);
        }
        Cfg {
            successors,
            predecessors,
        }
    }

    pub fn len(&self) -> usize {
        self.successors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.successors.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.successors.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.successors
            .iter()
            .enumerate()
            .flat_map(|(from, succ)| succ.iter().map(move |&to| (from, to)))
    }

    /// Blocks reachable from the entry (node 0).
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        if self.is_empty() {
            return seen;
        }
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(n) = stack.pop() {
            for &s in &self.successors[n] {
                if !seen[s] {
                    seen[s] = true;
                    stack.push(s);
                }
            }
        }
        seen
    }

    /// Reverse postorder of the blocks reachable from the entry.
    pub fn reverse_postorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.len());
        if self.is_empty() {
            return order;
        }
        let mut visited = vec![false; self.len()];
        // iterative DFS: (node, next successor index)
        let mut stack = vec![(0usize, 0usize)];
        visited[0] = true;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if let Some(&succ) = self.successors[node].get(*next) {
                *next += 1;
                if !visited[succ] {
                    visited[succ] = true;
                    stack.push((succ, 0));
                }
            } else {
                order.push(node);
                stack.pop();
            }
        }
        order.reverse();
        order
    }
}

/// Build the CFG of a function definition from its block terminators.
pub fn build_cfg(func: &IrFunction) -> Result<Cfg> {
    if !func.is_definition {
        return Err(Error::Analysis(format!("@{} is a declaration", func.name)));
    }
    let mut edges = Vec::new();
    for (i, block) in func.blocks.iter().enumerate() {
        let Some(term) = block.terminator() else {
            return Err(Error::Analysis(format!(
                "block %{} of @{} has no terminator",
                block.label, func.name
            )));
        };
        for label in term.successor_labels() {
            let target = func.block_index(label).ok_or_else(|| {
                Error::Analysis(format!(
                    "branch to undefined label %{label} in @{}",
                    func.name
                ))
            })?;
            edges.push((i, target));
        }
    }
    Ok(Cfg::from_edges(func.blocks.len(), &edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irparse::parse_module;

    fn cfg_of(src: &str) -> Cfg {
        let m = parse_module(src).unwrap();
        build_cfg(&m.functions[0]).unwrap()
    }

    #[test]
    fn single_block() {
        let c = cfg_of("define void @f() {\n  ret void\n}\n");
        assert_eq!(c.len(), 1);
        assert_eq!(c.edge_count(), 0);
    }

    #[test]
    fn diamond_has_four_edges() {
        let c = cfg_of(
            "define void @f(i1 %c) {\nentry:\n  br i1 %c, label %t, label %e\nt:\n  br label %x\ne:\n  br label %x\nx:\n  ret void\n}\n",
        );
        assert_eq!(c.len(), 4);
        assert_eq!(c.edge_count(), 4);
        assert_eq!(c.successors[0], vec![1, 2]);
        assert_eq!(c.predecessors[3], vec![1, 2]);
    }

    #[test]
    fn switch_with_two_cases_has_three_successors() {
        let c = cfg_of(
            "define void @f(i32 %v) {\nentry:\n  switch i32 %v, label %d [\n    i32 0, label %a\n    i32 1, label %b\n  ]\na:\n  ret void\nb:\n  ret void\nd:\n  ret void\n}\n",
        );
        assert_eq!(c.successors[0], vec![3, 1, 2]);
    }

    #[test]
    fn predecessors_invert_successors() {
        let c = Cfg::from_edges(4, &[(0, 1), (1, 2), (2, 1), (1, 3), (0, 3)]);
        for (from, to) in c.edges() {
            assert!(c.predecessors[to].contains(&from));
        }
        let pred_total: usize = c.predecessors.iter().map(Vec::len).sum();
        assert_eq!(pred_total, c.edge_count());
    }

    #[test]
    fn undefined_label_is_an_analysis_error() {
        let m = parse_module("define void @f() {\n  br label %nowhere\n}\n").unwrap();
        assert!(matches!(build_cfg(&m.functions[0]), Err(Error::Analysis(_))));
    }
}
