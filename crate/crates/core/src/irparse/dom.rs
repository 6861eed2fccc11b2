// SPDX-License-Identifier: Apache-2.0

//! Immediate dominators via the iterative algorithm of Cooper, Harvey and
//! Kennedy over reverse postorder.

use serde::Serialize;

use super::cfg::Cfg;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DomTree {
    /// `idom[entry] == Some(entry)`; `None` for unreachable blocks.
    pub idom: Vec<Option<usize>>,
    pub unreachable: Vec<usize>,
}

impl DomTree {
    pub fn is_reachable(&self, n: usize) -> bool {
        self.idom[n].is_some()
    }

    /// Whether `a` dominates `b` (reflexive). False if either is unreachable.
    pub fn dominates(&self, a: usize, b: usize) -> bool {
        if !self.is_reachable(a) || !self.is_reachable(b) {
            return false;
        }
        let mut cur = b;
        loop {
            if cur == a {
                return true;
            }
            let up = self.idom[cur].expect("reachable");
            if up == cur {
                return false;
            }
            cur = up;
        }
    }

    pub fn depth(&self, n: usize) -> Option<usize> {
        let mut cur = n;
        let mut d = 0;
        loop {
            let up = self.idom[cur]?;
            if up == cur {
                return Some(d);
            }
            d += 1;
            cur = up;
        }
    }
}

pub fn compute_dominators(cfg: &Cfg) -> DomTree {
    let n = cfg.len();
    if n == 0 {
        return DomTree {
            idom: vec![],
            unreachable: vec![],
        };
    }
    let rpo = cfg.reverse_postorder();
    let mut order = vec![usize::MAX; n];
    for (i, &b) in rpo.iter().enumerate() {
        order[b] = i;
    }
    let mut idom: Vec<Option<usize>> = vec![None; n];
    idom[0] = Some(0);

    let intersect = |idom: &[Option<usize>], mut a: usize, mut b: usize| -> usize {
        while a != b {
            while order[a] > order[b] {
                a = idom[a].unwrap();
            }
            while order[b] > order[a] {
                b = idom[b].unwrap();
            }
        }
        a
    };

    let mut changed = true;
    while changed {
        changed = false;
        for &b in rpo.iter().skip(1) {
            let mut new_idom: Option<usize> = None;
            for &p in &cfg.predecessors[b] {
                if idom[p].is_none() {
                    continue;
                }
                new_idom = Some(match new_idom {
                    None => p,
                    Some(cur) => intersect(&idom, p, cur),
                });
            }
            if new_idom.is_some() && idom[b] != new_idom {
                idom[b] = new_idom;
                changed = true;
            }
        }
    }
    let unreachable = (0..n).filter(|&b| idom[b].is_none()).collect();
    DomTree { idom, unreachable }
}
