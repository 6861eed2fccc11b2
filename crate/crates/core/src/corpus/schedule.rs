// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, BTreeSet};

use super::package::PackageDescriptor;
use crate::error::{Error, Result};

pub type Wave = BTreeSet<String>;

/// Group packages into build waves, leaves first. A package lands in the
/// wave after its deepest dependency, so each wave only depends on earlier
/// ones.
pub fn topo_schedule(packages: &[PackageDescriptor]) -> Result<Vec<Wave>> {
    let deps: BTreeMap<&str, BTreeSet<&str>> = packages
        .iter()
        .map(|p| (p.name.as_str(), p.dependencies.iter().map(String::as_str).collect()))
        .collect();
    for (name, ds) in &deps {
        if let Some(missing) = ds.iter().find(|d| !deps.contains_key(*d)) {
            return Err(Error::Validation(format!(
                "package {name:?} depends on {missing:?}, which is not in the list"
            )));
        }
    }

    let mut remaining: BTreeMap<&str, usize> = deps.iter().map(|(n, ds)| (*n, ds.len())).collect();
    let mut dependents: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (name, ds) in &deps {
        for d in ds {
            dependents.entry(d).or_default().push(name);
        }
    }
    let mut waves = Vec::new();
    let mut ready: Vec<&str> = remaining.iter().filter(|(_, &c)| c == 0).map(|(n, _)| *n).collect();
    let mut placed = 0;
    while !ready.is_empty() {
        let wave: Wave = ready.iter().map(|s| s.to_string()).collect();
        placed += wave.len();
        let mut next = Vec::new();
        for n in &ready {
            for dep in dependents.get(n).into_iter().flatten() {
                let c = remaining.get_mut(dep).unwrap();
                *c -= 1;
                if *c == 0 {
                    next.push(*dep);
                }
            }
        }
        waves.push(wave);
        next.sort_unstable();
        ready = next;
    }
    if placed < deps.len() {
        let stuck: BTreeSet<&str> = remaining.iter().filter(|(_, &c)| c > 0).map(|(n, _)| *n).collect();
        return Err(Error::Cycle(find_cycle(&deps, &stuck)));
    }
    Ok(waves)
}

/// Walk dependency edges inside the unscheduled set until a node repeats.
fn find_cycle(deps: &BTreeMap<&str, BTreeSet<&str>>, stuck: &BTreeSet<&str>) -> Vec<String> {
    let start = *stuck.iter().next().expect("a cycle leaves nodes unscheduled");
    let mut path = vec![start];
    loop {
        let cur = *path.last().unwrap();
        let next = *deps[cur].iter().find(|d| stuck.contains(*d)).expect("stuck nodes have stuck deps");
        if let Some(pos) = path.iter().position(|&p| p == next) {
            return path[pos..].iter().map(|s| s.to_string()).collect();
        }
        path.push(next);
    }
}
