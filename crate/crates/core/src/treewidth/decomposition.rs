use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::graph::ClusterGraph;

/// A rooted tree decomposition of a cluster graph. Bags hold color ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    /// `(parent, child)` pairs.
    pub edges: Vec<(usize, usize)>,
    pub root: usize,
}

impl TreeDecomposition {
    /// Largest bag size minus one.
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    pub(crate) fn children(&self) -> Vec<Vec<usize>> {
        let mut children = vec![Vec::new(); self.bags.len()];
        for &(p, c) in &self.edges {
            children[p].push(c);
        }
        for list in &mut children {
            list.sort_unstable();
        }
        children
    }
}

/// Outcome of [`validate_decomposition`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub violations: Vec<String>,
    pub width: usize,
}

impl DecompositionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Tree shape and the running-intersection property; independent of any graph.
pub(crate) fn structural_violations(t: &TreeDecomposition) -> Vec<String> {
    let n = t.bags.len();
    let mut out = Vec::new();
    if n == 0 {
        out.push("decomposition has no nodes".to_string());
        return out;
    }
    if t.root >= n {
        out.push(format!("root {} does not exist", t.root));
        return out;
    }
    let mut parent = vec![None; n];
    for &(p, c) in &t.edges {
        if p >= n || c >= n {
            out.push(format!("tree edge ({p},{c}) references a missing node"));
            continue;
        }
        if parent[c].replace(p).is_some() {
            out.push(format!("node {c} has more than one parent"));
        }
    }
    if parent[t.root].is_some() {
        out.push(format!("root {} has a parent", t.root));
    }
    if !out.is_empty() {
        return out;
    }
    let children = t.children();
    let mut seen = vec![false; n];
    let mut stack = vec![t.root];
    seen[t.root] = true;
    while let Some(v) = stack.pop() {
        for &c in &children[v] {
            if !seen[c] {
                seen[c] = true;
                stack.push(c);
            }
        }
    }
    for (v, ok) in seen.iter().enumerate() {
        if !ok {
            out.push(format!("node {v} is not reachable from the root"));
        }
    }
    if !out.is_empty() {
        return out;
    }
    for (v, bag) in t.bags.iter().enumerate() {
        let distinct: BTreeSet<_> = bag.iter().collect();
        if distinct.len() != bag.len() {
            out.push(format!("bag of node {v} repeats a class"));
        }
    }
    // Bags holding a class are connected iff exactly one of them has a
    // parent outside the set.
    let classes: BTreeSet<usize> = t.bags.iter().flatten().copied().collect();
    for c in classes {
        let tops = (0..n)
            .filter(|&v| t.bags[v].contains(&c))
            .filter(|&v| parent[v].is_none_or(|p| !t.bags[p].contains(&c)))
            .count();
        if tops > 1 {
            out.push(format!("bags containing class {c} are disconnected"));
        }
    }
    out
}

/// Checks the three decomposition properties against `q` and reports the width.
pub fn validate_decomposition(q: &ClusterGraph, t: &TreeDecomposition) -> DecompositionReport {
    let mut violations = structural_violations(t);
    let k = q.num_classes();
    let mut covered = vec![false; k];
    for (v, bag) in t.bags.iter().enumerate() {
        for &c in bag {
            if c >= k {
                violations.push(format!("bag of node {v} lists unknown class {c}"));
            } else {
                covered[c] = true;
            }
        }
    }
    for (c, ok) in covered.iter().enumerate() {
        if !ok {
            violations.push(format!("class {c} is in no bag"));
        }
    }
    for &(a, b) in q.edges() {
        if !t
            .bags
            .iter()
            .any(|bag| bag.contains(&a) && bag.contains(&b))
        {
            violations.push(format!("edge {{{a},{b}}} uncovered"));
        }
    }
    DecompositionReport {
        violations,
        width: t.width(),
    }
}

/// Decomposition from the min-fill elimination heuristic.
///
/// Ties on fill-in go to the lower degree, then the lower class id. The bag
/// of each eliminated class is the class plus its neighbors at elimination
/// time; its parent is the bag of the earliest-eliminated neighbor.
pub fn min_fill_decomposition(q: &ClusterGraph) -> TreeDecomposition {
    let k = q.num_classes();
    let mut adj: Vec<BTreeSet<usize>> = (0..k)
        .map(|c| q.neighbors(c).iter().copied().collect())
        .collect();
    let mut alive = vec![true; k];
    let mut order = Vec::with_capacity(k);
    let mut bags = Vec::with_capacity(k);
    for _ in 0..k {
        let v = (0..k)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (fill_in(&adj, v), adj[v].len(), v))
            .expect("a live class remains");
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        for &a in &nbrs {
            adj[a].remove(&v);
        }
        adj[v].clear();
        alive[v] = false;
        let mut bag = nbrs;
        bag.push(v);
        bag.sort_unstable();
        order.push(v);
        bags.push(bag);
    }
    let mut position = vec![0; k];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut edges = Vec::with_capacity(k.saturating_sub(1));
    for (i, bag) in bags.iter().enumerate() {
        if i + 1 == k {
            break;
        }
        let parent = bag
            .iter()
            .map(|&c| position[c])
            .filter(|&p| p > i)
            .min()
            .unwrap_or(i + 1);
        edges.push((parent, i));
    }
    TreeDecomposition {
        bags,
        edges,
        root: k.saturating_sub(1),
    }
}

fn fill_in(adj: &[BTreeSet<usize>], v: usize) -> usize {
    let nbrs: Vec<usize> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            if !adj[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}
