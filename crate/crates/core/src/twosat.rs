//! Cluster size two: reduction to 2-SAT and an implication-graph solver.
//!
//! Every class becomes a boolean variable. A singleton `{u}` is forced true;
//! in a pair `{u, v}` (with `u < v`) the literal `x` selects `u` and `¬x`
//! selects `v`. Each non-adjacent pair `u ∈ A_i`, `w ∈ A_j` across a cluster
//! edge forbids choosing both: clause `¬l_u ∨ ¬l_w`.

use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::Assignment;
use crate::graph::{build_cluster_graph, ColoredGraph, Realization};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Self {
        Literal {
            var,
            positive: false,
        }
    }

    pub fn negate(self) -> Self {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }

    pub fn eval(self, a: &Assignment) -> bool {
        a.values[self.var] == self.positive
    }

    fn node(self) -> usize {
        2 * self.var + usize::from(!self.positive)
    }

    fn dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.positive {
            v
        } else {
            -v
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "x{}", self.var + 1)
        } else {
            write!(f, "¬x{}", self.var + 1)
        }
    }
}

/// A 2-CNF formula with unit clauses kept separate.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwoSatInstance {
    pub num_vars: usize,
    pub unit_clauses: Vec<Literal>,
    pub binary_clauses: Vec<(Literal, Literal)>,
}

impl TwoSatInstance {
    pub fn validate(&self) -> Result<()> {
        let bad = self
            .unit_clauses
            .iter()
            .chain(self.binary_clauses.iter().flat_map(|(a, b)| [a, b]))
            .find(|l| l.var >= self.num_vars);
        match bad {
            Some(l) => Err(Error::Precondition(format!(
                "literal {l} exceeds the {} declared variables",
                self.num_vars
            ))),
            None => Ok(()),
        }
    }

    pub fn num_clauses(&self) -> usize {
        self.unit_clauses.len() + self.binary_clauses.len()
    }

    pub fn satisfied_by(&self, a: &Assignment) -> bool {
        self.unit_clauses.iter().all(|l| l.eval(a))
            && self
                .binary_clauses
                .iter()
                .all(|(x, y)| x.eval(a) || y.eval(a))
    }

    /// DIMACS CNF text; units are single-literal clauses.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.num_clauses());
        for l in &self.unit_clauses {
            let _ = writeln!(out, "{} 0", l.dimacs());
        }
        for (a, b) in &self.binary_clauses {
            let _ = writeln!(out, "{} {} 0", a.dimacs(), b.dimacs());
        }
        out
    }
}

/// Literal attached to each vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiteralMap {
    pub literals: Vec<Literal>,
}

impl LiteralMap {
    pub fn literal(&self, v: usize) -> Literal {
        self.literals[v]
    }

    /// The vertex set whose literals are true under `a`.
    pub fn decode(&self, g: &ColoredGraph, a: &Assignment) -> Realization {
        let choice = (0..g.num_colors())
            .map(|c| {
                *g.class_members(c)
                    .iter()
                    .find(|&&v| self.literals[v].eval(a))
                    .expect("exactly one literal per class is true")
            })
            .collect();
        Realization::new(choice)
    }

    /// The assignment making the literals of the chosen vertices true.
    pub fn encode(&self, r: &Realization) -> Assignment {
        let mut values = vec![false; r.choice.len()];
        for &v in &r.choice {
            let l = self.literals[v];
            values[l.var] = l.positive;
        }
        Assignment::new(values)
    }
}

pub fn reduce_to_2sat(g: &ColoredGraph) -> Result<(TwoSatInstance, LiteralMap)> {
    let s = g.cluster_size();
    if s > 2 {
        return Err(Error::Precondition(format!(
            "2-SAT reduction needs cluster size at most 2, got {s}"
        )));
    }
    let k = g.num_colors();
    let mut literals = vec![Literal::pos(0); g.num_vertices()];
    let mut f = TwoSatInstance {
        num_vars: k,
        ..Default::default()
    };
    for c in 0..k {
        match g.class_members(c) {
            [u] => {
                literals[*u] = Literal::pos(c);
                f.unit_clauses.push(Literal::pos(c));
            }
            [u, v] => {
                literals[*u] = Literal::pos(c);
                literals[*v] = Literal::neg(c);
            }
            _ => unreachable!("class sizes are 1 or 2"),
        }
    }
    let q = build_cluster_graph(g);
    for &(i, j) in q.edges() {
        for &u in g.class_members(i) {
            for &w in g.class_members(j) {
                if !g.has_edge(u, w) {
                    f.binary_clauses
                        .push((literals[u].negate(), literals[w].negate()));
                }
            }
        }
    }
    Ok((f, LiteralMap { literals }))
}

/// Implication graph plus strongly connected components (Kosaraju).
pub fn solve_2sat(f: &TwoSatInstance) -> Option<Assignment> {
    let n = 2 * f.num_vars;
    let mut implications: Vec<(usize, usize)> = Vec::new();
    for &l in &f.unit_clauses {
        implications.push((l.negate().node(), l.node()));
    }
    for &(a, b) in &f.binary_clauses {
        implications.push((a.negate().node(), b.node()));
        implications.push((b.negate().node(), a.node()));
    }
    let forward = Csr::new(n, implications.iter().copied());
    let backward = Csr::new(n, implications.iter().map(|&(a, b)| (b, a)));
    let comp = kosaraju(&forward, &backward);
    let mut values = Vec::with_capacity(f.num_vars);
    for var in 0..f.num_vars {
        let (p, q) = (comp[2 * var], comp[2 * var + 1]);
        if p == q {
            return None;
        }
        // Components are numbered in topological order; a literal whose
        // component comes later is implied by its negation, never the reverse.
        values.push(p > q);
    }
    Some(Assignment::new(values))
}

/// Compressed adjacency lists.
struct Csr {
    start: Vec<usize>,
    targets: Vec<usize>,
}

impl Csr {
    fn new(n: usize, edges: impl Iterator<Item = (usize, usize)> + Clone) -> Self {
        let mut start = vec![0usize; n + 1];
        for (a, _) in edges.clone() {
            start[a + 1] += 1;
        }
        for i in 0..n {
            start[i + 1] += start[i];
        }
        let mut fill = start.clone();
        let mut targets = vec![0; start[n]];
        for (a, b) in edges {
            targets[fill[a]] = b;
            fill[a] += 1;
        }
        Csr { start, targets }
    }

    fn out(&self, v: usize) -> &[usize] {
        &self.targets[self.start[v]..self.start[v + 1]]
    }
}

fn kosaraju(forward: &Csr, backward: &Csr) -> Vec<usize> {
    let n = forward.start.len() - 1;
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        stack.push((root, 0));
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if let Some(&w) = forward.out(v).get(*i) {
                *i += 1;
                if !visited[w] {
                    visited[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
                stack.pop();
            }
        }
    }
    const UNSET: usize = usize::MAX;
    let mut comp = vec![UNSET; n];
    let mut next = 0;
    let mut work = Vec::new();
    for &root in order.iter().rev() {
        if comp[root] != UNSET {
            continue;
        }
        comp[root] = next;
        work.push(root);
        while let Some(v) = work.pop() {
            for &w in backward.out(v) {
                if comp[w] == UNSET {
                    comp[w] = next;
                    work.push(w);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Polynomial solver for cluster size at most two.
pub fn solve_size2(g: &ColoredGraph) -> Result<Option<Realization>> {
    let (f, map) = reduce_to_2sat(g)?;
    Ok(solve_2sat(&f).map(|a| map.decode(g, &a)))
}
