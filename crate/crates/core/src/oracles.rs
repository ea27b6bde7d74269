//! Exhaustive reference solvers.
//!
//! These are deliberately plain: no heuristics, fixed search order, so that
//! every specialised solver can be checked against them.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::formula::{Assignment, Formula1in3};
use crate::graph::{build_cluster_graph, ClusterGraph, ColoredGraph, Realization};
use crate::par;

pub const DEFAULT_MAX_NODES: u64 = 100_000_000;
pub const DEFAULT_MAX_VARS: usize = 24;

#[derive(Clone, Copy, Debug)]
pub struct BruteForceOptions {
    /// Maximum number of partial choices tried before giving up.
    pub max_nodes: u64,
    /// Reject a partial choice as soon as a quotient edge to an earlier class
    /// is unrealized. Disabling this enumerates the full product.
    pub prune: bool,
    /// Split the search over the choices for class 0.
    pub parallel: bool,
}

impl Default for BruteForceOptions {
    fn default() -> Self {
        BruteForceOptions {
            max_nodes: DEFAULT_MAX_NODES,
            prune: true,
            parallel: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForceOutcome {
    pub realization: Option<Realization>,
    pub nodes_expanded: u64,
}

/// Backtracking MGR solver; returns the lexicographically least realization.
pub fn solve_bruteforce(g: &ColoredGraph) -> Result<Option<Realization>> {
    Ok(solve_bruteforce_with(g, &BruteForceOptions::default())?.realization)
}

pub fn solve_bruteforce_with(
    g: &ColoredGraph,
    opts: &BruteForceOptions,
) -> Result<BruteForceOutcome> {
    let q = build_cluster_graph(g);
    let search = Search::new(g, &q, opts);
    let k = g.num_colors();
    let first = g.class_members(0);

    let realization = if opts.parallel && k > 1 && first.len() > 1 {
        let best = AtomicUsize::new(usize::MAX);
        let jobs: Vec<(usize, usize)> = first.iter().copied().enumerate().collect();
        let results = par::map(&jobs, true, |&(i, v)| {
            let mut choice = vec![usize::MAX; k];
            choice[0] = v;
            let found = search.descend(&mut choice, 1, &|| best.load(Ordering::Relaxed) < i)?;
            if found {
                best.fetch_min(i, Ordering::Relaxed);
                Ok(Some(choice))
            } else {
                Ok(None)
            }
        });
        let mut out = None;
        for r in results {
            match r {
                Ok(Some(choice)) => {
                    out = Some(choice);
                    break;
                }
                Ok(None) => {}
                Err(e) => return Err(e),
            }
        }
        out
    } else {
        let mut choice = vec![usize::MAX; k];
        if search.descend(&mut choice, 0, &|| false)? {
            Some(choice)
        } else {
            None
        }
    };

    Ok(BruteForceOutcome {
        realization: realization.map(Realization::new),
        nodes_expanded: search.nodes.load(Ordering::Relaxed),
    })
}

struct Search<'a> {
    g: &'a ColoredGraph,
    q: &'a ClusterGraph,
    /// Quotient neighbors with a smaller color id.
    earlier: Vec<Vec<usize>>,
    opts: &'a BruteForceOptions,
    nodes: AtomicU64,
}

impl<'a> Search<'a> {
    fn new(g: &'a ColoredGraph, q: &'a ClusterGraph, opts: &'a BruteForceOptions) -> Self {
        let earlier = (0..q.num_classes())
            .map(|c| q.neighbors(c).iter().copied().filter(|&d| d < c).collect())
            .collect();
        Search {
            g,
            q,
            earlier,
            opts,
            nodes: AtomicU64::new(0),
        }
    }

    fn tick(&self) -> Result<()> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.opts.max_nodes {
            return Err(Error::BudgetExceeded {
                budget: "max-nodes",
                limit: self.opts.max_nodes,
            });
        }
        Ok(())
    }

    fn consistent(&self, choice: &[usize], c: usize) -> bool {
        let v = choice[c];
        self.earlier[c]
            .iter()
            .all(|&d| self.g.has_edge(v, choice[d]))
    }

    fn complete(&self, choice: &[usize]) -> bool {
        self.q
            .edges()
            .iter()
            .all(|&(a, b)| self.g.has_edge(choice[a], choice[b]))
    }

    fn descend(
        &self,
        choice: &mut [usize],
        c: usize,
        cancelled: &dyn Fn() -> bool,
    ) -> Result<bool> {
        if c == choice.len() {
            return Ok(self.opts.prune || self.complete(choice));
        }
        if cancelled() {
            return Ok(false);
        }
        for &v in self.g.class_members(c) {
            self.tick()?;
            choice[c] = v;
            if self.opts.prune && !self.consistent(choice, c) {
                continue;
            }
            if self.descend(choice, c + 1, cancelled)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Enumerates assignments in increasing binary order (`x_i` is bit `i-1`) and
/// returns the first with exactly one true variable per clause.
pub fn solve_1in3_bruteforce(f: &Formula1in3) -> Result<Option<Assignment>> {
    solve_1in3_bruteforce_with(f, DEFAULT_MAX_VARS)
}

pub fn solve_1in3_bruteforce_with(f: &Formula1in3, max_vars: usize) -> Result<Option<Assignment>> {
    let n = f.num_vars();
    if n > max_vars || n >= 64 {
        return Err(Error::BudgetExceeded {
            budget: "max-vars",
            limit: max_vars as u64,
        });
    }
    let masks: Vec<u64> = f
        .clauses()
        .iter()
        .map(|c| c.iter().fold(0u64, |m, &x| m | 1 << (x - 1)))
        .collect();
    let found = (0..1u64 << n).find(|&t| masks.iter().all(|&m| (t & m).count_ones() == 1));
    Ok(found.map(|t| Assignment::new((0..n).map(|i| t >> i & 1 == 1).collect())))
}

/// Whether the fixed `(class, vertex)` pairs extend to a choice over `classes`
/// realizing every cluster-graph edge among `classes`.
pub fn extends_partial(
    g: &ColoredGraph,
    q: &ClusterGraph,
    classes: &[usize],
    fixed: &[(usize, usize)],
) -> bool {
    let mut choice: Vec<Option<usize>> = vec![None; g.num_colors()];
    for &(c, v) in fixed {
        choice[c] = Some(v);
    }
    let free: Vec<usize> = classes
        .iter()
        .copied()
        .filter(|&c| choice[c].is_none())
        .collect();
    let inside: BTreeSet<usize> = classes.iter().copied().collect();
    let edges: Vec<(usize, usize)> = q
        .edges()
        .iter()
        .copied()
        .filter(|(a, b)| inside.contains(a) && inside.contains(b))
        .collect();
    fn go(
        g: &ColoredGraph,
        free: &[usize],
        edges: &[(usize, usize)],
        choice: &mut Vec<Option<usize>>,
    ) -> bool {
        let Some((&c, rest)) = free.split_first() else {
            return edges
                .iter()
                .all(|&(a, b)| g.has_edge(choice[a].unwrap(), choice[b].unwrap()));
        };
        for &v in g.class_members(c) {
            choice[c] = Some(v);
            if go(g, rest, edges, choice) {
                return true;
            }
        }
        choice[c] = None;
        false
    }
    go(g, &free, &edges, &mut choice)
}

/// Direct check for the subgraph variant: one vertex per class such that two
/// chosen vertices are adjacent exactly when their classes are joined in
/// `target_edges`.
pub fn solve_subgraph_bruteforce(
    g: &ColoredGraph,
    target_edges: &[(usize, usize)],
) -> Option<Realization> {
    let k = g.num_colors();
    let target: BTreeSet<(usize, usize)> = target_edges
        .iter()
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .collect();
    crate::sample::all_multicolored(g)
        .find(|choice| {
            (0..k).all(|i| {
                (i + 1..k).all(|j| g.has_edge(choice[i], choice[j]) == target.contains(&(i, j)))
            })
        })
        .map(Realization::new)
}
