use std::collections::BTreeMap;

use super::{GeneratedInstance, GeneratorMeta, ReductionKind, Role};
use crate::error::Result;
use crate::formula::Formula1in3;
use crate::graph::ColoredGraph;

/// Variable `x_i` (1-based) is class `i - 1` with vertices `2(i-1)` for bit 0
/// and `2(i-1) + 1` for bit 1. Clause `j` is class `n + j - 1`; its three
/// vertices say which of the clause's variables is the true one.
fn layout(f: &Formula1in3) -> (usize, Vec<usize>, BTreeMap<usize, Role>) {
    let n = f.num_vars();
    let m = f.num_clauses();
    let mut colors = Vec::with_capacity(2 * n + 3 * m);
    let mut roles = BTreeMap::new();
    for i in 0..n {
        colors.extend([i, i]);
        roles.insert(i, Role::Variable { var: i + 1 });
    }
    for j in 0..m {
        colors.extend([n + j; 3]);
        roles.insert(n + j, Role::Clause { clause: j + 1 });
    }
    (2 * n + 3 * m, colors, roles)
}

fn bit_vertex(var: usize, bit: usize) -> usize {
    2 * (var - 1) + bit
}

fn build(f: &Formula1in3, biconvex: bool) -> Result<GeneratedInstance> {
    let n = f.num_vars();
    let (num_vertices, colors, roles) = layout(f);
    let mut edges = Vec::new();
    if !biconvex {
        for i in 1..n {
            for a in 0..2 {
                for b in 0..2 {
                    edges.push([bit_vertex(i, a), bit_vertex(i + 1, b)]);
                }
            }
        }
    }
    for (j, clause) in f.clauses().iter().enumerate() {
        let (lo, hi) = (clause[0], clause[2]);
        for (t, _) in clause.iter().enumerate() {
            let u = 2 * n + 3 * j + t;
            for var in 1..=n {
                if let Some(s) = clause.iter().position(|&x| x == var) {
                    edges.push([u, bit_vertex(var, (s == t) as usize)]);
                } else if (lo < var && var < hi) || biconvex {
                    edges.push([u, bit_vertex(var, 0)]);
                    edges.push([u, bit_vertex(var, 1)]);
                }
            }
        }
    }
    let graph = ColoredGraph::new(num_vertices, colors, edges)?;
    let (reduction, x_order) = if biconvex {
        (ReductionKind::Biconvex, Some((0..n).collect()))
    } else {
        (ReductionKind::Chordal, None)
    };
    Ok(GeneratedInstance {
        graph,
        meta: GeneratorMeta {
            reduction,
            formula: f.clone(),
            roles,
            grid_coords: None,
            x_order,
        },
    })
}

/// Variable classes form a path joined by complete bipartite links; each
/// clause class attaches to the stretch of the path its variables span.
pub fn gen_chordal(f: &Formula1in3) -> Result<GeneratedInstance> {
    build(f, false)
}

/// As [`gen_chordal`] without the path links, with every clause vertex
/// fully joined to the variables outside its clause. The cluster graph is
/// complete bipartite.
pub fn gen_biconvex(f: &Formula1in3) -> Result<GeneratedInstance> {
    build(f, true)
}
