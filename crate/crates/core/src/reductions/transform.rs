use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{build_cluster_graph, ColoredGraph};

/// Tops every class up to `s` vertices with isolated vertices.
///
/// A class that is isolated in the cluster graph accepts any vertex, so
/// padding it would not change the answer but would let the new vertices be
/// chosen; such instances are rejected instead.
pub fn pad_to_size(g: &ColoredGraph, s: usize) -> Result<ColoredGraph> {
    if s < g.cluster_size() {
        return Err(Error::Precondition(format!(
            "target size {s} is below the cluster size {}",
            g.cluster_size()
        )));
    }
    let q = build_cluster_graph(g);
    let mut colors = g.colors().to_vec();
    for c in 0..g.num_colors() {
        let have = g.class_members(c).len();
        if have < s && q.degree(c) == 0 {
            return Err(Error::PaddingIsolatedClass(c));
        }
        colors.extend(std::iter::repeat_n(c, s - have));
    }
    let edges = g.edges().iter().map(|&(u, v)| [u, v]).collect();
    ColoredGraph::new(colors.len(), colors, edges)
}

/// A graph together with the subgraph `H` of its cluster graph that should
/// be realized exactly.
#[derive(Clone, Debug)]
pub struct SubgraphTarget {
    pub instance: ColoredGraph,
    pub target_edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub enum MsgrOutcome {
    Transformed(ColoredGraph),
    /// The cross links of this dropped cluster edge are complete, so no
    /// choice can avoid it.
    Blocked {
        edge: (usize, usize),
    },
}

/// Complements the cross links of every cluster edge missing from the
/// target, so realizing the new cluster graph is the same as realizing `H`.
pub fn msgr_to_mgr(t: &SubgraphTarget) -> Result<MsgrOutcome> {
    let g = &t.instance;
    let q = build_cluster_graph(g);
    let mut target = BTreeSet::new();
    for &(a, b) in &t.target_edges {
        if !q.has_edge(a, b) {
            return Err(Error::TargetEdgeNotInQuotient(a, b));
        }
        target.insert((a.min(b), a.max(b)));
    }
    let dropped: Vec<(usize, usize)> = q
        .edges()
        .iter()
        .copied()
        .filter(|e| !target.contains(e))
        .collect();
    for &(a, b) in &dropped {
        if g.cross_edge_count(a, b) == g.class_members(a).len() * g.class_members(b).len() {
            return Ok(MsgrOutcome::Blocked { edge: (a, b) });
        }
    }
    let dropped: BTreeSet<(usize, usize)> = dropped.into_iter().collect();
    let class_pair = |u: usize, v: usize| {
        let (a, b) = (g.color(u), g.color(v));
        (a.min(b), a.max(b))
    };
    let mut edges: Vec<[usize; 2]> = g
        .edges()
        .iter()
        .filter(|&&(u, v)| !dropped.contains(&class_pair(u, v)))
        .map(|&(u, v)| [u, v])
        .collect();
    for &(a, b) in &dropped {
        for &u in g.class_members(a) {
            for &v in g.class_members(b) {
                if !g.has_edge(u, v) {
                    edges.push([u, v]);
                }
            }
        }
    }
    Ok(MsgrOutcome::Transformed(ColoredGraph::new(
        g.num_vertices(),
        g.colors().to_vec(),
        edges,
    )?))
}
