//! Colored graphs, cluster graphs and realization checks.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unvalidated instance payload, as read from disk or assembled by a generator.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceData {
    pub num_vertices: usize,
    pub colors: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
}

impl InstanceData {
    /// Renumbers arbitrary color labels to `0..k` in increasing label order.
    ///
    /// Returns the relabeled data and the original label of every new color id.
    pub fn reindex_colors(&self) -> (InstanceData, Vec<usize>) {
        let labels: Vec<usize> = self
            .colors
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index: BTreeMap<usize, usize> =
            labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let colors = self.colors.iter().map(|c| index[c]).collect();
        (
            InstanceData {
                num_vertices: self.num_vertices,
                colors,
                edges: self.edges.clone(),
            },
            labels,
        )
    }
}

/// A broken `ColoredGraph` invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoVertices,
    ColorMapLength { expected: usize, got: usize },
    EdgeOutOfRange { u: usize, v: usize },
    SelfLoop(usize),
    DuplicateEdge(usize, usize),
    ColorUnused(usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoVertices => write!(f, "instance has no vertices"),
            Violation::ColorMapLength { expected, got } => {
                write!(f, "color map has {got} entries, expected {expected}")
            }
            Violation::EdgeOutOfRange { u, v } => {
                write!(f, "edge ({u},{v}) references a missing vertex")
            }
            Violation::SelfLoop(v) => write!(f, "self-loop at {v}"),
            Violation::DuplicateEdge(u, v) => write!(f, "duplicate edge ({u},{v})"),
            Violation::ColorUnused(c) => write!(f, "color {c} unused"),
        }
    }
}

/// Checks every `ColoredGraph` invariant and reports all violations found.
pub fn validate_instance(data: &InstanceData) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = data.num_vertices;
    if n == 0 {
        out.push(Violation::NoVertices);
    }
    if data.colors.len() != n {
        out.push(Violation::ColorMapLength {
            expected: n,
            got: data.colors.len(),
        });
    }
    let mut seen = BTreeSet::new();
    for &[u, v] in &data.edges {
        if u >= n || v >= n {
            out.push(Violation::EdgeOutOfRange { u, v });
            continue;
        }
        if u == v {
            out.push(Violation::SelfLoop(u));
            continue;
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            out.push(Violation::DuplicateEdge(key.0, key.1));
        }
    }
    if let Some(&max) = data.colors.iter().max() {
        let used: BTreeSet<usize> = data.colors.iter().copied().collect();
        for c in 0..=max {
            if !used.contains(&c) {
                out.push(Violation::ColorUnused(c));
            }
        }
    }
    out
}

/// Dense symmetric adjacency bitset.
#[derive(Clone, Debug)]
pub(crate) struct BitMatrix {
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub(crate) fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix {
            words,
            bits: vec![0; words * n],
        }
    }

    pub(crate) fn set(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
        self.bits[v * self.words + u / 64] |= 1 << (u % 64);
    }

    #[inline]
    pub(crate) fn get(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }
}

/// A validated colored graph `(G, φ)` with contiguous colors `0..k`.
#[derive(Clone, Debug)]
pub struct ColoredGraph {
    colors: Vec<usize>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    matrix: BitMatrix,
    classes: Vec<Vec<usize>>,
}

impl PartialEq for ColoredGraph {
    fn eq(&self, other: &Self) -> bool {
        self.colors == other.colors && self.edges == other.edges
    }
}

impl Eq for ColoredGraph {}

impl ColoredGraph {
    pub fn new(num_vertices: usize, colors: Vec<usize>, edges: Vec<[usize; 2]>) -> Result<Self> {
        Self::from_data(&InstanceData {
            num_vertices,
            colors,
            edges,
        })
    }

    pub fn from_data(data: &InstanceData) -> Result<Self> {
        let violations = validate_instance(data);
        if !violations.is_empty() {
            return Err(Error::InvalidInstance(violations));
        }
        let n = data.num_vertices;
        let mut edges: Vec<(usize, usize)> = data
            .edges
            .iter()
            .map(|&[u, v]| (u.min(v), u.max(v)))
            .collect();
        edges.sort_unstable();
        let mut adj = vec![Vec::new(); n];
        let mut matrix = BitMatrix::new(n);
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
            matrix.set(u, v);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let k = data.colors.iter().max().map_or(0, |&m| m + 1);
        let mut classes = vec![Vec::new(); k];
        for (v, &c) in data.colors.iter().enumerate() {
            classes[c].push(v);
        }
        Ok(ColoredGraph {
            colors: data.colors.clone(),
            edges,
            adj,
            matrix,
            classes,
        })
    }

    pub fn to_data(&self) -> InstanceData {
        InstanceData {
            num_vertices: self.num_vertices(),
            colors: self.colors.clone(),
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.colors.len()
    }

    pub fn num_colors(&self) -> usize {
        self.classes.len()
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.matrix.get(u, v)
    }

    /// Members of color class `c`, in increasing vertex order.
    pub fn class_members(&self, c: usize) -> &[usize] {
        &self.classes[c]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn cluster_size(&self) -> usize {
        self.classes.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Number of edges of `G` joining class `a` to class `b`.
    pub fn cross_edge_count(&self, a: usize, b: usize) -> usize {
        self.classes[a]
            .iter()
            .map(|&u| {
                self.classes[b]
                    .iter()
                    .filter(|&&w| self.has_edge(u, w))
                    .count()
            })
            .sum()
    }
}

/// The quotient `G_φ`: one node per color class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterGraph {
    class_members: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl ClusterGraph {
    /// Builds a cluster graph directly from class-level data.
    pub fn from_parts(class_members: Vec<Vec<usize>>, edges: &[(usize, usize)]) -> Self {
        let k = class_members.len();
        let set: BTreeSet<(usize, usize)> = edges
            .iter()
            .filter(|(a, b)| a != b)
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        let mut adj = vec![Vec::new(); k];
        for &(a, b) in &set {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        ClusterGraph {
            class_members,
            edges: set.into_iter().collect(),
            adj,
        }
    }

    pub fn num_classes(&self) -> usize {
        self.class_members.len()
    }

    pub fn class_members(&self, c: usize) -> &[usize] {
        &self.class_members[c]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, c: usize) -> &[usize] {
        &self.adj[c]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn degree(&self, c: usize) -> usize {
        self.adj[c].len()
    }

    /// The cluster graph viewed as a colored graph with the identity coloring.
    pub fn as_colored_graph(&self) -> ColoredGraph {
        let k = self.num_classes();
        ColoredGraph::new(
            k,
            (0..k).collect(),
            self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        )
        .expect("cluster graphs are simple")
    }

    /// Two-coloring of the classes if the cluster graph is bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let k = self.num_classes();
        let mut side: Vec<Option<bool>> = vec![None; k];
        for start in 0..k {
            if side[start].is_some() {
                continue;
            }
            side[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(a) = queue.pop_front() {
                let sa = side[a].unwrap();
                for &b in &self.adj[a] {
                    match side[b] {
                        None => {
                            side[b] = Some(!sa);
                            queue.push_back(b);
                        }
                        Some(sb) if sb == sa => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(Option::unwrap).collect())
    }
}

/// Collapses every color class to a node; intra-class edges and duplicates vanish.
pub fn build_cluster_graph(g: &ColoredGraph) -> ClusterGraph {
    let quotient_edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(u, v)| (g.color(u), g.color(v)))
        .filter(|(a, b)| a != b)
        .collect();
    ClusterGraph::from_parts(g.classes().to_vec(), &quotient_edges)
}

/// One chosen vertex per color class, indexed by color id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Realization {
    pub choice: Vec<usize>,
}

impl Realization {
    pub fn new(choice: Vec<usize>) -> Self {
        Realization { choice }
    }

    /// Builds a realization from a sparse class→vertex map over `k` classes.
    pub fn from_map(map: &BTreeMap<usize, usize>, k: usize) -> Result<Self> {
        if let Some((&c, _)) = map.range(k..).next() {
            return Err(Error::Format(format!(
                "class {c} does not exist (instance has {k} classes)"
            )));
        }
        let choice = (0..k)
            .map(|c| map.get(&c).copied().ok_or(Error::ClassUnassigned(c)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Realization { choice })
    }

    pub fn to_map(&self) -> BTreeMap<usize, usize> {
        self.choice.iter().copied().enumerate().collect()
    }

    pub fn vertex(&self, class: usize) -> usize {
        self.choice[class]
    }
}

fn check_structure(g: &ColoredGraph, q: &ClusterGraph, r: &Realization) -> Result<()> {
    if r.choice.len() != q.num_classes() {
        if r.choice.len() < q.num_classes() {
            return Err(Error::ClassUnassigned(r.choice.len()));
        }
        return Err(Error::RealizationSize {
            expected: q.num_classes(),
            got: r.choice.len(),
        });
    }
    for (class, &vertex) in r.choice.iter().enumerate() {
        if vertex >= g.num_vertices() {
            return Err(Error::VertexOutOfRange {
                vertex,
                num_vertices: g.num_vertices(),
            });
        }
        if g.color(vertex) != class {
            return Err(Error::WrongColor {
                class,
                vertex,
                actual: g.color(vertex),
            });
        }
    }
    Ok(())
}

/// First cluster-graph edge `(i, j)` whose chosen endpoints are not adjacent in `G`.
pub fn first_unrealized_edge(
    g: &ColoredGraph,
    q: &ClusterGraph,
    r: &Realization,
) -> Result<Option<(usize, usize)>> {
    check_structure(g, q, r)?;
    Ok(q.edges()
        .iter()
        .copied()
        .find(|&(i, j)| !g.has_edge(r.choice[i], r.choice[j])))
}

/// Whether `r` is a multicolored realization of `q` in `g`.
///
/// Structural problems (missing class, vertex of the wrong color) are errors;
/// a well-formed choice that misses a quotient edge yields `Ok(false)`.
pub fn verify_realization(g: &ColoredGraph, q: &ClusterGraph, r: &Realization) -> Result<bool> {
    let ok = first_unrealized_edge(g, q, r)?.is_none();
    #[cfg(debug_assertions)]
    if ok {
        for i in 0..r.choice.len() {
            for j in i + 1..r.choice.len() {
                debug_assert!(
                    q.has_edge(i, j) || !g.has_edge(r.choice[i], r.choice[j]),
                    "G-edge between non-adjacent classes {i} and {j}"
                );
            }
        }
    }
    Ok(ok)
}

/// Full isomorphism check: every class pair is compared in both directions.
pub fn verify_realization_strict(
    g: &ColoredGraph,
    q: &ClusterGraph,
    r: &Realization,
) -> Result<bool> {
    check_structure(g, q, r)?;
    let k = r.choice.len();
    for i in 0..k {
        for j in i + 1..k {
            if q.has_edge(i, j) != g.has_edge(r.choice[i], r.choice[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceStats {
    pub num_colors: usize,
    pub cluster_size: usize,
    pub max_degree: usize,
    pub is_bipartite_quotient: bool,
}

pub fn instance_stats(g: &ColoredGraph) -> InstanceStats {
    let q = build_cluster_graph(g);
    InstanceStats {
        num_colors: g.num_colors(),
        cluster_size: g.cluster_size(),
        max_degree: (0..g.num_vertices())
            .map(|v| g.neighbors(v).len())
            .max()
            .unwrap_or(0),
        is_bipartite_quotient: q.bipartition().is_some(),
    }
}
