//! Seeded random instance and formula samplers.

use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::error::{Error, Result};
use crate::formula::Formula1in3;
use crate::graph::{ColoredGraph, InstanceData};

/// `n` vertices with a random contiguous coloring and i.i.d. edges.
pub fn random_data<R: Rng>(rng: &mut R, n: usize, edge_prob: f64) -> InstanceData {
    let k = rng.random_range(1..=n);
    let mut colors: Vec<usize> = (0..k).collect();
    colors.extend((k..n).map(|_| rng.random_range(0..k)));
    colors.shuffle(rng);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(edge_prob) {
                edges.push([u, v]);
            }
        }
    }
    InstanceData {
        num_vertices: n,
        colors,
        edges,
    }
}

/// Knobs for [`random_instance`].
#[derive(Clone, Copy, Debug)]
pub struct InstanceParams {
    pub max_classes: usize,
    pub max_class_size: usize,
    /// Probability that two classes are adjacent in the cluster graph.
    pub quotient_density: f64,
    /// Probability of each cross link between adjacent classes.
    pub cross_density: f64,
    /// Probability of each intra-class edge.
    pub intra_density: f64,
}

impl Default for InstanceParams {
    fn default() -> Self {
        InstanceParams {
            max_classes: 8,
            max_class_size: 3,
            quotient_density: 0.4,
            cross_density: 0.55,
            intra_density: 0.1,
        }
    }
}

fn class_sizes<R: Rng>(rng: &mut R, k: usize, max_size: usize) -> Vec<usize> {
    (0..k).map(|_| rng.random_range(1..=max_size)).collect()
}

/// Shuffled vertex ids, grouped by class.
fn lay_out_classes<R: Rng>(rng: &mut R, sizes: &[usize]) -> (Vec<usize>, Vec<Vec<usize>>) {
    let n: usize = sizes.iter().sum();
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    let mut colors = vec![0; n];
    let mut members = Vec::with_capacity(sizes.len());
    let mut next = 0;
    for (c, &s) in sizes.iter().enumerate() {
        let mut m: Vec<usize> = ids[next..next + s].to_vec();
        m.sort_unstable();
        for &v in &m {
            colors[v] = c;
        }
        members.push(m);
        next += s;
    }
    (colors, members)
}

fn link_classes<R: Rng>(
    rng: &mut R,
    a: &[usize],
    b: &[usize],
    density: f64,
    edges: &mut Vec<[usize; 2]>,
) {
    let before = edges.len();
    for &u in a {
        for &w in b {
            if rng.random_bool(density) {
                edges.push([u, w]);
            }
        }
    }
    if edges.len() == before {
        edges.push([
            a[rng.random_range(0..a.len())],
            b[rng.random_range(0..b.len())],
        ]);
    }
}

/// A random colored graph with at most `max_classes` classes of size at most
/// `max_class_size`.
pub fn random_instance<R: Rng>(rng: &mut R, p: &InstanceParams) -> ColoredGraph {
    let k = rng.random_range(1..=p.max_classes);
    let sizes = class_sizes(rng, k, p.max_class_size);
    let (colors, members) = lay_out_classes(rng, &sizes);
    let mut edges = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            if rng.random_bool(p.quotient_density) {
                link_classes(rng, &members[a], &members[b], p.cross_density, &mut edges);
            }
        }
        let m = &members[a];
        for i in 0..m.len() {
            for j in i + 1..m.len() {
                if rng.random_bool(p.intra_density) {
                    edges.push([m[i], m[j]]);
                }
            }
        }
    }
    ColoredGraph::new(colors.len(), colors, edges).expect("sampler emits valid instances")
}

/// Knobs for [`random_convex`].
#[derive(Clone, Copy, Debug)]
pub struct ConvexParams {
    pub max_x: usize,
    pub max_y: usize,
    pub max_class_size: usize,
    pub max_spread: usize,
    pub cross_density: f64,
}

impl Default for ConvexParams {
    fn default() -> Self {
        ConvexParams {
            max_x: 8,
            max_y: 4,
            max_class_size: 3,
            max_spread: 4,
            cross_density: 0.6,
        }
    }
}

/// A random instance whose cluster graph is convex bipartite, together with
/// the x-order that witnesses convexity. Color ids are shuffled so the order
/// is not simply `0..α`.
pub fn random_convex<R: Rng>(rng: &mut R, p: &ConvexParams) -> (ColoredGraph, Vec<usize>) {
    let alpha = rng.random_range(1..=p.max_x);
    let beta = rng.random_range(0..=p.max_y);
    let k = alpha + beta;
    let mut ids: Vec<usize> = (0..k).collect();
    ids.shuffle(rng);
    let x_order = ids[..alpha].to_vec();
    let y_classes = ids[alpha..].to_vec();
    let sizes = class_sizes(rng, k, p.max_class_size);
    let (colors, members) = lay_out_classes(rng, &sizes);
    let mut edges = Vec::new();
    for &y in &y_classes {
        if rng.random_bool(0.15) {
            continue;
        }
        let len = rng.random_range(1..=p.max_spread.min(alpha));
        let start = rng.random_range(0..=alpha - len);
        for &x in &x_order[start..start + len] {
            link_classes(rng, &members[y], &members[x], p.cross_density, &mut edges);
        }
    }
    let g = ColoredGraph::new(colors.len(), colors, edges).expect("sampler emits valid instances");
    (g, x_order)
}

/// `m` clauses over `n` variables, each a sorted triple. With `distinct`, the
/// triples are drawn without replacement from all `C(n, 3)` candidates.
pub fn random_formula<R: Rng>(
    rng: &mut R,
    n: usize,
    m: usize,
    distinct: bool,
) -> Result<Formula1in3> {
    if m > 0 && n < 3 {
        return Err(Error::InvalidFormula(format!(
            "random clauses need at least 3 variables, got {n}"
        )));
    }
    let clauses = if distinct {
        let mut all = Vec::new();
        for a in 1..=n {
            for b in a + 1..=n {
                for c in b + 1..=n {
                    all.push([a, b, c]);
                }
            }
        }
        if m > all.len() {
            return Err(Error::InvalidFormula(format!(
                "only {} distinct clauses exist over {n} variables, {m} requested",
                all.len()
            )));
        }
        index::sample(rng, all.len(), m)
            .into_iter()
            .map(|i| all[i])
            .collect()
    } else {
        (0..m)
            .map(|_| {
                let picked = index::sample(rng, n, 3);
                let mut c = [
                    picked.index(0) + 1,
                    picked.index(1) + 1,
                    picked.index(2) + 1,
                ];
                c.sort_unstable();
                c
            })
            .collect()
    };
    Formula1in3::new(n, clauses)
}

/// Every multicolored vertex choice of `g`, in lexicographic order.
pub fn all_multicolored(g: &ColoredGraph) -> impl Iterator<Item = Vec<usize>> + '_ {
    let k = g.num_colors();
    let mut idx = vec![0usize; k];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out: Vec<usize> = (0..k).map(|c| g.class_members(c)[idx[c]]).collect();
        done = true;
        for c in (0..k).rev() {
            idx[c] += 1;
            if idx[c] < g.class_members(c).len() {
                done = false;
                break;
            }
            idx[c] = 0;
        }
        Some(out)
    })
}
