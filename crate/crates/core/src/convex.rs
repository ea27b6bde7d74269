//! Window dynamic program for convex bipartite cluster graphs.
//!
//! The x-classes are scanned left to right. The table at position `i` holds
//! one boolean per choice of vertices for the last `min(i + 1, d)` x-classes,
//! where `d` is the spread. An entry is true when the window extends to a
//! realization of everything to its left: all x-classes up to `i` and every
//! y-class whose interval ends at or before `i`. Positions are 0-based.

use crate::error::{Error, Result};
use crate::graph::{build_cluster_graph, ClusterGraph, ColoredGraph, Realization};

/// The x/y split of a convex bipartite cluster graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexLayout {
    /// X-side color ids in convex order.
    pub x_classes: Vec<usize>,
    /// Remaining color ids, ascending.
    pub y_classes: Vec<usize>,
    /// For each entry of `y_classes`, the first and last x-position adjacent
    /// to it; `None` for a y-class with no neighbors.
    pub intervals: Vec<Option<(usize, usize)>>,
    /// Largest cluster-graph degree on the y side.
    pub spread: usize,
}

pub fn compute_layout(q: &ClusterGraph, x_order: &[usize]) -> Result<ConvexLayout> {
    let k = q.num_classes();
    let mut position = vec![None; k];
    for (p, &c) in x_order.iter().enumerate() {
        if c >= k {
            return Err(Error::InvalidOrder(format!("class {c} does not exist")));
        }
        if position[c].replace(p).is_some() {
            return Err(Error::InvalidOrder(format!("class {c} listed twice")));
        }
    }
    for &(a, b) in q.edges() {
        if position[a].is_some() == position[b].is_some() {
            return Err(Error::NonBipartite(a, b));
        }
    }
    let y_classes: Vec<usize> = (0..k).filter(|&c| position[c].is_none()).collect();
    let mut intervals = Vec::with_capacity(y_classes.len());
    let mut spread = 0;
    for &y in &y_classes {
        let ps: Vec<usize> = q
            .neighbors(y)
            .iter()
            .map(|&x| position[x].unwrap())
            .collect();
        let (Some(&lo), Some(&hi)) = (ps.iter().min(), ps.iter().max()) else {
            intervals.push(None);
            continue;
        };
        if hi - lo + 1 != ps.len() {
            return Err(Error::NonContiguous(y));
        }
        spread = spread.max(ps.len());
        intervals.push(Some((lo, hi)));
    }
    Ok(ConvexLayout {
        x_classes: x_order.to_vec(),
        y_classes,
        intervals,
        spread,
    })
}

pub const DEFAULT_MAX_SPREAD: usize = 24;
pub const DEFAULT_MAX_TABLE_CELLS: u64 = 1 << 24;

#[derive(Clone, Copy, Debug)]
pub struct ConvexOptions {
    pub max_spread: usize,
    pub max_table_cells: u64,
}

impl Default for ConvexOptions {
    fn default() -> Self {
        ConvexOptions {
            max_spread: DEFAULT_MAX_SPREAD,
            max_table_cells: DEFAULT_MAX_TABLE_CELLS,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConvexStats {
    /// Table size at each x-position.
    pub table_sizes: Vec<usize>,
    /// Adjacency tests made while checking finishing y-classes.
    pub adjacency_tests: u64,
    /// Predecessor entries inspected.
    pub predecessor_lookups: u64,
}

impl ConvexStats {
    pub fn max_table_size(&self) -> usize {
        self.table_sizes.iter().copied().max().unwrap_or(0)
    }

    pub fn work(&self) -> u64 {
        self.adjacency_tests + self.predecessor_lookups
    }
}

#[derive(Clone, Debug)]
pub struct ConvexOutcome {
    pub realization: Option<Realization>,
    pub stats: ConvexStats,
}

#[derive(Clone, Debug)]
struct Entry {
    /// Member index of the x-class that slid out of the window.
    dropped: usize,
    /// Chosen vertex for each y-class finishing here.
    y_witness: Vec<usize>,
}

pub fn solve_convex_dp(g: &ColoredGraph, layout: &ConvexLayout) -> Result<Option<Realization>> {
    Ok(solve_convex_dp_with(g, layout, &ConvexOptions::default())?.realization)
}

pub fn solve_convex_dp_with(
    g: &ColoredGraph,
    layout: &ConvexLayout,
    opts: &ConvexOptions,
) -> Result<ConvexOutcome> {
    let q = build_cluster_graph(g);
    let expected = compute_layout(&q, &layout.x_classes)?;
    if &expected != layout {
        return Err(Error::LayoutMismatch(
            "intervals or y-classes differ from the instance's cluster graph".into(),
        ));
    }
    if layout.spread > opts.max_spread {
        return Err(Error::BudgetExceeded {
            budget: "max-spread",
            limit: opts.max_spread as u64,
        });
    }

    let k = g.num_colors();
    let mut choice: Vec<usize> = (0..k).map(|c| g.class_members(c)[0]).collect();
    let mut stats = ConvexStats::default();
    let alpha = layout.x_classes.len();
    let d = layout.spread;
    if alpha == 0 || d == 0 {
        // No cluster edges at all: the least vertex of every class works.
        return Ok(ConvexOutcome {
            realization: Some(Realization::new(choice)),
            stats,
        });
    }

    let members: Vec<&[usize]> = layout
        .x_classes
        .iter()
        .map(|&c| g.class_members(c))
        .collect();
    let mut finishing: Vec<Vec<(usize, usize)>> = vec![Vec::new(); alpha];
    for (&y, iv) in layout.y_classes.iter().zip(&layout.intervals) {
        if let Some((a, b)) = *iv {
            finishing[b].push((y, a));
        }
    }

    let window_start = |i: usize| (i + 1).saturating_sub(d);
    let mut tables: Vec<Vec<Option<Entry>>> = Vec::with_capacity(alpha);

    for i in 0..alpha {
        let start = window_start(i);
        let sizes: Vec<usize> = members[start..=i].iter().map(|m| m.len()).collect();
        let cells: u64 = sizes.iter().map(|&s| s as u64).product();
        if cells > opts.max_table_cells {
            return Err(Error::BudgetExceeded {
                budget: "max-table-cells",
                limit: opts.max_table_cells,
            });
        }
        let cells = cells as usize;
        let last = *sizes.last().unwrap();
        let slides = i > 0 && window_start(i - 1) < start;
        // Number of cells spanned by the classes the old and new windows share.
        let shared: usize = cells / last;

        let mut table = Vec::with_capacity(cells);
        let mut digits = vec![0usize; sizes.len()];
        for idx in 0..cells {
            let mut rest = idx;
            for (slot, &s) in digits.iter_mut().zip(&sizes).rev() {
                *slot = rest % s;
                rest /= s;
            }

            let dropped = if i == 0 {
                Some(0)
            } else if !slides {
                stats.predecessor_lookups += 1;
                tables[i - 1][idx / last].as_ref().map(|_| 0)
            } else {
                let prev = &tables[i - 1];
                (0..members[start - 1].len()).find(|&x| {
                    stats.predecessor_lookups += 1;
                    prev[x * shared + idx / last].is_some()
                })
            };
            let Some(dropped) = dropped else {
                table.push(None);
                continue;
            };

            let mut y_witness = Vec::with_capacity(finishing[i].len());
            for &(y, a) in &finishing[i] {
                let found = g.class_members(y).iter().copied().find(|&u| {
                    (a..=i).all(|p| {
                        stats.adjacency_tests += 1;
                        g.has_edge(u, members[p][digits[p - start]])
                    })
                });
                match found {
                    Some(u) => y_witness.push(u),
                    None => break,
                }
            }
            if y_witness.len() < finishing[i].len() {
                table.push(None);
                continue;
            }
            table.push(Some(Entry { dropped, y_witness }));
        }
        stats.table_sizes.push(table.len());
        tables.push(table);
    }

    let Some(mut idx) = tables[alpha - 1].iter().position(Option::is_some) else {
        return Ok(ConvexOutcome {
            realization: None,
            stats,
        });
    };

    for i in (0..alpha).rev() {
        let start = window_start(i);
        let sizes: Vec<usize> = members[start..=i].iter().map(|m| m.len()).collect();
        let cells: usize = sizes.iter().product();
        let last = *sizes.last().unwrap();
        let entry = tables[i][idx].as_ref().expect("trace follows true entries");
        if i == alpha - 1 {
            let mut rest = idx;
            for (p, &s) in (start..i + 1).zip(&sizes).rev() {
                choice[layout.x_classes[p]] = members[p][rest % s];
                rest /= s;
            }
        }
        for (&(y, _), &u) in finishing[i].iter().zip(&entry.y_witness) {
            choice[y] = u;
        }
        if i == 0 {
            break;
        }
        if window_start(i - 1) < start {
            choice[layout.x_classes[start - 1]] = members[start - 1][entry.dropped];
            idx = entry.dropped * (cells / last) + idx / last;
        } else {
            idx /= last;
        }
    }

    let realization = Realization::new(choice);
    debug_assert!(crate::graph::verify_realization(g, &q, &realization).unwrap());
    Ok(ConvexOutcome {
        realization: Some(realization),
        stats,
    })
}
