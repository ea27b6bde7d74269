use std::collections::BTreeSet;

use mgr_core::oracles::{solve_1in3_bruteforce, solve_bruteforce};
use mgr_core::reductions::{gen_biconvex, gen_chordal, gen_grid, pad_to_size};
use mgr_core::sample::random_formula;
use mgr_core::treewidth::{min_fill_decomposition, validate_decomposition};
use mgr_core::{build_cluster_graph, ClusterGraph, Formula1in3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Chordality by repeatedly removing a simplicial vertex.
fn is_chordal(q: &ClusterGraph) -> bool {
    let k = q.num_classes();
    let mut alive: BTreeSet<usize> = (0..k).collect();
    while !alive.is_empty() {
        let simplicial = alive.iter().copied().find(|&v| {
            let nbrs: Vec<usize> = q
                .neighbors(v)
                .iter()
                .copied()
                .filter(|w| alive.contains(w))
                .collect();
            nbrs.iter()
                .enumerate()
                .all(|(i, &a)| nbrs[i + 1..].iter().all(|&b| q.has_edge(a, b)))
        });
        match simplicial {
            Some(v) => {
                alive.remove(&v);
            }
            None => return false,
        }
    }
    true
}

/// Exact treewidth by the subset recurrence over elimination prefixes.
fn exact_treewidth(q: &ClusterGraph) -> usize {
    let k = q.num_classes();
    assert!(k <= 16);
    // Vertices outside S ∪ {v} reachable from v through S.
    let q_size = |s: u32, v: usize| -> usize {
        let mut seen = 1u32 << v;
        let mut stack = vec![v];
        let mut count = 0;
        while let Some(x) = stack.pop() {
            for &w in q.neighbors(x) {
                if seen & (1 << w) != 0 {
                    continue;
                }
                seen |= 1 << w;
                if s & (1 << w) != 0 {
                    stack.push(w);
                } else {
                    count += 1;
                }
            }
        }
        count
    };
    let full = (1u32 << k) - 1;
    let mut tw = vec![usize::MAX; 1 << k];
    tw[0] = 0;
    for s in 1..=full {
        for v in 0..k {
            if s & (1 << v) == 0 {
                continue;
            }
            let rest = s & !(1 << v);
            let cand = tw[rest as usize].max(q_size(rest, v));
            tw[s as usize] = tw[s as usize].min(cand);
        }
    }
    tw[full as usize]
}

fn grid_quotient(rows: usize, cols: usize) -> ClusterGraph {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let id = r * cols + c;
            if c + 1 < cols {
                edges.push((id, id + 1));
            }
            if r + 1 < rows {
                edges.push((id, id + cols));
            }
        }
    }
    ClusterGraph::from_parts((0..rows * cols).map(|c| vec![c]).collect(), &edges)
}

#[test]
fn exact_treewidth_of_small_grids() {
    assert_eq!(exact_treewidth(&grid_quotient(1, 5)), 1);
    assert_eq!(exact_treewidth(&grid_quotient(2, 4)), 2);
    assert_eq!(exact_treewidth(&grid_quotient(3, 3)), 3);
    let q = grid_quotient(3, 3);
    let t = min_fill_decomposition(&q);
    assert!(validate_decomposition(&q, &t).is_valid());
    assert!(t.width() >= 3);
}

#[test]
fn min_fill_never_beats_exact_width() {
    let mut rng = ChaCha8Rng::seed_from_u64(201);
    for _ in 0..150 {
        let k = rng.random_range(1..=9);
        let mut edges = Vec::new();
        for a in 0..k {
            for b in a + 1..k {
                if rng.random_bool(0.4) {
                    edges.push((a, b));
                }
            }
        }
        let q = ClusterGraph::from_parts((0..k).map(|c| vec![c]).collect(), &edges);
        let t = min_fill_decomposition(&q);
        assert!(validate_decomposition(&q, &t).is_valid());
        assert!(t.width() >= exact_treewidth(&q));
    }
}

#[test]
fn generators_land_in_their_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut chordless = 0;
    for _ in 0..30 {
        let n = rng.random_range(3..=6);
        let m = rng.random_range(1..=4);
        let f = random_formula(&mut rng, n, m, false).unwrap();

        // Two clause classes whose spans share variables a < b - 1 close
        // the chordless cycle Y, X_a, Y', X_b; otherwise the quotient is chordal.
        let q = build_cluster_graph(&gen_chordal(&f).unwrap().graph);
        let spans: Vec<(usize, usize)> = f.clauses().iter().map(|c| (c[0], c[2])).collect();
        let wide_overlap = spans.iter().enumerate().any(|(i, &(a, b))| {
            spans[i + 1..]
                .iter()
                .any(|&(c, d)| b.min(d) + 1 > a.max(c) + 2)
        });
        assert_eq!(is_chordal(&q), !wide_overlap, "{f:?}");
        if wide_overlap {
            chordless += 1;
        }
        assert_eq!(
            q.edges().len(),
            n - 1 + f.clauses().iter().map(|c| c[2] - c[0] + 1).sum::<usize>()
        );

        let q = build_cluster_graph(&gen_biconvex(&f).unwrap().graph);
        assert_eq!(q.edges().len(), n * m);
        assert!((0..n).all(|x| (n..n + m).all(|y| q.has_edge(x, y))));

        let gi = gen_grid(&f).unwrap();
        let q = build_cluster_graph(&gi.graph);
        assert_eq!(q.num_classes(), (n + 2) * (2 * m + 1));
        assert_eq!(q.edges().len(), (n + 2) * 2 * m + (2 * m + 1) * (n + 1));
    }
    assert!(chordless > 0);
}

#[test]
fn single_clause_quotients_are_chordal() {
    for n in 3..=7 {
        for a in 1..=n {
            for b in a + 1..=n {
                for c in b + 1..=n {
                    let f = Formula1in3::new(n, vec![[a, b, c]]).unwrap();
                    assert!(is_chordal(&build_cluster_graph(
                        &gen_chordal(&f).unwrap().graph
                    )));
                }
            }
        }
    }
}

#[test]
fn reductions_are_sound_and_complete() {
    let mut rng = ChaCha8Rng::seed_from_u64(203);
    let mut seen = [0usize; 2];
    for _ in 0..80 {
        let n = rng.random_range(3..=5);
        let m = rng.random_range(0..=4);
        let f = random_formula(&mut rng, n, m, false).unwrap();
        let sat = solve_1in3_bruteforce(&f).unwrap().is_some();
        seen[sat as usize] += 1;
        assert_eq!(
            solve_bruteforce(&gen_chordal(&f).unwrap().graph)
                .unwrap()
                .is_some(),
            sat
        );
        assert_eq!(
            solve_bruteforce(&gen_biconvex(&f).unwrap().graph)
                .unwrap()
                .is_some(),
            sat
        );
        assert_eq!(
            solve_bruteforce(&gen_grid(&f).unwrap().graph)
                .unwrap()
                .is_some(),
            sat
        );
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}

#[test]
fn unsatisfiable_formula_is_rejected_everywhere() {
    let f = Formula1in3::new(4, vec![[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]]).unwrap();
    assert!(solve_1in3_bruteforce(&f).unwrap().is_none());
    let g = gen_chordal(&f).unwrap().graph;
    assert!(solve_bruteforce(&g).unwrap().is_none());
    let padded = pad_to_size(&g, 5).unwrap();
    assert!(solve_bruteforce(&padded).unwrap().is_none());
    assert!(solve_bruteforce(&gen_biconvex(&f).unwrap().graph)
        .unwrap()
        .is_none());
}

#[test]
fn padded_chordal_keeps_verdict() {
    let f = Formula1in3::new(4, vec![[1, 2, 3], [2, 3, 4]]).unwrap();
    let g = gen_chordal(&f).unwrap().graph;
    let padded = pad_to_size(&g, 5).unwrap();
    assert_eq!(padded.cluster_size(), 5);
    assert!(solve_bruteforce(&padded).unwrap().is_some());
}
