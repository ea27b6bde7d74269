//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every line is printed. The process
//! exits non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use mgr_core::convex::{compute_layout, solve_convex_dp_with, ConvexOptions, ConvexStats};
use mgr_core::formula::Assignment;
use mgr_core::io;
use mgr_core::oracles::{
    extends_partial, solve_1in3_bruteforce, solve_bruteforce, solve_subgraph_bruteforce,
};
use mgr_core::reductions::{
    extract_assignment, gen_biconvex, gen_chordal, gen_grid, msgr_to_mgr, pad_to_size, MsgrOutcome,
    SubgraphTarget,
};
use mgr_core::sample::{
    random_convex, random_formula, random_instance, ConvexParams, InstanceParams,
};
use mgr_core::treewidth::{
    make_nice, min_fill_decomposition, solve_treewidth_dp_with, TreewidthOptions,
};
use mgr_core::twosat::{reduce_to_2sat, solve_size2, Literal};
use mgr_core::{
    build_cluster_graph, instance_stats, ColoredGraph, Error, Formula1in3, Realization,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Pinned limits.
const TWO_SAT_EXAMPLE_TIME: Duration = Duration::from_secs(1);
const GRID_EXAMPLE_TIME: Duration = Duration::from_secs(10);
const IFF_TIME: Duration = Duration::from_secs(300);
const AGREEMENT_TIME: Duration = Duration::from_secs(600);
const SEMANTICS_TIME: Duration = Duration::from_secs(300);
const TRANSFORM_TIME: Duration = Duration::from_secs(300);
const IFF_FORMULAS: usize = 200;
const AGREEMENT_RANDOM: usize = 500;
const TRANSFORM_INSTANCES: usize = 200;
const SEMANTICS_MAX_CLASSES: usize = 6;
/// Max vertex degree of grid instances, frozen from the first verified build
/// (largest value measured over the tested sizes).
const GRID_MAX_DEGREE: usize = 10;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn lit(s: &str) -> Literal {
    match s.strip_prefix('-') {
        Some(r) => Literal::neg(r.parse::<usize>().unwrap() - 1),
        None => Literal::pos(s.parse::<usize>().unwrap() - 1),
    }
}

fn clause_set(clauses: &[&[&str]]) -> BTreeSet<Vec<Literal>> {
    clauses
        .iter()
        .map(|c| {
            let mut v: Vec<Literal> = c.iter().map(|s| lit(s)).collect();
            v.sort();
            v
        })
        .collect()
}

fn show(set: &BTreeSet<Vec<Literal>>) -> String {
    set.iter()
        .map(|c| {
            c.iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join("∨")
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn two_sat_example() -> Outcome {
    let start = Instant::now();
    // Classes x1..x5, sizes 1, 2, 2, 2, 1; the lower id of a pair is the
    // positive literal.
    let g = ColoredGraph::new(
        8,
        vec![0, 1, 1, 2, 2, 3, 3, 4],
        vec![
            [0, 1],
            [1, 5],
            [5, 7],
            [1, 3],
            [3, 5],
            [2, 4],
            [3, 6],
            [4, 5],
        ],
    )
    .unwrap();
    let r = solve_size2(&g).unwrap();
    let (f, map) = reduce_to_2sat(&g).unwrap();
    let mut got: BTreeSet<Vec<Literal>> = f.unit_clauses.iter().map(|&l| vec![l]).collect();
    for &(a, b) in &f.binary_clauses {
        let mut v = vec![a, b];
        v.sort();
        got.insert(v);
    }
    let printed = clause_set(&[
        &["1"],
        &["5"],
        &["-1", "2"],
        &["-2", "3"],
        &["2", "-3"],
        &["2", "4"],
        &["2", "-4"],
        &["-3", "4"],
        &["-5", "1"],
    ]);
    let all_ones = r
        .as_ref()
        .map(|r| map.encode(r).values.iter().all(|&b| b))
        .unwrap_or(false);
    let elapsed = start.elapsed();
    let formula_match = got == printed;
    let mut detail = format!(
        "yes={} all_ones={all_ones} formula_match={formula_match} {:?}",
        r.is_some(),
        elapsed
    );
    if !formula_match {
        let only_got: BTreeSet<_> = got.difference(&printed).cloned().collect();
        let only_printed: BTreeSet<_> = printed.difference(&got).cloned().collect();
        detail += &format!(
            "; reduction emits [{}] absent from the reference formula, which lists [{}] not emitted",
            show(&only_got),
            show(&only_printed)
        );
    }
    outcome(
        r.is_some() && all_ones && formula_match && elapsed < TWO_SAT_EXAMPLE_TIME,
        detail,
    )
}

fn grid_example() -> Outcome {
    let start = Instant::now();
    let f = Formula1in3::new(4, vec![[1, 2, 3], [2, 3, 4]]).unwrap();
    let gi = gen_grid(&f).unwrap();
    let g = &gi.graph;
    let coords = gi.meta.grid_coords.as_ref().unwrap();
    let rows = coords.values().map(|c| c[0]).max().unwrap() + 1;
    let cols = coords.values().map(|c| c[1]).max().unwrap() + 1;
    let q = build_cluster_graph(g);
    let grid_ok = grid_isomorphic(&q, coords, rows, cols);
    let r = solve_bruteforce(g).unwrap();
    let decoded = r.as_ref().map(|r| extract_assignment(&gi, r).unwrap());
    let witness = gi
        .encode_assignment(&Assignment::from_bits(&[0, 1, 0, 0]))
        .unwrap();
    let witness_ok = mgr_core::verify_realization(g, &q, &witness).unwrap();
    let valid = decoded.as_ref().is_some_and(|a| a.satisfies_1in3(&f));
    let elapsed = start.elapsed();
    let pass = g.num_colors() == 30
        && rows * cols == 30
        && rows.max(cols) == 6
        && grid_ok
        && g.num_vertices() == 72
        && g.cluster_size() == 6
        && valid
        && witness_ok
        && elapsed < GRID_EXAMPLE_TIME;
    outcome(
        pass,
        format!(
            "classes={} grid={}x{} vertices={} s={} decoded={:?} witness_0100_verifies={witness_ok} {:?}",
            g.num_colors(),
            cols,
            rows,
            g.num_vertices(),
            g.cluster_size(),
            decoded.map(|a| a.bits()),
            elapsed
        ),
    )
}

fn grid_isomorphic(
    q: &mgr_core::ClusterGraph,
    coords: &BTreeMap<usize, [usize; 2]>,
    rows: usize,
    cols: usize,
) -> bool {
    let cells: BTreeSet<[usize; 2]> = coords.values().copied().collect();
    if cells.len() != q.num_classes() || cells.len() != rows * cols {
        return false;
    }
    (0..q.num_classes()).all(|a| {
        (a + 1..q.num_classes()).all(|b| {
            let [r1, c1] = coords[&a];
            let [r2, c2] = coords[&b];
            q.has_edge(a, b) == (r1.abs_diff(r2) + c1.abs_diff(c2) == 1)
        })
    })
}

fn reduction_iff() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    // Uniform draws are almost always satisfiable at this size, so draw until
    // both verdicts are equally represented.
    let mut formulas = Vec::new();
    let mut counts = [0usize; 2];
    while formulas.len() < IFF_FORMULAS {
        let n = rng.random_range(3..=6);
        let m = rng.random_range(0..=4);
        let f = random_formula(&mut rng, n, m, false).unwrap();
        let sat = solve_1in3_bruteforce(&f).unwrap().is_some();
        if counts[sat as usize] < IFF_FORMULAS / 2 {
            counts[sat as usize] += 1;
            formulas.push((f, sat));
        }
    }
    let mut mismatches = Vec::new();
    for (i, (f, sat)) in formulas.iter().enumerate() {
        for (name, gen) in [
            ("chordal", gen_chordal as fn(&Formula1in3) -> _),
            ("biconvex", gen_biconvex),
            ("grid", gen_grid),
        ] {
            let gi = gen(f).unwrap();
            let yes = solve_bruteforce(&gi.graph).unwrap().is_some();
            if yes != *sat {
                mismatches.push(format!("{name}#{i}"));
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches.is_empty() && elapsed < IFF_TIME,
        format!(
            "{IFF_FORMULAS} formulas x 3 generators ({} satisfiable, {} not), mismatches={mismatches:?} {elapsed:?}",
            counts[1], counts[0]
        ),
    )
}

struct CorpusEntry {
    graph: ColoredGraph,
    x_order: Option<Vec<usize>>,
}

fn corpus() -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut out = Vec::new();
    for _ in 0..AGREEMENT_RANDOM {
        out.push(CorpusEntry {
            graph: random_instance(&mut rng, &InstanceParams::default()),
            x_order: None,
        });
    }
    let size2 = InstanceParams {
        max_class_size: 2,
        ..Default::default()
    };
    for _ in 0..150 {
        out.push(CorpusEntry {
            graph: random_instance(&mut rng, &size2),
            x_order: None,
        });
    }
    for _ in 0..150 {
        let (graph, x) = random_convex(&mut rng, &ConvexParams::default());
        out.push(CorpusEntry {
            graph,
            x_order: Some(x),
        });
    }
    for _ in 0..40 {
        let n = rng.random_range(3..=5);
        let m = rng.random_range(0..=2);
        let f = random_formula(&mut rng, n, m, false).unwrap();
        out.push(CorpusEntry {
            graph: gen_chordal(&f).unwrap().graph,
            x_order: None,
        });
        let b = gen_biconvex(&f).unwrap();
        out.push(CorpusEntry {
            graph: b.graph,
            x_order: b.meta.x_order,
        });
        out.push(CorpusEntry {
            graph: gen_grid(&f).unwrap().graph,
            x_order: None,
        });
    }
    out
}

/// Solve statistics gathered for the bound checks.
#[derive(Default)]
struct Bounds {
    convex_solves: usize,
    convex_violations: usize,
    tw_solves: usize,
    tw_violations_sw: usize,
    tw_violations_sw1: usize,
    worst_ratio: f64,
}

fn convex_within(stats: &ConvexStats, ell: usize, d: usize) -> bool {
    stats
        .table_sizes
        .iter()
        .all(|&size| size as u128 <= (ell as u128).pow(d as u32))
}

fn verify_with_cli(dir: &Path, g: &ColoredGraph, r: &Realization, tag: usize) -> bool {
    let inst = dir.join(format!("i{tag}.json"));
    let cert = dir.join(format!("c{tag}.json"));
    fs::write(&inst, io::instance_json(g, None, None)).unwrap();
    fs::write(&cert, io::realization_json(r)).unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = mgr_cli::run_from(
        [
            "mgr",
            "verify",
            inst.to_str().unwrap(),
            cert.to_str().unwrap(),
        ],
        &mut out,
        &mut err,
    );
    code == mgr_cli::EXIT_YES
}

fn agreement_and_bounds(corpus: &[CorpusEntry]) -> (Outcome, Outcome) {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut mismatches = Vec::new();
    let mut cert_failures = 0;
    let mut certificates = 0;
    let mut b = Bounds::default();
    let mut runs = BTreeMap::<&str, usize>::new();
    for (i, e) in corpus.iter().enumerate() {
        let g = &e.graph;
        let q = build_cluster_graph(g);
        let expected = solve_bruteforce(g).unwrap().is_some();
        let mut answers: Vec<(&str, Option<Realization>)> = Vec::new();

        let t = min_fill_decomposition(&q);
        let nt = make_nice(&t).unwrap();
        let tw = solve_treewidth_dp_with(g, &nt, &TreewidthOptions::default()).unwrap();
        let s = g.cluster_size() as u128;
        let w = t.width() as u32;
        let max = tw.stats.max_table_size() as u128;
        b.tw_solves += 1;
        if max > s.pow(w) {
            b.tw_violations_sw += 1;
            b.worst_ratio = b.worst_ratio.max(max as f64 / s.pow(w) as f64);
        }
        if max > s.pow(w + 1) {
            b.tw_violations_sw1 += 1;
        }
        answers.push(("treewidth", tw.realization));

        if g.cluster_size() <= 2 {
            answers.push(("twosat", solve_size2(g).unwrap()));
        }
        if let Some(x) = &e.x_order {
            let layout = compute_layout(&q, x).unwrap();
            let out = solve_convex_dp_with(g, &layout, &ConvexOptions::default()).unwrap();
            let ell = x
                .iter()
                .map(|&c| g.class_members(c).len())
                .max()
                .unwrap_or(1);
            b.convex_solves += 1;
            if !convex_within(&out.stats, ell, layout.spread) {
                b.convex_violations += 1;
            }
            answers.push(("convex", out.realization));
        }
        for (name, r) in answers {
            *runs.entry(name).or_default() += 1;
            if r.is_some() != expected {
                mismatches.push(format!("{name}#{i}"));
            }
            if let Some(r) = r {
                certificates += 1;
                if !verify_with_cli(dir.path(), g, &r, i) {
                    cert_failures += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let agreement = outcome(
        mismatches.is_empty() && cert_failures == 0 && elapsed < AGREEMENT_TIME,
        format!(
            "{} instances, solver runs {runs:?}, mismatches={mismatches:?}, certificates={certificates} rejected={cert_failures} {elapsed:?}",
            corpus.len()
        ),
    );
    let bounds = outcome(
        b.convex_violations == 0 && b.tw_violations_sw == 0,
        format!(
            "convex: {}/{} solves within l^d; treewidth: {}/{} solves exceed s^w (worst ratio {:.1}), {} exceed s^(w+1)",
            b.convex_solves - b.convex_violations,
            b.convex_solves,
            b.tw_violations_sw,
            b.tw_solves,
            b.worst_ratio,
            b.tw_violations_sw1
        ),
    );
    (agreement, bounds)
}

fn bag_semantics(corpus: &[CorpusEntry]) -> Outcome {
    let start = Instant::now();
    let mut instances = 0;
    let mut entries = 0u64;
    let mut mismatches = 0u64;
    for e in corpus
        .iter()
        .filter(|e| e.graph.num_colors() <= SEMANTICS_MAX_CLASSES)
    {
        let g = &e.graph;
        let q = build_cluster_graph(g);
        let nt = make_nice(&min_fill_decomposition(&q)).unwrap();
        let out = solve_treewidth_dp_with(g, &nt, &TreewidthOptions::default()).unwrap();
        instances += 1;
        for (id, t) in out.tables.iter().enumerate() {
            let sub = nt.subtree_classes(id);
            for idx in 0..t.len() {
                entries += 1;
                if t.entries[idx] != extends_partial(g, &q, &sub, &t.selection(&q, idx)) {
                    mismatches += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches == 0 && instances > 0 && elapsed < SEMANTICS_TIME,
        format!("{instances} instances, {entries} entries, mismatches={mismatches} {elapsed:?}"),
    )
}

fn transforms() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut pad_checked = 0;
    let mut pad_rejected = 0;
    let mut pad_mismatch = 0;
    while pad_checked < TRANSFORM_INSTANCES {
        let g = random_instance(&mut rng, &InstanceParams::default());
        let s = g.cluster_size() + rng.random_range(0..=2);
        match pad_to_size(&g, s) {
            Ok(p) => {
                pad_checked += 1;
                let same_quotient =
                    build_cluster_graph(&p).edges() == build_cluster_graph(&g).edges();
                let before = solve_bruteforce(&g).unwrap().is_some();
                let after = solve_bruteforce(&p).unwrap().is_some();
                if before != after || !same_quotient {
                    pad_mismatch += 1;
                }
            }
            Err(Error::PaddingIsolatedClass(_)) => pad_rejected += 1,
            Err(e) => panic!("{e}"),
        }
    }

    let small = InstanceParams {
        max_classes: 7,
        ..Default::default()
    };
    let mut msgr_mismatch = 0;
    let mut blocked = 0;
    for _ in 0..TRANSFORM_INSTANCES {
        let g = random_instance(&mut rng, &small);
        let q = build_cluster_graph(&g);
        let target: Vec<(usize, usize)> = q
            .edges()
            .iter()
            .copied()
            .filter(|_| rng.random_bool(0.6))
            .collect();
        let direct = solve_subgraph_bruteforce(&g, &target).is_some();
        let t = SubgraphTarget {
            instance: g,
            target_edges: target,
        };
        let via = match msgr_to_mgr(&t).unwrap() {
            MsgrOutcome::Blocked { .. } => {
                blocked += 1;
                false
            }
            MsgrOutcome::Transformed(h) => solve_bruteforce(&h).unwrap().is_some(),
        };
        if via != direct {
            msgr_mismatch += 1;
        }
    }

    // Dropping an edge with complete cross links is always blocked and NO.
    let mut forced_blocked_wrong = 0;
    for a in 1..=3 {
        for bsize in 1..=3 {
            let colors: Vec<usize> = (0..a).map(|_| 0).chain((0..bsize).map(|_| 1)).collect();
            let edges = (0..a)
                .flat_map(|u| (a..a + bsize).map(move |v| [u, v]))
                .collect();
            let g = ColoredGraph::new(a + bsize, colors, edges).unwrap();
            let direct = solve_subgraph_bruteforce(&g, &[]).is_some();
            let t = SubgraphTarget {
                instance: g,
                target_edges: vec![],
            };
            let is_blocked = matches!(msgr_to_mgr(&t).unwrap(), MsgrOutcome::Blocked { .. });
            if !is_blocked || direct {
                forced_blocked_wrong += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        pad_mismatch == 0 && msgr_mismatch == 0 && forced_blocked_wrong == 0 && elapsed < TRANSFORM_TIME,
        format!(
            "pad: {pad_checked} checked ({pad_rejected} rejected as isolated), mismatches={pad_mismatch}; \
             msgr: {TRANSFORM_INSTANCES} checked ({blocked} blocked), mismatches={msgr_mismatch}; \
             complete-link cases wrong={forced_blocked_wrong} {elapsed:?}"
        ),
    )
}

fn grid_family() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut not_grid = Vec::new();
    let mut degrees: BTreeMap<(usize, usize), BTreeSet<usize>> = BTreeMap::new();
    for n in 3..=6 {
        for m in 1..=3 {
            for _ in 0..5 {
                let f = random_formula(&mut rng, n, m, false).unwrap();
                let gi = gen_grid(&f).unwrap();
                let q = build_cluster_graph(&gi.graph);
                if !grid_isomorphic(&q, gi.meta.grid_coords.as_ref().unwrap(), 2 * m + 1, n + 2) {
                    not_grid.push((n, m));
                }
                degrees
                    .entry((n, m))
                    .or_default()
                    .insert(instance_stats(&gi.graph).max_degree);
            }
        }
    }
    let off: Vec<String> = degrees
        .iter()
        .filter(|(_, d)| d.iter().any(|&x| x != GRID_MAX_DEGREE))
        .map(|((n, m), d)| format!("({n},{m}):{d:?}"))
        .collect();
    let max_seen = degrees.values().flatten().max().copied().unwrap_or(0);
    outcome(
        not_grid.is_empty() && off.is_empty(),
        format!(
            "grid-isomorphic failures={not_grid:?}; golden max degree {GRID_MAX_DEGREE}, largest seen {max_seen}; sizes off golden: {}",
            if off.is_empty() { "none".to_string() } else { off.join(" ") }
        ),
    )
}

fn report(name: &str, run: impl FnOnce() -> Outcome + std::panic::UnwindSafe) -> bool {
    let o = std::panic::catch_unwind(run).unwrap_or_else(|_| outcome(false, "panicked"));
    println!(
        "{} criterion {name}: {}",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail
    );
    o.pass
}

fn main() {
    let corpus = corpus();
    let mut passed = Vec::new();
    passed.push(report("1 two-sat worked example", two_sat_example));
    passed.push(report("2 grid worked example", grid_example));
    passed.push(report("3 reduction iff", reduction_iff));
    let (agreement, bounds) = agreement_and_bounds(&corpus);
    passed.push(report("4 solver agreement", || agreement));
    passed.push(report("5 table bounds", || bounds));
    passed.push(report("6 bag semantics", || bag_semantics(&corpus)));
    passed.push(report("7 transform preservation", transforms));
    passed.push(report("8 grid family structure", grid_family));
    let failed = passed.iter().filter(|&&p| !p).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        passed.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
