//! Command-line front end for the `mgr` binary.
//!
//! Every command returns an exit code: 0 for YES / success, 1 for NO, 2 for
//! malformed input or any other error. [`run`] writes to caller-supplied
//! streams so the commands can be driven in-process.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use mgr_core::convex::{compute_layout, solve_convex_dp_with, ConvexOptions};
use mgr_core::graph::first_unrealized_edge;
use mgr_core::io::{self, LoadOptions, LoadedInstance};
use mgr_core::oracles::{solve_bruteforce_with, BruteForceOptions, DEFAULT_MAX_NODES};
use mgr_core::reductions::{
    extract_assignment, gen_biconvex, gen_chordal, gen_grid, msgr_to_mgr, pad_to_size,
    GeneratedInstance, MsgrOutcome, SubgraphTarget,
};
use mgr_core::sample::random_formula;
use mgr_core::treewidth::{
    make_nice, min_fill_decomposition, solve_treewidth_dp_with, TreeDecomposition,
    TreewidthOptions, DEFAULT_MAX_TABLE_CELLS,
};
use mgr_core::twosat::{reduce_to_2sat, solve_2sat};
use mgr_core::{
    build_cluster_graph, verify_realization, ColoredGraph, Error, Formula1in3, Realization,
};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "mgr",
    version,
    about = "Multicolored graph realization toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an instance from an exactly-1-in-3 SAT formula.
    Generate(GenerateArgs),
    /// Decide realizability and print a JSON report.
    Solve(SolveArgs),
    /// Check a realization file against an instance.
    Verify(VerifyArgs),
    /// Rewrite an instance.
    #[command(subcommand)]
    Transform(TransformCommand),
    /// Print the min-fill tree decomposition of the cluster graph.
    Decompose(DecomposeArgs),
    /// Render an instance as DOT.
    Export(ExportArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Reduction {
    Chordal,
    Biconvex,
    Grid,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    pub reduction: Reduction,
    /// Formula file (`p 1in3 n m` header, one clause per line).
    #[arg(long, conflicts_with = "random")]
    pub formula: Option<PathBuf>,
    /// Random formula with N variables and M distinct clauses.
    #[arg(long, num_args = 2, value_names = ["N", "M"], required_unless_present = "formula")]
    pub random: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Auto,
    Brute,
    Twosat,
    Convex,
    Treewidth,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_enum, default_value = "auto")]
    pub algo: Algo,
    #[arg(required = true)]
    pub instances: Vec<PathBuf>,
    /// Tree decomposition JSON for the treewidth solver.
    #[arg(long)]
    pub decomposition: Option<PathBuf>,
    /// Comma-separated x-classes in convex order.
    #[arg(long, value_delimiter = ',')]
    pub x_order: Option<Vec<usize>>,
    #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
    pub max_nodes: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_TABLE_CELLS)]
    pub max_table_cells: u64,
    /// Exit code only.
    #[arg(long, short)]
    pub quiet: bool,
    /// Reject unknown keys in instance files.
    #[arg(long)]
    pub strict: bool,
    /// Accept arbitrary color labels and renumber them.
    #[arg(long)]
    pub reindex: bool,
    /// Worker threads across instances.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Disable parallelism inside a single solve.
    #[arg(long)]
    pub sequential: bool,
    /// Write the realization of a YES answer here.
    #[arg(long)]
    pub certificate: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub instance: PathBuf,
    pub realization: PathBuf,
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Subcommand)]
pub enum TransformCommand {
    /// Top every class up to S vertices.
    Pad {
        s: usize,
        instance: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Turn a subgraph-realization target into a plain instance.
    Msgr {
        /// JSON file `{"target_edges": [[a, b], ...]}`.
        target: PathBuf,
        instance: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    pub instance: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ExportFormat {
    Dot,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value = "dot")]
    pub format: ExportFormat,
}

#[derive(Debug, Default, Serialize)]
pub struct SolveStats {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes_expanded: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tables_touched: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_table_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twosat_clauses: Option<usize>,
    pub wall_time_ms: f64,
}

#[derive(Debug, Serialize)]
pub struct SolveReport {
    pub instance: String,
    pub verdict: &'static str,
    pub algorithm: Algo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fallback: Option<String>,
    pub realization: Option<BTreeMap<usize, usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assignment: Option<Vec<u8>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_labels: Option<Vec<usize>>,
    pub stats: SolveStats,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TargetFile {
    target_edges: Vec<[usize; 2]>,
}

/// Parses `args` and runs the command.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_ERROR
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_YES
            }
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(&a, out),
        Command::Solve(a) => cmd_solve(&a, out, err),
        Command::Verify(a) => cmd_verify(&a, out, err),
        Command::Transform(t) => cmd_transform(&t, out, err),
        Command::Decompose(a) => cmd_decompose(&a, out),
        Command::Export(a) => cmd_export(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(text: &str, output: Option<&Path>, out: &mut dyn Write) -> anyhow::Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn with_newline(mut s: String) -> String {
    s.push('\n');
    s
}

fn load(path: &Path, strict: bool, reindex: bool) -> anyhow::Result<LoadedInstance> {
    let text = read(path)?;
    io::parse_instance(&text, LoadOptions { strict, reindex })
        .with_context(|| format!("{}", path.display()))
}

pub fn cmd_generate(a: &GenerateArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let formula = match (&a.formula, &a.random) {
        (Some(path), _) => {
            Formula1in3::parse(&read(path)?).with_context(|| format!("{}", path.display()))?
        }
        (None, Some(nm)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            random_formula(&mut rng, nm[0], nm[1], true)?
        }
        (None, None) => bail!("either --formula or --random is required"),
    };
    let gi = match a.reduction {
        Reduction::Chordal => gen_chordal(&formula)?,
        Reduction::Biconvex => gen_biconvex(&formula)?,
        Reduction::Grid => gen_grid(&formula)?,
    };
    let text = io::instance_json(&gi.graph, Some(&gi.meta), None);
    emit(&with_newline(text), a.output.as_deref(), out)?;
    Ok(EXIT_YES)
}

struct Solved {
    realization: Option<Realization>,
    algorithm: Algo,
    fallback: Option<String>,
    stats: SolveStats,
}

fn solve_one(
    a: &SolveArgs,
    inst: &LoadedInstance,
    decomposition: Option<&TreeDecomposition>,
) -> anyhow::Result<Solved> {
    let g = &inst.graph;
    let x_order = a.x_order.as_deref().or_else(|| inst.x_order());
    let algo = match a.algo {
        Algo::Auto if g.cluster_size() <= 2 => Algo::Twosat,
        Algo::Auto if x_order.is_some() => Algo::Convex,
        Algo::Auto => Algo::Treewidth,
        other => other,
    };
    let parallel = !a.sequential;
    let brute = |g: &ColoredGraph| -> anyhow::Result<(Option<Realization>, SolveStats)> {
        let opts = BruteForceOptions {
            max_nodes: a.max_nodes,
            parallel,
            ..Default::default()
        };
        let o = solve_bruteforce_with(g, &opts)?;
        let stats = SolveStats {
            nodes_expanded: Some(o.nodes_expanded),
            ..Default::default()
        };
        Ok((o.realization, stats))
    };
    let (realization, stats, algorithm, fallback) = match algo {
        Algo::Brute => {
            let (r, s) = brute(g)?;
            (r, s, Algo::Brute, None)
        }
        Algo::Twosat => {
            if g.cluster_size() > 2 {
                bail!(
                    "twosat needs cluster size at most 2, instance has {}",
                    g.cluster_size()
                );
            }
            let (f, map) = reduce_to_2sat(g)?;
            let r = solve_2sat(&f).map(|asg| map.decode(g, &asg));
            let stats = SolveStats {
                twosat_clauses: Some(f.num_clauses()),
                ..Default::default()
            };
            (r, stats, Algo::Twosat, None)
        }
        Algo::Convex => {
            let order = x_order.ok_or_else(|| {
                anyhow!("convex solver needs an x-order (--x-order or x_order in the file)")
            })?;
            let layout = compute_layout(&build_cluster_graph(g), order)?;
            let opts = ConvexOptions {
                max_table_cells: a.max_table_cells,
                ..Default::default()
            };
            let o = solve_convex_dp_with(g, &layout, &opts)?;
            let stats = SolveStats {
                tables_touched: Some(o.stats.table_sizes.len()),
                max_table_size: Some(o.stats.max_table_size()),
                ..Default::default()
            };
            (o.realization, stats, Algo::Convex, None)
        }
        Algo::Treewidth => {
            let t = match decomposition {
                Some(t) => t.clone(),
                None => min_fill_decomposition(&build_cluster_graph(g)),
            };
            let opts = TreewidthOptions {
                max_table_cells: a.max_table_cells,
                parallel,
            };
            let attempt = make_nice(&t).and_then(|nt| solve_treewidth_dp_with(g, &nt, &opts));
            match attempt {
                Ok(o) => {
                    let stats = SolveStats {
                        tables_touched: Some(o.tables.len()),
                        max_table_size: Some(o.stats.max_table_size()),
                        ..Default::default()
                    };
                    (o.realization, stats, Algo::Treewidth, None)
                }
                Err(e @ Error::BudgetExceeded { .. })
                    if a.algo == Algo::Auto && decomposition.is_none() =>
                {
                    let (r, s) = brute(g)?;
                    (r, s, Algo::Brute, Some(format!("treewidth: {e}")))
                }
                Err(e) => return Err(e.into()),
            }
        }
        Algo::Auto => unreachable!(),
    };
    if let Some(r) = &realization {
        let q = build_cluster_graph(g);
        if !verify_realization(g, &q, r)? {
            bail!("internal error: {algorithm:?} produced an invalid realization");
        }
    }
    Ok(Solved {
        realization,
        algorithm,
        fallback,
        stats,
    })
}

fn report_for(
    a: &SolveArgs,
    path: &Path,
    decomposition: Option<&TreeDecomposition>,
) -> anyhow::Result<(SolveReport, Option<Realization>)> {
    let inst = load(path, a.strict, a.reindex)?;
    let start = Instant::now();
    let solved = solve_one(a, &inst, decomposition)?;
    let mut stats = solved.stats;
    stats.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let assignment = match (&solved.realization, &inst.meta) {
        (Some(r), Some(meta)) => {
            let gi = GeneratedInstance {
                graph: inst.graph.clone(),
                meta: meta.clone(),
            };
            Some(extract_assignment(&gi, r)?.bits())
        }
        _ => None,
    };
    let report = SolveReport {
        instance: path.display().to_string(),
        verdict: if solved.realization.is_some() {
            "YES"
        } else {
            "NO"
        },
        algorithm: solved.algorithm,
        fallback: solved.fallback,
        realization: solved.realization.as_ref().map(Realization::to_map),
        assignment,
        class_labels: inst.labels,
        stats,
    };
    Ok((report, solved.realization))
}

pub fn cmd_solve(a: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    if a.certificate.is_some() && a.instances.len() != 1 {
        bail!("--certificate needs exactly one instance");
    }
    let decomposition = match &a.decomposition {
        Some(p) => {
            Some(io::parse_decomposition(&read(p)?).with_context(|| format!("{}", p.display()))?)
        }
        None => None,
    };
    if a.instances.len() == 1 {
        let (report, realization) = report_for(a, &a.instances[0], decomposition.as_ref())?;
        if let (Some(path), Some(r)) = (&a.certificate, &realization) {
            emit(&with_newline(io::realization_json(r)), Some(path), out)?;
        }
        if !a.quiet {
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
        }
        return Ok(if realization.is_some() {
            EXIT_YES
        } else {
            EXIT_NO
        });
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs.max(1))
        .build()?;
    let results: Vec<anyhow::Result<SolveReport>> = pool.install(|| {
        mgr_core::par::map(&a.instances, a.jobs > 1, |p| {
            report_for(a, p, decomposition.as_ref()).map(|(r, _)| r)
        })
    });
    let mut code = EXIT_YES;
    let mut reports = Vec::new();
    for (path, res) in a.instances.iter().zip(results) {
        match res {
            Ok(r) => {
                if r.verdict == "NO" && code == EXIT_YES {
                    code = EXIT_NO;
                }
                reports.push(serde_json::to_value(&r)?);
            }
            Err(e) => {
                writeln!(err, "error: {e:#}")?;
                code = EXIT_ERROR;
                reports.push(serde_json::json!({
                    "instance": path.display().to_string(),
                    "error": format!("{e:#}"),
                }));
            }
        }
    }
    if !a.quiet {
        writeln!(out, "{}", serde_json::to_string_pretty(&reports)?)?;
    }
    Ok(code)
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    let inst = load(&a.instance, a.strict, false)?;
    let g = &inst.graph;
    let r = io::parse_realization(&read(&a.realization)?, g.num_colors())?;
    let q = build_cluster_graph(g);
    match first_unrealized_edge(g, &q, &r)? {
        None => {
            writeln!(out, "verified")?;
            Ok(EXIT_YES)
        }
        Some((x, y)) => {
            writeln!(
                err,
                "not a realization: cluster edge ({x},{y}) is not realized (vertices {} and {} are not adjacent)",
                r.vertex(x),
                r.vertex(y)
            )?;
            Ok(EXIT_NO)
        }
    }
}

pub fn cmd_transform(
    t: &TransformCommand,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> anyhow::Result<i32> {
    match t {
        TransformCommand::Pad {
            s,
            instance,
            output,
        } => {
            let inst = load(instance, false, false)?;
            let padded = pad_to_size(&inst.graph, *s)?;
            let text = io::instance_json(&padded, inst.meta.as_ref(), inst.x_order.as_deref());
            emit(&with_newline(text), output.as_deref(), out)?;
            Ok(EXIT_YES)
        }
        TransformCommand::Msgr {
            target,
            instance,
            output,
        } => {
            let inst = load(instance, false, false)?;
            let file: TargetFile = serde_json::from_str(&read(target)?)
                .with_context(|| format!("{}", target.display()))?;
            let t = SubgraphTarget {
                instance: inst.graph.clone(),
                target_edges: file.target_edges.iter().map(|&[a, b]| (a, b)).collect(),
            };
            match msgr_to_mgr(&t)? {
                MsgrOutcome::Blocked { edge: (x, y) } => {
                    writeln!(err, "target edge ({x},{y}) complete — definite NO")?;
                    Ok(EXIT_NO)
                }
                MsgrOutcome::Transformed(g) => {
                    let text = io::instance_json(&g, None, inst.x_order.as_deref());
                    emit(&with_newline(text), output.as_deref(), out)?;
                    Ok(EXIT_YES)
                }
            }
        }
    }
}

pub fn cmd_decompose(a: &DecomposeArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let inst = load(&a.instance, false, false)?;
    let t = min_fill_decomposition(&build_cluster_graph(&inst.graph));
    emit(
        &with_newline(io::decomposition_json(&t)),
        a.output.as_deref(),
        out,
    )?;
    Ok(EXIT_YES)
}

pub fn cmd_export(a: &ExportArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let inst = load(&a.instance, false, false)?;
    match a.format {
        ExportFormat::Dot => {
            out.write_all(io::graph_dot(&inst.graph).as_bytes())?;
            out.write_all(io::quotient_dot(&build_cluster_graph(&inst.graph)).as_bytes())?;
        }
    }
    Ok(EXIT_YES)
}
