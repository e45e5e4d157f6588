//! Command-line frontend: instance generation, testing, packing, exact
//! distance, pattern shrinking, the contraction pipeline, detection
//! experiments, and the oracle-sensitivity experiments.
//!
//! Exit codes: 0 accept / success, 1 runtime error, 2 usage error,
//! 3 reject (scriptable).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use hfree::experiment::{
    plot_script, rows_to_csv, run_detection_experiment, run_pipeline_report, ExperimentConfig,
};
use hfree::graph::Graph;
use hfree::instances::{
    gen_instance, pattern_by_name, read_edge_list, write_edge_list, InstanceSpec,
};
use hfree::oracle::trial_rng;
use hfree::stats::rate_lower_4_sigma;
use hfree::subgraph::{exact_deletion_distance, greedy_packing};
use hfree::testers::{
    connectivity_test_distinct, family_test, matching_indistinguishability,
    test_disconnected, Decision, TesterParams,
};

#[derive(Parser)]
#[command(name = "hfree", version, about = "Subgraph-freeness property testers for planar graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a test instance and write it as an edge list.
    Gen(GenArgs),
    /// Run the one-sided tester (exit 0 accept, 3 reject).
    Test(TestArgs),
    /// Print a greedy edge-disjoint packing.
    Pack(PackArgs),
    /// Print the exact deletion distance to pattern-freeness.
    Distance(PatternGraphArgs),
    /// Dump the shrink sequence M_1..M_h of a pattern.
    Shrink(ShrinkArgs),
    /// Run the contraction pipeline and print its report.
    Pipeline(PipelineArgs),
    /// Run a seeded detection experiment grid, emitting CSV.
    Experiment(ExperimentArgs),
    /// Oracle-sensitivity experiments (connectivity / matching).
    Sensitivity(SensitivityArgs),
}

#[derive(Args)]
struct GenArgs {
    /// disjoint-copies | grid | cycle | matching | triangulation | clique-sqrt
    #[arg(long)]
    kind: String,
    /// Pattern name for disjoint-copies (triangle, c4, k4, path3, ...).
    #[arg(long)]
    h: Option<String>,
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    pad: usize,
    #[arg(long, default_value_t = 4)]
    rows: usize,
    #[arg(long, default_value_t = 4)]
    cols: usize,
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Output file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PatternGraphArgs {
    /// Input graph as an edge-list file.
    #[arg(long)]
    graph: PathBuf,
    /// Pattern name or @file for an edge list.
    #[arg(long)]
    h: String,
}

#[derive(Args)]
struct TestArgs {
    #[command(flatten)]
    common: PatternGraphArgs,
    /// Additional family members (pattern names or @files); the run becomes
    /// a family test.
    #[arg(long, value_delimiter = ',')]
    family: Vec<String>,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override the breadth dg.
    #[arg(long)]
    dg: Option<usize>,
    /// Override the depth ld.
    #[arg(long)]
    ld: Option<usize>,
    /// Override the repetition count f.
    #[arg(long)]
    f: Option<usize>,
}

#[derive(Args)]
struct PackArgs {
    #[command(flatten)]
    common: PatternGraphArgs,
    /// Pack colored copies under the best sampled coloring.
    #[arg(long)]
    colored: bool,
    /// Coloring trials when --colored.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ShrinkArgs {
    /// Pattern name or @file.
    #[arg(long)]
    h: String,
    /// Contraction order as comma-separated vertex ids, e.g. 1,2,3.
    #[arg(long, value_delimiter = ',')]
    order: Vec<u8>,
}

#[derive(Args)]
struct PipelineArgs {
    #[command(flatten)]
    common: PatternGraphArgs,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run even when farness cannot be certified.
    #[arg(long)]
    force: bool,
    /// Also write the per-level CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Instance file; mutually exclusive with --kind.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Generated instance kind (as in gen).
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    h: String,
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    pad: usize,
    #[arg(long, default_value_t = 4)]
    rows: usize,
    #[arg(long, default_value_t = 4)]
    cols: usize,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Breadth grid, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    dg: Vec<usize>,
    /// Depth grid.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    ld: Vec<usize>,
    /// Repetition grid.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    f: Vec<usize>,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a generic plotting script referencing the CSV (not executed).
    #[arg(long)]
    emit_plot_script: Option<PathBuf>,
}

#[derive(Args)]
struct SensitivityArgs {
    /// connectivity | matching
    mode: String,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 0.25)]
    eps: f64,
    #[arg(long, default_value_t = 3)]
    q: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn load_pattern(spec: &str) -> Result<Graph> {
    if let Some(path) = spec.strip_prefix('@') {
        let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        Ok(read_edge_list(&text)?)
    } else {
        Ok(pattern_by_name(spec)?)
    }
}

fn load_graph(path: &PathBuf) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(read_edge_list(&text)?)
}

fn instance_spec(
    kind: &str,
    k: usize,
    pad: usize,
    rows: usize,
    cols: usize,
    n: usize,
) -> Result<InstanceSpec> {
    Ok(match kind {
        "disjoint-copies" => InstanceSpec::DisjointCopies { copies: k, pad },
        "grid" => InstanceSpec::Grid { rows, cols },
        "cycle" => InstanceSpec::Cycle { n },
        "matching" => InstanceSpec::Matching { n },
        "triangulation" => InstanceSpec::TriangulationPatch { rows, cols },
        "clique-sqrt" => InstanceSpec::CliqueOnSqrtN { n },
        other => bail!("unknown instance kind: {other}"),
    })
}

fn params_from(
    eps: f64,
    h: &Graph,
    dg: Option<usize>,
    ld: Option<usize>,
    f: Option<usize>,
) -> TesterParams {
    let base = TesterParams::schedule(eps, h);
    TesterParams::new(
        dg.unwrap_or(base.breadth),
        ld.unwrap_or(base.depth),
        f.unwrap_or(base.repetitions),
    )
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen(a) => {
            let pattern = a.h.as_deref().map(load_pattern).transpose()?;
            let spec = instance_spec(&a.kind, a.k, a.pad, a.rows, a.cols, a.n)?;
            let g = gen_instance(&spec, pattern.as_ref())?;
            let text = write_edge_list(&g);
            match a.out {
                Some(path) => fs::write(&path, text)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Test(a) => {
            let g = load_graph(&a.common.graph)?;
            let h = load_pattern(&a.common.h)?;
            let mut rng = trial_rng(a.seed, 0);
            let verdict = if a.family.is_empty() {
                let params = params_from(a.eps, &h, a.dg, a.ld, a.f);
                test_disconnected(&g, &h, a.eps, &params, None, &mut rng)
            } else {
                let mut family = vec![h];
                for name in &a.family {
                    family.push(load_pattern(name)?);
                }
                let params = match (a.dg, a.ld, a.f) {
                    (None, None, None) => None,
                    (dg, ld, f) => {
                        // explicit overrides apply to every member
                        let base =
                            TesterParams::schedule(a.eps / family.len() as f64, &family[0]);
                        Some(TesterParams::new(
                            dg.unwrap_or(base.breadth),
                            ld.unwrap_or(base.depth),
                            f.unwrap_or(base.repetitions),
                        ))
                    }
                };
                family_test(&g, &family, a.eps, params.as_ref(), &mut rng)
            };
            println!(
                "decision={} member={} queries={}",
                match verdict.decision {
                    Decision::Accept => "accept",
                    Decision::Reject => "reject",
                },
                verdict.member,
                verdict.queries.total()
            );
            for w in &verdict.witnesses {
                println!("witness vertices={:?} edges={:?}", w.vertex_map, w.edge_image);
            }
            if verdict.witness_overlap {
                println!("note: component witnesses overlap");
            }
            Ok(match verdict.decision {
                Decision::Accept => ExitCode::SUCCESS,
                Decision::Reject => ExitCode::from(3),
            })
        }
        Command::Pack(a) => {
            let g = load_graph(&a.common.graph)?;
            let h = load_pattern(&a.common.h)?;
            let mut rng = trial_rng(a.seed, 0);
            let packing = if a.colored {
                let trials = a
                    .trials
                    .unwrap_or_else(|| hfree::subgraph::default_coloring_trials(&h));
                let (_, copies) = hfree::subgraph::best_coloring(&g, &h, trials, &mut rng)?;
                copies
            } else {
                greedy_packing(&g, &h, None, &mut rng)?
            };
            println!("packing_size={}", packing.len());
            for (i, c) in packing.copies.iter().enumerate() {
                println!("copy {i}: vertices={:?}", c.vertex_map);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Distance(a) => {
            let g = load_graph(&a.graph)?;
            let h = load_pattern(&a.h)?;
            println!("{}", exact_deletion_distance(&g, &h)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Shrink(a) => {
            let h = load_pattern(&a.h)?;
            let levels = hfree::pipeline::shrink_pattern(&h, &a.order)?;
            for m in &levels {
                println!("M_{} vertices={:?}", m.level, m.vertices);
                for e in &m.edges {
                    println!("  edge vertices={:?} label={:?}", e.vertices, e.label);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Pipeline(a) => {
            let g = load_graph(&a.common.graph)?;
            let h = load_pattern(&a.common.h)?;
            let report = run_pipeline_report(&g, &h, a.eps, a.seed, a.force)?;
            print!("{}", report.render());
            if let Some(path) = a.csv {
                fs::write(&path, report.levels_to_csv())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            println!("all_bounds_hold={}", report.all_bounds_hold());
            Ok(ExitCode::SUCCESS)
        }
        Command::Experiment(a) => {
            let h = load_pattern(&a.h)?;
            let mut grid = Vec::new();
            for &dg in &a.dg {
                for &ld in &a.ld {
                    for &f in &a.f {
                        grid.push(TesterParams::new(dg, ld, f));
                    }
                }
            }
            let cfg = match (&a.graph, &a.kind) {
                (Some(path), None) => ExperimentConfig {
                    instance_label: path.display().to_string(),
                    graph: load_graph(path)?,
                    pattern: h,
                    eps: a.eps,
                    grid,
                    trials: a.trials,
                    seed: a.seed,
                },
                (None, Some(kind)) => ExperimentConfig::from_spec(
                    &instance_spec(kind, a.k, a.pad, a.rows, a.cols, a.n)?,
                    h,
                    a.eps,
                    grid,
                    a.trials,
                    a.seed,
                )?,
                _ => bail!("pass exactly one of --graph or --kind"),
            };
            let rows = run_detection_experiment(&cfg)?;
            let csv = rows_to_csv(&rows);
            match &a.out {
                Some(path) => fs::write(path, &csv)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{csv}"),
            }
            if let Some(path) = &a.emit_plot_script {
                let csv_ref = a
                    .out
                    .as_ref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_else(|| "experiment.csv".into());
                fs::write(path, plot_script(&csv_ref))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sensitivity(a) => match a.mode.as_str() {
            "connectivity" => {
                let cycle = hfree::instances::cycle(a.n);
                let matching = hfree::instances::matching(a.n);
                let mut accept_cycle = 0u64;
                let mut reject_matching = 0u64;
                for t in 0..a.trials {
                    let mut rng = trial_rng(a.seed, t);
                    if connectivity_test_distinct(&cycle, a.eps, &mut rng).0 == Decision::Accept
                    {
                        accept_cycle += 1;
                    }
                    let mut rng = trial_rng(a.seed, a.trials + t);
                    if connectivity_test_distinct(&matching, a.eps, &mut rng).0
                        == Decision::Reject
                    {
                        reject_matching += 1;
                    }
                }
                println!(
                    "cycle_accept_rate={:.6} matching_reject_rate={:.6} threshold={:.6}",
                    accept_cycle as f64 / a.trials as f64,
                    reject_matching as f64 / a.trials as f64,
                    rate_lower_4_sigma(2.0 / 3.0, a.trials)
                );
                Ok(ExitCode::SUCCESS)
            }
            "matching" => {
                let mut rng = trial_rng(a.seed, 0);
                let freq = matching_indistinguishability(a.q, a.n, a.trials, &mut rng);
                let bound = rate_lower_4_sigma(0.5f64.powi(a.q as i32), a.trials);
                println!("frequency={freq:.6} lower_bound={bound:.6} ok={}", freq >= bound);
                Ok(ExitCode::SUCCESS)
            }
            other => Err(anyhow!("unknown sensitivity mode: {other}")),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
