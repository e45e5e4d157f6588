//! Experiment orchestration: seeded detection-rate sweeps over a parameter
//! grid with CSV emission, and the full contraction-pipeline report.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::Graph;
use crate::instances::InstanceSpec;
use crate::oracle::trial_rng;
use crate::pipeline::{
    build_q, next_level, representatives, shadow, shrink_steps, PipelineError,
};
use crate::subgraph::{
    best_coloring, default_coloring_trials, greedy_packing, FarnessOutcome, SubgraphError,
};
use crate::testers::{rbe, Decision, TesterParams};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Subgraph(#[from] SubgraphError),
    #[error("instance is not certified far and no override was given")]
    NotCertifiedFar,
}

/// A seeded detection experiment: independent tester trials for every cell
/// of a parameter grid on one instance.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub instance_label: String,
    pub graph: Graph,
    pub pattern: Graph,
    pub eps: f64,
    pub grid: Vec<TesterParams>,
    pub trials: u64,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.grid.is_empty() {
            return Err(ExperimentError::InvalidConfig("empty parameter grid".into()));
        }
        if self.trials == 0 {
            return Err(ExperimentError::InvalidConfig("need at least one trial".into()));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(ExperimentError::InvalidConfig("eps must lie in (0,1)".into()));
        }
        Ok(())
    }

    pub fn from_spec(
        spec: &InstanceSpec,
        pattern: Graph,
        eps: f64,
        grid: Vec<TesterParams>,
        trials: u64,
        seed: u64,
    ) -> Result<Self, ExperimentError> {
        let graph = crate::instances::gen_instance(spec, Some(&pattern))
            .map_err(|e| ExperimentError::InvalidConfig(e.to_string()))?;
        Ok(ExperimentConfig {
            instance_label: spec.to_string(),
            graph,
            pattern,
            eps,
            grid,
            trials,
            seed,
        })
    }
}

/// One grid cell's aggregated results.
#[derive(Clone, Debug)]
pub struct ExperimentRow {
    pub instance: String,
    pub dg: usize,
    pub ld: usize,
    pub f: usize,
    pub trials: u64,
    pub rejects: u64,
    pub reject_rate: f64,
    pub mean_queries: f64,
    pub max_queries: u64,
    pub wall_ms: u128,
}

/// Runs every grid cell with independent per-trial RNG streams. Trials are
/// parallelized; results are deterministic in `(config, seed)` because each
/// trial owns its stream.
pub fn run_detection_experiment(
    cfg: &ExperimentConfig,
) -> Result<Vec<ExperimentRow>, ExperimentError> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.grid.len());
    for (cell, params) in cfg.grid.iter().enumerate() {
        let start = Instant::now();
        let (rejects, total_queries, max_queries) = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let stream = (cell as u64) << 40 | t;
                let mut rng = trial_rng(cfg.seed, stream);
                let v = rbe(&cfg.graph, &cfg.pattern, cfg.eps, params, None, &mut rng);
                let q = v.queries.total();
                ((v.decision == Decision::Reject) as u64, q, q)
            })
            .reduce(
                || (0, 0, 0),
                |a, b| (a.0 + b.0, a.1 + b.1, a.2.max(b.2)),
            );
        let row = ExperimentRow {
            instance: cfg.instance_label.clone(),
            dg: params.breadth,
            ld: params.depth,
            f: params.repetitions,
            trials: cfg.trials,
            rejects,
            reject_rate: rejects as f64 / cfg.trials as f64,
            mean_queries: total_queries as f64 / cfg.trials as f64,
            max_queries,
            wall_ms: start.elapsed().as_millis(),
        };
        assert!(row.rejects <= row.trials);
        assert!(
            row.max_queries <= params.query_bound(),
            "query bound violated: {} > {}",
            row.max_queries,
            params.query_bound()
        );
        if params.breadth >= 2 {
            let closed_form = params.repetitions as u64
                * (1 + 2 * (params.breadth as u64).saturating_pow(params.depth as u32));
            assert!(row.max_queries <= closed_form);
        }
        rows.push(row);
    }
    Ok(rows)
}

pub const CSV_HEADER: &str =
    "instance,dg,ld,f,trials,rejects,reject_rate,mean_queries,max_queries,wall_ms";

/// Fixed CSV schema; all columns except `wall_ms` are byte-deterministic in
/// `(config, seed)`.
pub fn rows_to_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{:.6},{:.6},{},{}",
            r.instance,
            r.dg,
            r.ld,
            r.f,
            r.trials,
            r.rejects,
            r.reject_rate,
            r.mean_queries,
            r.max_queries,
            r.wall_ms
        );
    }
    out
}

/// A generic plotting script referencing the CSV columns (never executed
/// by this crate).
pub fn plot_script(csv_path: &str) -> String {
    format!(
        "#!/usr/bin/env python3\n\
         # Plots reject_rate against the repetition count f, one line per (dg, ld).\n\
         import csv\n\
         from collections import defaultdict\n\
         import matplotlib.pyplot as plt\n\
         rows = list(csv.DictReader(open({csv_path:?})))\n\
         series = defaultdict(list)\n\
         for r in rows:\n\
         \x20   series[(r['instance'], r['dg'], r['ld'])].append((int(r['f']), float(r['reject_rate'])))\n\
         for key, pts in series.items():\n\
         \x20   pts.sort()\n\
         \x20   plt.plot([f for f, _ in pts], [y for _, y in pts], marker='o', label=str(key))\n\
         plt.xlabel('repetitions f')\n\
         plt.ylabel('reject rate')\n\
         plt.legend()\n\
         plt.savefig('detection.png', dpi=150)\n"
    )
}

// ---------------------------------------------------------------------------
// Pipeline report
// ---------------------------------------------------------------------------

/// Per-contraction-step summary.
#[derive(Clone, Debug)]
pub struct LevelReport {
    /// Level being built (2..=h).
    pub level: usize,
    pub chosen_color: u8,
    pub copies_before: usize,
    pub copies_after: usize,
    /// `|D_{i+1}| * (6h)^(h+2) >= |D_i|`
    pub bound_ok: bool,
    pub consistent: bool,
    pub q_edges: usize,
    /// Smallest Euler-bound slack over the per-color shadow graphs.
    pub min_shadow_euler_margin: i64,
    /// Shadow neighborhoods equal hypergraph neighborhoods.
    pub shadow_sound: bool,
}

/// Full report of one pipeline run on a far instance.
#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub eps: f64,
    pub seed: u64,
    pub packing_size: usize,
    pub pruned_size: usize,
    pub degree_prune_ok: bool,
    pub order: Vec<u8>,
    pub levels: Vec<LevelReport>,
    pub final_copies: usize,
    pub representatives_ok: bool,
}

impl PipelineReport {
    pub fn all_bounds_hold(&self) -> bool {
        self.degree_prune_ok
            && self.representatives_ok
            && self
                .levels
                .iter()
                .all(|l| l.bound_ok && l.consistent && l.shadow_sound && l.min_shadow_euler_margin >= 0)
    }

    /// Line-oriented text form; bit-exact under a fixed seed.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "pipeline eps={} seed={}", self.eps, self.seed);
        let _ = writeln!(
            out,
            "packing={} degree_pruned={} degree_prune_ok={}",
            self.packing_size, self.pruned_size, self.degree_prune_ok
        );
        for l in &self.levels {
            let _ = writeln!(
                out,
                "level={} chosen_color={} copies={}->{} bound_ok={} consistent={} \
                 shadow_sound={} min_euler_margin={} q_edges={}",
                l.level,
                l.chosen_color,
                l.copies_before,
                l.copies_after,
                l.bound_ok,
                l.consistent,
                l.shadow_sound,
                l.min_shadow_euler_margin,
                l.q_edges
            );
        }
        let _ = writeln!(
            out,
            "order={:?} final_copies={} representatives_ok={}",
            self.order, self.final_copies, self.representatives_ok
        );
        out
    }

    pub const CSV_HEADER: &'static str = "level,chosen_color,copies_before,copies_after,bound_ok,consistent,shadow_sound,min_euler_margin,q_edges";

    pub fn levels_to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for l in &self.levels {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                l.level,
                l.chosen_color,
                l.copies_before,
                l.copies_after,
                l.bound_ok,
                l.consistent,
                l.shadow_sound,
                l.min_shadow_euler_margin,
                l.q_edges
            );
        }
        out
    }
}

/// Runs the whole contraction pipeline on `g`:
/// coloring search, colored greedy packing, degree pruning, `h - 1`
/// contraction steps with per-level checks, and the representative maps.
///
/// Refuses instances that cannot be certified far unless `override_far`.
pub fn run_pipeline_report(
    g: &Graph,
    h: &Graph,
    eps: f64,
    seed: u64,
    override_far: bool,
) -> Result<PipelineReport, ExperimentError> {
    if !override_far {
        match crate::subgraph::certify_far(g, h, eps)? {
            FarnessOutcome::Certified(_) => {}
            FarnessOutcome::NotCertified => return Err(ExperimentError::NotCertifiedFar),
        }
    }
    let mut rng = trial_rng(seed, 0);
    let (coloring, _survivors) = best_coloring(g, h, default_coloring_trials(h), &mut rng)?;
    let packing = greedy_packing(g, h, Some(&coloring), &mut rng)?;
    run_pipeline_from(g, h, packing, eps, seed)
}

/// Pipeline run starting from an explicit colored copy set (the packing and
/// coloring stages already done by the caller).
pub fn run_pipeline_from(
    g: &Graph,
    h: &Graph,
    packing: crate::subgraph::CopySet,
    eps: f64,
    seed: u64,
) -> Result<PipelineReport, ExperimentError> {
    let mut rng = trial_rng(seed, 1);
    let packing_size = packing.len();
    let pruned = crate::pipeline::degree_prune(&packing, g);
    let degree_prune_ok = 2 * pruned.len() >= packing_size;
    let mut d = pruned.clone();
    let mut q = build_q(g, h, &d, &[])?;
    let hn = h.n();
    let mut levels = Vec::new();
    let mut order: Vec<u8> = Vec::new();
    for _ in 2..=hn {
        let before = d.len();
        let step = next_level(g, h, &d, &q, &mut rng)?;
        let after = step.d_next.len();
        let bound_ok =
            after as u128 * (6 * hn as u128).pow(hn as u32 + 2) >= before as u128;
        let consistent =
            crate::pipeline::is_consistent(g, h, &step.d_next, &step.q_next.order_prefix);
        let sh = shadow(h, &step.d_next, &step.q_next)?;
        let shadow_sound = sh.neighborhoods_match(&step.q_next);
        let min_margin = sh
            .per_color
            .iter()
            .map(|(_, gg)| gg.euler_margin())
            .min()
            .unwrap_or(0);
        order.push(step.chosen);
        levels.push(LevelReport {
            level: step.q_next.level,
            chosen_color: step.chosen,
            copies_before: before,
            copies_after: after,
            bound_ok,
            consistent,
            q_edges: step.q_next.edges.len(),
            min_shadow_euler_margin: min_margin,
            shadow_sound,
        });
        d = step.d_next;
        q = step.q_next;
    }
    // complete the order with the one remaining color
    let used: std::collections::BTreeSet<u8> = order.iter().copied().collect();
    for c in 1..=hn as u8 {
        if !used.contains(&c) {
            order.push(c);
        }
    }
    let reps = representatives(g, h, &d, &order)?;
    let representatives_ok = reps.validate(g, h, &d, &order).is_ok();
    // final level sanity: all hyperedges are selfloops
    let final_pattern = shrink_steps(h, &order[..hn - 1])?.pop().unwrap();
    debug_assert!(final_pattern.edges.iter().all(|e| e.vertices.len() == 1));
    Ok(PipelineReport {
        eps,
        seed,
        packing_size,
        pruned_size: pruned.len(),
        degree_prune_ok,
        order,
        levels,
        final_copies: d.len(),
        representatives_ok,
    })
}
