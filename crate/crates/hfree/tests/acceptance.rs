//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Statistical checks use 4-sigma bands around exact reference values that
//! are computed by independent brute-force oracles (choice-tree enumeration,
//! exhaustive search, closed forms), never by the code path under test.

use std::collections::BTreeSet;

use rayon::prelude::*;

use hfree::brute::{
    connected_graphs_up_to_iso, coverage_probability, fuzz_copy_soup, rlbd_outcome_probability,
};
use hfree::graph::{build_graph, Coloring, Graph, Vertex};
use hfree::instances::{
    complete, complete_bipartite, cycle, disjoint_copies, grid, matching, path, star,
    triangulation_patch,
};
use hfree::oracle::{trial_rng, QueryMeter};
use hfree::pipeline::{
    al_select, build_q, check_shrink_invariants, degree_prune, hrlbd, is_consistent, next_level,
    representatives, shadow, shrink_pattern, shrink_steps,
};
use hfree::stats::{binomial_sigma, rate_lower_4_sigma, within_4_sigma};
use hfree::subgraph::{
    automorphisms, enumerate_copies, exact_deletion_distance, greedy_packing,
    semi_subgraph_freeness_audit, CopySet,
};
use hfree::testers::{
    connectivity_test_distinct, family_test, matching_indistinguishability, rbe, rlbd,
    test_disconnected, Decision, TesterParams,
};

fn pass(criterion: u32, name: &str) {
    println!("acceptance criterion {criterion:02} ({name}): PASS");
}

/// The named pattern set used across criteria.
fn patterns() -> Vec<(&'static str, Graph)> {
    vec![
        ("triangle", complete(3)),
        ("c4", cycle(4)),
        ("k4", complete(4)),
        ("path3", path(3)),
    ]
}

/// Ten pattern-free planar instances per pattern; freeness is verified with
/// the exact matcher at construction time.
fn free_instances(name: &str) -> Vec<Graph> {
    let gs: Vec<Graph> = match name {
        "triangle" => vec![
            grid(3, 4),
            grid(4, 4),
            grid(2, 10),
            cycle(9),
            cycle(12),
            matching(10),
            star(8),
            path(15),
            complete_bipartite(2, 5),
            grid(5, 5),
        ],
        "c4" => vec![
            cycle(3),
            cycle(5),
            cycle(7),
            cycle(9),
            path(12),
            star(9),
            matching(12),
            disjoint_copies(&complete(3), 3, 0).0,
            disjoint_copies(&complete(3), 5, 2).0,
            path(20),
        ],
        "k4" => vec![
            grid(4, 4),
            triangulation_patch(3, 4),
            cycle(8),
            matching(8),
            complete_bipartite(2, 4),
            disjoint_copies(&complete(3), 4, 0).0,
            star(10),
            path(14),
            grid(2, 8),
            triangulation_patch(2, 6),
        ],
        "path3" => vec![
            matching(4),
            matching(8),
            matching(12),
            matching(20),
            build_graph(5, &[(1, 2)]).unwrap(),
            build_graph(9, &[(1, 2), (4, 5)]).unwrap(),
            build_graph(6, &[]).unwrap(),
            build_graph(3, &[(2, 3)]).unwrap(),
            matching(6),
            build_graph(12, &[(1, 2), (3, 4), (5, 6)]).unwrap(),
        ],
        other => panic!("no instance set for {other}"),
    };
    gs
}

#[test]
fn criterion_01_one_sided_error_exact() {
    let runs_per_instance: u64 = 10_000;
    for (name, h) in patterns() {
        let instances = free_instances(name);
        assert_eq!(instances.len(), 10);
        let params = TesterParams::new(2, 2, 2);
        for (gi, g) in instances.iter().enumerate() {
            // construction-time verification: planar and pattern-free
            assert!(g.satisfies_euler_bound(), "{name} instance {gi}");
            assert!(
                enumerate_copies(g, &h, 1, None).unwrap().is_empty(),
                "{name} instance {gi} contains the pattern"
            );
            let rejected: u64 = (0..runs_per_instance)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_rng(0xC1, (gi as u64) << 32 | t);
                    let a = rbe(g, &h, 0.1, &params, None, &mut rng);
                    let mut rng = trial_rng(0xC1F, (gi as u64) << 32 | t);
                    let b = family_test(g, std::slice::from_ref(&h), 0.1, Some(&params), &mut rng);
                    u64::from(a.decision == Decision::Reject)
                        + u64::from(b.decision == Decision::Reject)
                })
                .sum();
            assert_eq!(rejected, 0, "{name} instance {gi} was rejected");
        }
    }
    pass(1, "one-sided error, exact");
}

#[test]
fn criterion_02_query_bounds() {
    // direct per-run bound on rlbd
    let h = complete(3);
    let (g, _) = disjoint_copies(&h, 8, 8);
    for dg in [2usize, 3, 4] {
        for ld in [1usize, 2, 3] {
            for seed in 0..200 {
                let mut meter = QueryMeter::new();
                let mut rng = trial_rng(0xC2, seed);
                let _ = rlbd(&g, &h, dg, ld, None, &mut meter, &mut rng);
                assert!(meter.total() <= 1 + 2 * (dg as u64).pow(ld as u32));
            }
        }
    }
    // experiment rows carry the f-fold bound (asserted inside the runner too)
    let cfg = hfree::experiment::ExperimentConfig {
        instance_label: "disjoint-copies(k=8,pad=8)".into(),
        graph: g,
        pattern: h,
        eps: 0.2,
        grid: vec![
            TesterParams::new(2, 2, 1),
            TesterParams::new(2, 3, 4),
            TesterParams::new(3, 2, 8),
        ],
        trials: 2_000,
        seed: 0xC2,
    };
    for row in hfree::experiment::run_detection_experiment(&cfg).unwrap() {
        let bound = row.f as u64 * (1 + 2 * (row.dg as u64).pow(row.ld as u32));
        assert!(row.max_queries <= bound);
        assert!(row.mean_queries <= bound as f64);
    }
    pass(2, "query bounds");
}

/// Exact single-call rejection probability on the one-triangle instance at
/// dg = 2, ld = 2, from the exhaustive choice tree.
fn calibration_exact_p() -> f64 {
    let g = complete(3);
    let h = complete(3);
    let p = rlbd_outcome_probability(&g, 2, 2, |edges| {
        hfree::subgraph::find_copy_in_edges(&h, edges, None).unwrap().is_some()
    });
    // hand-derived closed form for this instance
    assert!((p - 15.0 / 32.0).abs() < 1e-12);
    p
}

fn calibration_empirical(trials: u64, master: u64) -> u64 {
    let g = complete(3);
    let h = complete(3);
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut meter = QueryMeter::new();
            let mut rng = trial_rng(master, t);
            u64::from(rlbd(&g, &h, 2, 2, None, &mut meter, &mut rng).is_some())
        })
        .sum()
}

#[test]
fn criterion_03_detection_calibration() {
    let p = calibration_exact_p();
    let trials: u64 = 100_000;
    let rejects = calibration_empirical(trials, 0xC3);
    assert!(
        within_4_sigma(rejects, trials, p),
        "empirical {rejects}/{trials} vs exact {p}"
    );
    pass(3, "detection calibration");
}

#[test]
fn criterion_04_amplification() {
    let g = complete(3);
    let h = complete(3);
    let mtrials: u64 = 100_000;
    let hits = calibration_empirical(mtrials, 0xC4);
    let p_hat = hits as f64 / mtrials as f64;
    let sigma_p = binomial_sigma(mtrials, p_hat) / mtrials as f64;
    let trials: u64 = 10_000;
    for f in [1usize, 2, 4, 8, 16] {
        let params = TesterParams::new(2, 2, f);
        let rejects: u64 = (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(0xC4F0 + f as u64, t);
                u64::from(rbe(&g, &h, 0.5, &params, None, &mut rng).decision == Decision::Reject)
            })
            .sum();
        let predicted = 1.0 - (1.0 - p_hat).powi(f as i32);
        let tol = 4.0 * binomial_sigma(trials, predicted) / trials as f64
            + 4.0 * f as f64 * (1.0 - p_hat).powi(f as i32 - 1) * sigma_p
            + 1.0 / trials as f64;
        let rate = rejects as f64 / trials as f64;
        assert!(
            (rate - predicted).abs() <= tol,
            "f={f}: rate {rate} vs predicted {predicted} (tol {tol})"
        );
    }
    // f = ceil(5 / p_hat) pushes the rate past 0.99
    let fstar = (5.0 / p_hat).ceil() as usize;
    let params = TesterParams::new(2, 2, fstar);
    let rejects: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(0xC4AA, t);
            u64::from(rbe(&g, &h, 0.5, &params, None, &mut rng).decision == Decision::Reject)
        })
        .sum();
    let rate = rejects as f64 / trials as f64;
    assert!(rate >= rate_lower_4_sigma(0.99, trials), "f*={fstar}: rate {rate}");
    pass(4, "amplification");
}

#[test]
fn criterion_05_packing_lower_bound() {
    let cases: Vec<(Graph, usize, usize)> = {
        let mut v = Vec::new();
        for h in [complete(3), path(3), cycle(4)] {
            for k in 2..=7 {
                for pad in [0usize, 3, 7] {
                    v.push((h.clone(), k, pad));
                }
            }
        }
        v.truncate(50);
        v
    };
    assert_eq!(cases.len(), 50);
    let mut survivor_totals: std::collections::HashMap<usize, (u64, f64)> = Default::default();
    let coloring_trials = 100u64;
    for (idx, (h, k, pad)) in cases.iter().enumerate() {
        let (g, _) = disjoint_copies(h, *k, *pad);
        let d = exact_deletion_distance(&g, h).unwrap();
        assert_eq!(d, *k, "distance of disjoint copies is one per copy");
        // pick eps so the instance is certified eps-far: d > eps*n
        let eps = (d as f64 - 0.5) / g.n() as f64;
        assert!(d as f64 > eps * g.n() as f64);
        // uncolored greedy packing reaches the pigeonhole bound
        let mut rng = trial_rng(0xC5, idx as u64);
        let packing = greedy_packing(&g, h, None, &mut rng).unwrap();
        let needed = (eps * g.n() as f64 / h.m() as f64).ceil() as usize;
        assert!(
            packing.len() >= needed,
            "packing {} below eps*n/|E(H)| = {needed}",
            packing.len()
        );
        assert!(packing.len() <= d, "packing cannot exceed the deletion distance");
        // colored survival statistics against the automorphism-adjusted rate
        let auts = automorphisms(h).unwrap();
        let hn = h.n();
        let p_survive = auts.len() as f64 / (hn as f64).powi(hn as i32);
        let mut survivors = 0u64;
        let mut rng = trial_rng(0xC5C0, idx as u64);
        for _ in 0..coloring_trials {
            let chi = Coloring::random(g.n(), hn as u8, &mut rng);
            survivors +=
                hfree::subgraph::colored_survivors(&packing.copies, &chi, h, &auts).len() as u64;
        }
        let entry = survivor_totals.entry(hn * 1000 + h.m()).or_insert((0, 0.0));
        entry.0 += survivors;
        entry.1 += coloring_trials as f64 * packing.len() as f64 * p_survive;
    }
    // per pattern shape: aggregate count within 4 sigma of the expectation
    for (key, (got, expect)) in survivor_totals {
        let sigma = expect.sqrt().max(1.0); // conservative: variance <= mean for sums of Bernoulli
        assert!(
            (got as f64 - expect).abs() <= 4.0 * sigma + 0.5,
            "pattern {key}: survivors {got} vs expectation {expect}"
        );
    }
    pass(5, "packing lower bound and colored survival");
}

#[test]
fn criterion_06_shrink_invariants_exhaustive() {
    fn all_orders(h: usize) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = Vec::new();
        let mut used = vec![false; h + 1];
        fn rec(h: usize, cur: &mut Vec<u8>, used: &mut Vec<bool>, out: &mut Vec<Vec<u8>>) {
            if cur.len() == h {
                out.push(cur.clone());
                return;
            }
            for v in 1..=h as u8 {
                if !used[v as usize] {
                    used[v as usize] = true;
                    cur.push(v);
                    rec(h, cur, used, out);
                    cur.pop();
                    used[v as usize] = false;
                }
            }
        }
        rec(h, &mut cur, &mut used, &mut out);
        out
    }
    let mut graphs = 0usize;
    let mut checks = 0usize;
    for h in 1..=5 {
        for g in connected_graphs_up_to_iso(h) {
            graphs += 1;
            for order in all_orders(h) {
                let levels = shrink_pattern(&g, &order).unwrap();
                check_shrink_invariants(&g, &order, &levels)
                    .unwrap_or_else(|e| panic!("{e} (order {order:?}, graph {g:?})"));
                checks += 1;
            }
        }
    }
    // 1 + 1 + 2 + 6 + 21 connected graphs on 1..=5 vertices
    assert_eq!(graphs, 31);
    assert!(checks > 2_500);
    pass(6, "shrink invariants, exhaustive");
}

/// The fuzzed far corpus for the pipeline criteria: planar copy soups with
/// vertex-glued copies, h <= 4, up to 30 copies.
fn pipeline_corpus() -> Vec<(Graph, Graph, CopySet)> {
    let mut out = Vec::new();
    let shapes: Vec<(Graph, usize, usize, usize)> = vec![
        (complete(3), 6, 0, 0),
        (complete(3), 10, 4, 2),
        (complete(3), 20, 8, 0),
        (complete(3), 30, 12, 3),
        (complete(3), 2, 1, 0),
        (path(3), 8, 3, 1),
        (path(3), 16, 6, 0),
        (path(3), 3, 2, 2),
        (cycle(4), 6, 2, 1),
        (cycle(4), 12, 5, 0),
        (cycle(4), 2, 1, 0),
        (complete(4), 5, 2, 0),
        (complete(4), 8, 3, 1),
        (complete(4), 3, 1, 0),
        (path(4), 10, 4, 0),
    ];
    let mut seed = 0u64;
    while out.len() < 30 {
        for (h, k, merges, pad) in &shapes {
            if out.len() >= 30 {
                break;
            }
            let mut rng = trial_rng(0xC7C0 + seed, out.len() as u64);
            let (g, d) = fuzz_copy_soup(h, *k, *merges, *pad, &mut rng);
            out.push((g, h.clone(), d));
        }
        seed += 1;
    }
    out
}

#[test]
fn criterion_07_pipeline_bounds() {
    let corpus = pipeline_corpus();
    assert_eq!(corpus.len(), 30);
    corpus.par_iter().enumerate().for_each(|(idx, (g, h, d0))| {
        let hn = h.n();
        // degree pruning keeps at least half on planar instances
        let pruned = degree_prune(d0, g);
        assert!(2 * pruned.len() >= d0.len(), "instance {idx}: degree_prune lost too much");
        let mut d = pruned;
        let mut q = build_q(g, h, &d, &[]).unwrap();
        assert!(is_consistent(g, h, &d, &[]));
        let mut rng = trial_rng(0xC7, idx as u64);
        for _ in 2..=hn {
            // AL selection bound and per-copy low-degree witnesses
            let pattern = shrink_steps(h, &q.order_prefix).unwrap().pop().unwrap();
            let al = al_select(h, &d, &pattern).unwrap();
            assert!((4 * hn + 2) * al.kept.len() >= d.len(), "instance {idx}: AL bound");
            assert_eq!(al.kept.len(), al.witnesses.len());
            let before = d.len();
            let step = next_level(g, h, &d, &q, &mut rng).unwrap();
            assert!(
                step.d_next.len() as u128 * (6 * hn as u128).pow(hn as u32 + 2)
                    >= before as u128,
                "instance {idx}: next_level bound"
            );
            assert!(is_consistent(g, h, &step.d_next, &step.q_next.order_prefix));
            d = step.d_next;
            q = step.q_next;
        }
        assert!(q.edges.iter().all(|e| e.vertices.len() == 1));
    });
    pass(7, "pipeline selection bounds");
}

#[test]
fn criterion_08_shadow_soundness() {
    let corpus = pipeline_corpus();
    let small_checked: usize = corpus
        .par_iter()
        .enumerate()
        .map(|(idx, (g, h, d0))| {
            let hn = h.n();
            let mut d = degree_prune(d0, g);
            let mut q = build_q(g, h, &d, &[]).unwrap();
            let mut rng = trial_rng(0xC8, idx as u64);
            let mut small_checked = 0usize;
            for level in 1..=hn {
                let sh = shadow(h, &d, &q).unwrap();
                assert!(
                    sh.neighborhoods_match(&q),
                    "instance {idx} level {level}: shadow neighborhoods differ"
                );
                for (c, gg) in &sh.per_color {
                    assert!(
                        gg.satisfies_euler_bound(),
                        "instance {idx} level {level} color {c}: Euler bound"
                    );
                    if gg.vertex_count() <= 10 {
                        assert!(
                            hfree::subgraph::is_planar_small(&gg.to_graph()).unwrap(),
                            "instance {idx} level {level} color {c}: not planar"
                        );
                        small_checked += 1;
                    }
                }
                if level < hn {
                    let step = next_level(g, h, &d, &q, &mut rng).unwrap();
                    d = step.d_next;
                    q = step.q_next;
                }
            }
            small_checked
        })
        .sum();
    assert!(small_checked > 0, "corpus must exercise the full planarity check");
    pass(8, "shadow soundness");
}

#[test]
fn criterion_09_hypergraph_graph_equivalence() {
    // 10 instances: disjoint copies and glued soups
    let mut instances: Vec<(Graph, Graph, CopySet)> = Vec::new();
    for (h, k, merges) in [
        (complete(3), 5, 0),
        (complete(3), 8, 3),
        (complete(3), 3, 1),
        (path(3), 6, 0),
        (path(3), 9, 4),
        (cycle(4), 4, 0),
        (cycle(4), 7, 3),
        (complete(4), 4, 0),
        (complete(4), 6, 2),
        (path(4), 5, 2),
    ] {
        let mut rng = trial_rng(0xC9C0, instances.len() as u64);
        let (g, d) = fuzz_copy_soup(&h, k, merges, 2, &mut rng);
        instances.push((g, h, d));
    }
    for (idx, (g, h, d)) in instances.iter().enumerate() {
        let union = d.union_graph(g);
        let chi = d.coloring.clone().unwrap();
        let q1 = build_q(g, h, d, &[]).unwrap();
        let m1 = shrink_steps(h, &[]).unwrap().pop().unwrap();
        let identity: Vec<Vertex> = (1..=g.n() as Vertex).collect();
        let (dg, ld) = (3, 2);
        let trials = 1_000u64;
        let mismatches: u64 = (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut meter_a = QueryMeter::new();
                let mut rng_a = trial_rng(0xC9, (idx as u64) << 32 | t);
                let a = rlbd(&union, h, dg, ld, Some(&chi), &mut meter_a, &mut rng_a).is_some();
                let mut meter_b = QueryMeter::new();
                let mut rng_b = trial_rng(0xC9, (idx as u64) << 32 | t);
                let b = hrlbd(&q1, &identity, &m1, &chi, dg, ld, &mut meter_b, &mut rng_b)
                    .is_some();
                debug_assert_eq!(meter_a.total(), meter_b.total());
                u64::from(a != b)
            })
            .sum();
        assert_eq!(mismatches, 0, "instance {idx}: verdicts diverged");
    }
    pass(9, "hypergraph/graph equivalence at level 1");
}

#[test]
fn criterion_10_final_level_detection_rate() {
    // (pattern, contraction prefix, copies, pad)
    let cases: Vec<(Graph, Vec<u8>, usize, usize)> = vec![
        (complete(3), vec![1, 2], 3, 6),
        (complete(3), vec![2, 3], 5, 10),
        (path(3), vec![1, 3], 4, 4),
        (path(3), vec![3, 1], 2, 8),
    ];
    for (ci, (h, prefix, k, pad)) in cases.into_iter().enumerate() {
        let (g, d) = disjoint_copies(&h, k, pad);
        run_final_level_case(ci, &h, &g, &d, &prefix);
    }
    // beyond disjoint copies: two path copies glued at their final vertex,
    // so the coverage classes carry multiplicity 2 each
    {
        let h = path(3);
        let g = build_graph(7, &[(1, 2), (2, 3), (4, 2), (2, 5)]).unwrap();
        let chi = Coloring::new(vec![1, 2, 3, 1, 3, 2, 1]);
        let copies = vec![
            hfree::subgraph::CopyEmbedding::new(&h, vec![1, 2, 3]),
            hfree::subgraph::CopyEmbedding::new(&h, vec![4, 2, 5]),
        ];
        let d = CopySet { copies, coloring: Some(chi) };
        d.validate(&g, &h).unwrap();
        run_final_level_case(99, &h, &g, &d, &[1, 3]);
    }
    pass(10, "final-level detection matches the closed form");
}

fn run_final_level_case(ci: usize, h: &Graph, g: &Graph, d: &CopySet, prefix: &[u8]) {
    let hn = h.n();
    let q = build_q(g, h, d, prefix).unwrap();
    let pattern = shrink_steps(h, prefix).unwrap().pop().unwrap();
    let chi = d.coloring.clone().unwrap();
    let mut order = prefix.to_vec();
    for c in 1..=hn as u8 {
        if !order.contains(&c) {
            order.push(c);
        }
    }
    let reps = representatives(g, h, d, &order).unwrap();
    let rep_map = reps.map(hn);
    let dg = hn * hn;

    // closed form: non-isolated start mass times per-start coverage of
    // all selfloop classes
    let mut p_exact = 0.0;
    for v in g.vertices() {
        let u = rep_map[(v - 1) as usize];
        if !q.has_vertex(u) || q.is_isolated(u) {
            continue;
        }
        let mut class_sizes: std::collections::BTreeMap<u32, u64> = Default::default();
        for &ei in q.incident_edges(u) {
            *class_sizes.entry(q.edges[ei].pattern_edge).or_insert(0) += 1;
        }
        assert_eq!(class_sizes.len(), pattern.edges.len());
        let sizes: Vec<u64> = class_sizes.values().copied().collect();
        p_exact += coverage_probability(&sizes, dg as u32) / g.n() as f64;
    }

    let trials = 100_000u64;
    let rejects: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut meter = QueryMeter::new();
            let mut rng = trial_rng(0xCA0 + ci as u64, t);
            u64::from(hrlbd(&q, rep_map, &pattern, &chi, dg, 1, &mut meter, &mut rng).is_some())
        })
        .sum();
    assert!(
        within_4_sigma(rejects, trials, p_exact),
        "case {ci}: empirical {rejects}/{trials} vs exact {p_exact}"
    );
}

#[test]
fn criterion_11_sensitivity() {
    let n = 50;
    let eps = 0.25;
    let trials = 10_000u64;
    let c = cycle(n);
    let m = matching(n);
    let accepts: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(0xCB, t);
            u64::from(connectivity_test_distinct(&c, eps, &mut rng).0 == Decision::Accept)
        })
        .sum();
    assert_eq!(accepts, trials, "connectivity tester rejected a connected graph");
    let rejects: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(0xCB1, t);
            u64::from(connectivity_test_distinct(&m, eps, &mut rng).0 == Decision::Reject)
        })
        .sum();
    let rate = rejects as f64 / trials as f64;
    assert!(rate >= rate_lower_4_sigma(2.0 / 3.0, trials), "matching reject rate {rate}");

    // matching indistinguishability: frequency at least 2^-q for q <= 6
    let walk_trials = 20_000u64;
    for q in 1..=6usize {
        let mut rng = trial_rng(0xCB2, q as u64);
        let freq = matching_indistinguishability(q, 100, walk_trials, &mut rng);
        let bound = rate_lower_4_sigma(0.5f64.powi(q as i32), walk_trials);
        assert!(freq >= bound, "q={q}: frequency {freq} below {bound}");
    }
    // monotonicity in q under common random numbers: the same walk is
    // evaluated at every prefix length, so the counts are nonincreasing
    // pointwise, with no sampling slack needed
    {
        let g = cycle(100);
        let mut counts = [0u64; 6];
        for t in 0..walk_trials {
            let mut meter = QueryMeter::new();
            let mut rng = trial_rng(0xCB3, t);
            let mut v = hfree::oracle::random_vertex(&g, &mut meter, &mut rng).unwrap();
            let mut edges: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
            for q in 1..=6usize {
                let w = hfree::oracle::random_neighbor(&g, v, &mut meter, &mut rng).unwrap();
                edges.insert(hfree::graph::norm_edge(v, w));
                v = w;
                let mut deg: std::collections::HashMap<Vertex, usize> = Default::default();
                for &(a, b) in &edges {
                    *deg.entry(a).or_default() += 1;
                    *deg.entry(b).or_default() += 1;
                }
                if deg.values().all(|&d| d <= 1) {
                    counts[q - 1] += 1;
                }
            }
        }
        for q in 1..6 {
            assert!(counts[q] <= counts[q - 1], "walk consistency must be monotone in q");
        }
        assert_eq!(counts[0], walk_trials, "a single edge is always matching-consistent");
    }
    pass(11, "oracle sensitivity");
}

#[test]
fn criterion_12_semi_subgraph_freeness_audit() {
    let tri = complete(3);
    // (i) + (ii) hold for triangle-freeness against {triangle} at every n <= 6
    for n in 3..=6 {
        let report = semi_subgraph_freeness_audit(
            |g| enumerate_copies(g, &tri, 1, None).unwrap().is_empty(),
            std::slice::from_ref(&tri),
            n,
            0.2,
        )
        .unwrap();
        assert!(
            report.holds(),
            "triangle-freeness audit failed at n={n}: {} / {} violations",
            report.condition_i_violations.len(),
            report.condition_ii_violations.len()
        );
    }
    // connectivity is not semi-subgraph-free: any single finite family fails
    for family in [vec![complete(3)], vec![path(3)], vec![cycle(4), complete(3)]] {
        let report =
            semi_subgraph_freeness_audit(|g| g.is_connected(), &family, 6, 0.3).unwrap();
        assert!(!report.holds(), "connectivity audit unexpectedly held");
    }
    pass(12, "semi-subgraph-freeness audit");
}

// ---------------------------------------------------------------------------
// Cross-cutting invariants backing the criteria
// ---------------------------------------------------------------------------

#[test]
fn witness_validity_on_far_instances() {
    // every reject carries an embedding verified against the host graph
    for (name, h) in patterns() {
        let (g, _) = disjoint_copies(&h, 6, 2);
        let params = TesterParams::new(3, 3, 6);
        let mut rejects = 0;
        for seed in 0..200 {
            let mut rng = trial_rng(0xD0, seed);
            let v = rbe(&g, &h, 0.2, &params, None, &mut rng);
            if v.decision == Decision::Reject {
                rejects += 1;
                let w = v.witness().unwrap();
                assert!(w.verify(&g, &h), "{name}: invalid witness");
            }
        }
        assert!(rejects > 0, "{name}: nothing detected on a far instance");
    }
}

#[test]
fn disconnected_pattern_rejects_matching() {
    let h = build_graph(4, &[(1, 2), (3, 4)]).unwrap();
    let g = matching(12);
    let params = TesterParams::new(2, 1, 6);
    let mut rng = trial_rng(0xD1, 0);
    let v = test_disconnected(&g, &h, 0.2, &params, None, &mut rng);
    assert_eq!(v.decision, Decision::Reject);
    assert_eq!(v.witnesses.len(), 2);
    // disjoint component images (reported, not required)
    let all: BTreeSet<Vertex> = v
        .witnesses
        .iter()
        .flat_map(|w| w.vertex_map.iter().copied())
        .collect();
    assert_eq!(v.witness_overlap, all.len() < 4);
}

#[test]
fn degree_sandwich_along_constant_copy_set() {
    // deg_{Q_{i+1}}(u) <= deg_{Q_i}(u) <= h * deg_{Q_{i+1}}(u) for the final
    // copy set along its own contraction chain
    let corpus = pipeline_corpus();
    for (idx, (g, h, d0)) in corpus.iter().enumerate().take(12) {
        let hn = h.n();
        let mut d = degree_prune(d0, g);
        let mut q = build_q(g, h, &d, &[]).unwrap();
        let mut rng = trial_rng(0xD2, idx as u64);
        let mut order = Vec::new();
        for _ in 2..=hn {
            let step = next_level(g, h, &d, &q, &mut rng).unwrap();
            order.push(step.chosen);
            d = step.d_next;
            q = step.q_next;
        }
        for c in 1..=hn as u8 {
            if !order.contains(&c) {
                order.push(c);
            }
        }
        // rebuild the whole chain with the final set, then compare levels
        let mut prev = build_q(g, h, &d, &[]).unwrap();
        for i in 1..hn {
            let cur = build_q(g, h, &d, &order[..i]).unwrap();
            for &u in &cur.vertices {
                let lo = cur.degree(u);
                let hi = prev.degree(u);
                assert!(lo <= hi, "instance {idx}: degree grew at {u}: {lo} > {hi}");
                assert!(hi <= hn * lo, "instance {idx}: degree shrank too fast at {u}: {hi} > {hn}*{lo}");
            }
            prev = cur;
        }
    }
}

#[test]
fn safe_vertex_edge_grouping() {
    // incident edges of a safe vertex split into equal-size groups matching
    // the pattern-level edges at its color
    let h = complete(3);
    let mut rng = trial_rng(0xD3, 0);
    let (g, d) = fuzz_copy_soup(&h, 8, 4, 0, &mut rng);
    let q = build_q(&g, &h, &d, &[]).unwrap();
    let chi = d.coloring.as_ref().unwrap();
    let pattern = shrink_steps(&h, &[]).unwrap().pop().unwrap();
    for &u in &q.vertices {
        if q.is_isolated(u) || !hfree::pipeline::is_safe(u, &d, &q) {
            continue;
        }
        let color = chi.of(u);
        let ell = pattern.degree(color);
        let mut groups: std::collections::HashMap<(Vec<Vertex>, BTreeSet<u8>), usize> =
            Default::default();
        for &ei in q.incident_edges(u) {
            let e = &q.edges[ei];
            *groups
                .entry((e.vertices.clone(), e.colored_label(chi)))
                .or_insert(0) += 1;
        }
        assert_eq!(groups.len(), ell, "vertex {u}: wrong group count");
        let sizes: BTreeSet<usize> = groups.values().copied().collect();
        assert_eq!(sizes.len(), 1, "vertex {u}: groups of unequal size");
        assert_eq!(
            groups.values().sum::<usize>(),
            q.degree(u),
            "vertex {u}: grouping does not cover all incident edges"
        );
    }
}
