//! One-sided-error subgraph-freeness testers and the oracle-sensitivity
//! experiments that separate the access models.
//!
//! All testers accept every pattern-free input on every seed; a reject always
//! carries a verified embedding as evidence. Detection optionally runs in
//! colored mode (used when validating the contraction pipeline, where copies
//! are color-consistent by construction).

use std::collections::BTreeSet;

use rand::Rng;

use crate::graph::{Coloring, Graph, Vertex};
use crate::oracle::{random_vertex, DistinctNeighborOracle, QueryMeter};
use crate::explore::rlbfs;
use crate::subgraph::{find_copy_in_edges, CopyEmbedding};

/// Breadth, depth, and repetition count of one tester configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TesterParams {
    /// Breadth `dg` of each exploration.
    pub breadth: usize,
    /// Depth `ld` of each exploration.
    pub depth: usize,
    /// Number of independent exploration rounds `f`.
    pub repetitions: usize,
}

impl TesterParams {
    pub fn new(breadth: usize, depth: usize, repetitions: usize) -> Self {
        assert!(breadth >= 1 && depth >= 1 && repetitions >= 1);
        TesterParams { breadth, depth, repetitions }
    }

    /// Default schedule in terms of the pattern size and proximity: breadth
    /// `max(h^2, ceil(4h/eps))`, depth `2h`, repetitions `ceil(32/eps)`.
    /// The true constants from the analysis are doubly exponential; this
    /// schedule is a practical default and every caller may override it.
    pub fn schedule(eps: f64, h: &Graph) -> Self {
        assert!(eps > 0.0 && eps < 1.0);
        let hn = h.n().max(1);
        TesterParams {
            breadth: (hn * hn).max((4.0 * hn as f64 / eps).ceil() as usize),
            depth: 2 * hn,
            repetitions: (32.0 / eps).ceil() as usize,
        }
    }

    /// Query bound for the full run: `f * (1 + sum dg^i)`.
    pub fn query_bound(&self) -> u64 {
        (self.repetitions as u64)
            .saturating_mul(crate::explore::rlbfs_query_bound(self.breadth, self.depth))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Accept,
    Reject,
}

/// Verdict of a tester run. Rejections carry one verified embedding per
/// connected component of the pattern (a single one for connected patterns).
#[derive(Clone, Debug)]
pub struct TestVerdict {
    pub decision: Decision,
    pub witnesses: Vec<CopyEmbedding>,
    /// Index of the rejecting family member for `family_test`, else 0.
    pub member: usize,
    /// Component witnesses sharing vertices are reported, not rejected on.
    pub witness_overlap: bool,
    pub queries: QueryMeter,
}

impl TestVerdict {
    fn accept(queries: QueryMeter) -> Self {
        TestVerdict {
            decision: Decision::Accept,
            witnesses: Vec::new(),
            member: 0,
            witness_overlap: false,
            queries,
        }
    }

    pub fn witness(&self) -> Option<&CopyEmbedding> {
        self.witnesses.first()
    }
}

/// One exploration round: `rlbfs` and a copy search inside the explored
/// edges. One-sided by construction: an accept inspects a subgraph of `g`,
/// so a pattern-free `g` can never produce a witness.
pub fn rlbd(
    g: &Graph,
    h: &Graph,
    dg: usize,
    ld: usize,
    coloring: Option<&Coloring>,
    meter: &mut QueryMeter,
    rng: &mut impl Rng,
) -> Option<CopyEmbedding> {
    let explored = rlbfs(g, dg, ld, meter, rng);
    find_copy_in_edges(h, &explored.edge_set, coloring).expect("explored sets are desk scale")
}

/// The repeated tester: `f` independent `rlbd` rounds, rejecting on the
/// first witness.
pub fn rbe(
    g: &Graph,
    h: &Graph,
    eps: f64,
    params: &TesterParams,
    coloring: Option<&Coloring>,
    rng: &mut impl Rng,
) -> TestVerdict {
    assert!(eps > 0.0 && eps < 1.0, "eps must lie in (0,1)");
    let mut meter = QueryMeter::new();
    for _ in 0..params.repetitions {
        if let Some(w) = rlbd(g, h, params.breadth, params.depth, coloring, &mut meter, rng) {
            debug_assert!(w.verify(g, h));
            return TestVerdict {
                decision: Decision::Reject,
                witnesses: vec![w],
                member: 0,
                witness_overlap: false,
                queries: meter,
            };
        }
    }
    TestVerdict::accept(meter)
}

/// Splits a pattern into its connected components, each as a compact graph
/// plus the list of original pattern vertices it covers (sorted).
pub fn pattern_components(h: &Graph) -> Vec<(Graph, Vec<Vertex>)> {
    h.components()
        .into_iter()
        .map(|comp| {
            let index = |v: Vertex| (comp.iter().position(|&x| x == v).unwrap() + 1) as Vertex;
            let edges: Vec<_> = h
                .edges()
                .into_iter()
                .filter(|&(u, _)| comp.contains(&u))
                .map(|(u, v)| (index(u), index(v)))
                .collect();
            (crate::graph::build_graph(comp.len(), &edges).unwrap(), comp)
        })
        .collect()
}

/// Tester for arbitrary (possibly disconnected) patterns: each repetition
/// runs one `rlbd` per component and rejects iff every component was found
/// in that batch. Witnesses may overlap; the overlap is reported.
pub fn test_disconnected(
    g: &Graph,
    h: &Graph,
    eps: f64,
    params: &TesterParams,
    coloring: Option<&Coloring>,
    rng: &mut impl Rng,
) -> TestVerdict {
    assert!(eps > 0.0 && eps < 1.0, "eps must lie in (0,1)");
    let comps = pattern_components(h);
    let mut meter = QueryMeter::new();
    for _ in 0..params.repetitions {
        let mut found: Vec<CopyEmbedding> = Vec::with_capacity(comps.len());
        for (comp, original) in &comps {
            if comp.m() == 0 {
                // An edgeless component asks only for enough vertices.
                if g.n() >= comp.n() {
                    let map: Vec<Vertex> = (1..=comp.n() as Vertex).collect();
                    found.push(CopyEmbedding::new(comp, map));
                    continue;
                } else {
                    break;
                }
            }
            let comp_coloring = coloring.map(|chi| {
                // colors of the component's roles inside the full pattern
                component_coloring(chi, original)
            });
            match rlbd(
                g,
                comp,
                params.breadth,
                params.depth,
                comp_coloring.as_ref(),
                &mut meter,
                rng,
            ) {
                Some(w) => found.push(w),
                None => break,
            }
        }
        if found.len() == comps.len() {
            let overlap = witnesses_overlap(&found);
            return TestVerdict {
                decision: Decision::Reject,
                witnesses: found,
                member: 0,
                witness_overlap: overlap,
                queries: meter,
            };
        }
    }
    TestVerdict::accept(meter)
}

fn component_coloring(chi: &Coloring, original_vertices: &[Vertex]) -> Coloring {
    // Detection inside the component uses the full-pattern colors of the
    // component's vertices; remap them to the compact role ids 1..k.
    let mut colors = vec![0u8; chi.len()];
    for (idx, v) in (1..=chi.len() as Vertex).enumerate() {
        let c = chi.of(v);
        colors[idx] = match original_vertices.iter().position(|&hv| hv as u8 == c) {
            Some(pos) => (pos + 1) as u8,
            None => u8::MAX, // color of a different component: never matches
        };
    }
    Coloring::new(colors)
}

fn witnesses_overlap(ws: &[CopyEmbedding]) -> bool {
    let mut seen: BTreeSet<Vertex> = BTreeSet::new();
    for w in ws {
        for &v in &w.vertex_map {
            if !seen.insert(v) {
                return true;
            }
        }
    }
    false
}

/// Tests freeness from a finite family by running one tester per member at
/// proximity `eps / |family|`; rejects iff any member test rejects.
pub fn family_test(
    g: &Graph,
    family: &[Graph],
    eps: f64,
    params: Option<&TesterParams>,
    rng: &mut impl Rng,
) -> TestVerdict {
    assert!(!family.is_empty(), "family must be nonempty");
    let per_member_eps = eps / family.len() as f64;
    let mut meter = QueryMeter::new();
    for (i, h) in family.iter().enumerate() {
        let p = params
            .copied()
            .unwrap_or_else(|| TesterParams::schedule(per_member_eps, h));
        let verdict = test_disconnected(g, h, per_member_eps, &p, None, rng);
        meter.merge(&verdict.queries);
        if verdict.decision == Decision::Reject {
            return TestVerdict { member: i, queries: meter, ..verdict };
        }
    }
    TestVerdict::accept(meter)
}

/// One-sided connectivity tester in the random-distinct-neighbor model:
/// samples `ceil(3/eps)` vertices and tries to map out a small component
/// (at most `ceil(2/eps)` vertices) around each. Rejects iff one closes.
pub fn connectivity_test_distinct(
    g: &Graph,
    eps: f64,
    rng: &mut impl Rng,
) -> (Decision, QueryMeter) {
    assert!(eps > 0.0 && eps < 1.0);
    let mut meter = QueryMeter::new();
    let samples = (3.0 / eps).ceil() as usize;
    let budget = (2.0 / eps).ceil() as usize;
    let mut oracle = DistinctNeighborOracle::new(g);
    // The oracle never repeats a neighbor across the whole run, so the
    // tester keeps everything it learned: per vertex, the neighbors seen so
    // far and whether the exhaustion symbol already appeared.
    let mut discovered: std::collections::HashMap<Vertex, Vec<Vertex>> = Default::default();
    let mut exhausted: BTreeSet<Vertex> = BTreeSet::new();
    for _ in 0..samples {
        let s = random_vertex(g, &mut meter, rng).expect("graph is nonempty");
        let mut component: BTreeSet<Vertex> = BTreeSet::from([s]);
        let mut pending = vec![s];
        let mut small = true;
        while let Some(v) = pending.pop() {
            while !exhausted.contains(&v) {
                match oracle.query(v, &mut meter, rng) {
                    None => {
                        exhausted.insert(v);
                    }
                    Some(w) => discovered.entry(v).or_default().push(w),
                }
            }
            for &w in discovered.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
                if component.insert(w) {
                    pending.push(w);
                }
            }
            if component.len() > budget {
                small = false;
                break;
            }
        }
        if small && component.len() <= budget && component.len() < g.n() {
            return (Decision::Reject, meter);
        }
    }
    (Decision::Accept, meter)
}

/// Runs a `q`-query random-neighbor walk on the cycle C_n and returns the
/// empirical frequency of transcripts whose observed subgraph has maximum
/// degree at most 1, i.e. stays consistent with a perfect matching.
pub fn matching_indistinguishability(
    q: usize,
    n: usize,
    trials: u64,
    rng: &mut impl Rng,
) -> f64 {
    assert!(q >= 1 && n >= 4 && n.is_multiple_of(2));
    let g = crate::instances::cycle(n);
    let mut hits = 0u64;
    for _ in 0..trials {
        let mut meter = QueryMeter::new();
        let mut v = random_vertex(&g, &mut meter, rng).unwrap();
        let mut edges: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
        for _ in 0..q {
            let w = crate::oracle::random_neighbor(&g, v, &mut meter, rng).unwrap();
            edges.insert(crate::graph::norm_edge(v, w));
            v = w;
        }
        let mut deg: std::collections::HashMap<Vertex, usize> = std::collections::HashMap::new();
        for &(a, b) in &edges {
            *deg.entry(a).or_insert(0) += 1;
            *deg.entry(b).or_insert(0) += 1;
        }
        if deg.values().all(|&d| d <= 1) {
            hits += 1;
        }
    }
    hits as f64 / trials as f64
}
