//! Bounded-breadth bounded-depth exploration, rooted graphs, root-preserving
//! isomorphism, and the canonical tester runner.
//!
//! `traverse` is the randomized BFS at the heart of every tester here: each
//! frontier vertex asks the random-neighbor oracle `dg` times (with
//! replacement), the sampled vertices form the next level after removing
//! everything already visited, and the sampled edges are all kept.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use thiserror::Error;

use crate::graph::{norm_edge, Graph, Vertex};
use crate::oracle::{random_neighbor, random_vertex, QueryMeter};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExploreError {
    #[error("rooted graph has {0} vertices, isomorphism cap is {1}")]
    SizeLimit(usize, usize),
}

/// Output of one `traverse` run: disjoint levels `L_0..L_ld` and the sampled
/// edges per level. Edges to already-visited vertices are kept even though
/// the vertex is dropped from its later level.
#[derive(Clone, Debug)]
pub struct ExploredSubgraph {
    pub root: Vertex,
    pub levels: Vec<Vec<Vertex>>,
    pub level_edges: Vec<Vec<(Vertex, Vertex)>>,
    pub edge_set: BTreeSet<(Vertex, Vertex)>,
}

impl ExploredSubgraph {
    pub fn vertex_set(&self) -> BTreeSet<Vertex> {
        let mut out: BTreeSet<Vertex> = self.levels.iter().flatten().copied().collect();
        for &(u, v) in &self.edge_set {
            out.insert(u);
            out.insert(v);
        }
        out
    }

    /// The explored disc as a rooted graph (root always included, even when
    /// nothing was reachable).
    pub fn to_rooted(&self) -> RootedGraph {
        let mut verts = self.vertex_set();
        verts.insert(self.root);
        RootedGraph::new(
            verts.into_iter().collect(),
            self.edge_set.clone(),
            BTreeSet::from([self.root]),
        )
    }
}

/// Randomized bounded search from `v`: breadth `dg`, depth `ld`.
///
/// Every non-isolated frontier vertex costs exactly `dg` random-neighbor
/// queries; an isolated root costs none and yields an empty exploration.
pub fn traverse(
    g: &Graph,
    v: Vertex,
    dg: usize,
    ld: usize,
    meter: &mut QueryMeter,
    rng: &mut impl Rng,
) -> ExploredSubgraph {
    let mut visited: BTreeSet<Vertex> = BTreeSet::from([v]);
    let mut levels: Vec<Vec<Vertex>> = vec![vec![v]];
    let mut level_edges: Vec<Vec<(Vertex, Vertex)>> = Vec::new();
    let mut edge_set = BTreeSet::new();
    for _ in 1..=ld {
        let mut gamma: BTreeSet<Vertex> = BTreeSet::new();
        let mut edges: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
        for &u in levels.last().unwrap() {
            if g.degree(u) == 0 {
                continue;
            }
            for _ in 0..dg {
                let x = random_neighbor(g, u, meter, rng).expect("frontier vertex has neighbors");
                gamma.insert(x);
                edges.insert(norm_edge(u, x));
            }
        }
        let next: Vec<Vertex> = gamma.difference(&visited).copied().collect();
        visited.extend(next.iter().copied());
        levels.push(next);
        edge_set.extend(edges.iter().copied());
        level_edges.push(edges.into_iter().collect());
    }
    ExploredSubgraph { root: v, levels, level_edges, edge_set }
}

/// `traverse` from a uniformly random root (one extra random-vertex query).
pub fn rlbfs(
    g: &Graph,
    dg: usize,
    ld: usize,
    meter: &mut QueryMeter,
    rng: &mut impl Rng,
) -> ExploredSubgraph {
    let v = random_vertex(g, meter, rng).expect("graph is nonempty");
    traverse(g, v, dg, ld, meter, rng)
}

/// Query-count bound for one `rlbfs` run: `1 + sum_{i=1..ld} dg^i`, which for
/// `dg >= 2` is at most `1 + 2 dg^ld`.
pub fn rlbfs_query_bound(dg: usize, ld: usize) -> u64 {
    let mut total = 1u64;
    let mut pow = 1u64;
    for _ in 0..ld {
        pow = pow.saturating_mul(dg as u64);
        total = total.saturating_add(pow);
    }
    total
}

// ---------------------------------------------------------------------------
// Rooted graphs and root-preserving isomorphism
// ---------------------------------------------------------------------------

/// A graph on an arbitrary vertex subset with some vertices marked as roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedGraph {
    vertices: Vec<Vertex>,
    edges: BTreeSet<(Vertex, Vertex)>,
    roots: BTreeSet<Vertex>,
    adj: BTreeMap<Vertex, BTreeSet<Vertex>>,
}

impl RootedGraph {
    pub fn new(
        mut vertices: Vec<Vertex>,
        edges: BTreeSet<(Vertex, Vertex)>,
        roots: BTreeSet<Vertex>,
    ) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        let vset: BTreeSet<Vertex> = vertices.iter().copied().collect();
        assert!(roots.iter().all(|r| vset.contains(r)), "roots must be vertices");
        let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> =
            vertices.iter().map(|&v| (v, BTreeSet::new())).collect();
        for &(u, v) in &edges {
            assert!(vset.contains(&u) && vset.contains(&v), "edge endpoints must be vertices");
            adj.get_mut(&u).unwrap().insert(v);
            adj.get_mut(&v).unwrap().insert(u);
        }
        RootedGraph { vertices, edges, roots, adj }
    }

    pub fn from_graph(g: &Graph, roots: impl IntoIterator<Item = Vertex>) -> Self {
        RootedGraph::new(
            g.vertices().collect(),
            g.edge_set(),
            roots.into_iter().collect(),
        )
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(Vertex, Vertex)> {
        &self.edges
    }

    pub fn roots(&self) -> &BTreeSet<Vertex> {
        &self.roots
    }

    pub fn is_root(&self, v: Vertex) -> bool {
        self.roots.contains(&v)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[&v].len()
    }

    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.adj.get(&u).is_some_and(|s| s.contains(&v))
    }
}

/// Default vertex cap for the backtracking isomorphism search.
pub const ISO_SIZE_CAP: usize = 64;

/// Decides existence of a bijection preserving adjacency, non-adjacency, and
/// rootness. Backtracking with (is-root, degree) class pruning.
pub fn root_preserving_isomorphic(a: &RootedGraph, b: &RootedGraph) -> Result<bool, ExploreError> {
    root_preserving_isomorphic_with_cap(a, b, ISO_SIZE_CAP)
}

pub fn root_preserving_isomorphic_with_cap(
    a: &RootedGraph,
    b: &RootedGraph,
    cap: usize,
) -> Result<bool, ExploreError> {
    let n = a.vertices.len();
    if n > cap || b.vertices.len() > cap {
        return Err(ExploreError::SizeLimit(n.max(b.vertices.len()), cap));
    }
    if n != b.vertices.len()
        || a.edges.len() != b.edges.len()
        || a.roots.len() != b.roots.len()
    {
        return Ok(false);
    }
    let sig = |g: &RootedGraph| {
        let mut s: Vec<(bool, usize)> =
            g.vertices.iter().map(|&v| (g.is_root(v), g.degree(v))).collect();
        s.sort_unstable();
        s
    };
    if sig(a) != sig(b) {
        return Ok(false);
    }

    // Match high-degree roots first to fail fast.
    let mut order: Vec<Vertex> = a.vertices.clone();
    order.sort_by_key(|&v| (!a.is_root(v), usize::MAX - a.degree(v), v));

    fn rec(
        a: &RootedGraph,
        b: &RootedGraph,
        order: &[Vertex],
        depth: usize,
        map: &mut BTreeMap<Vertex, Vertex>,
        used: &mut BTreeSet<Vertex>,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let va = order[depth];
        for &vb in &b.vertices {
            if used.contains(&vb)
                || a.is_root(va) != b.is_root(vb)
                || a.degree(va) != b.degree(vb)
            {
                continue;
            }
            let consistent = map.iter().all(|(&ua, &ub)| {
                a.adjacent(va, ua) == b.adjacent(vb, ub)
            });
            if !consistent {
                continue;
            }
            map.insert(va, vb);
            used.insert(vb);
            if rec(a, b, order, depth + 1, map, used) {
                return true;
            }
            map.remove(&va);
            used.remove(&vb);
        }
        false
    }
    Ok(rec(a, b, &order, 0, &mut BTreeMap::new(), &mut BTreeSet::new()))
}

// ---------------------------------------------------------------------------
// Canonical tester
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicalDecision {
    Accept,
    Reject,
}

/// Outcome of a canonical tester run; the explored rooted union is retained
/// so the decision can be replayed from the transcript.
#[derive(Clone, Debug)]
pub struct CanonicalOutcome {
    pub decision: CanonicalDecision,
    pub explored: RootedGraph,
    /// Index of the matched forbidden member on reject.
    pub matched: Option<usize>,
}

/// Samples `qprime` roots, explores a `(qprime, qprime)`-bounded disc from
/// each, and rejects iff the rooted union is root-preserving isomorphic to a
/// member of `forbidden`.
pub fn canonical_tester(
    g: &Graph,
    qprime: usize,
    forbidden: &[RootedGraph],
    meter: &mut QueryMeter,
    rng: &mut impl Rng,
) -> Result<CanonicalOutcome, ExploreError> {
    assert!(qprime >= 1, "need at least one sample");
    let mut verts: BTreeSet<Vertex> = BTreeSet::new();
    let mut edges: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let mut roots: BTreeSet<Vertex> = BTreeSet::new();
    for _ in 0..qprime {
        let v = random_vertex(g, meter, rng).expect("graph is nonempty");
        roots.insert(v);
        let disc = traverse(g, v, qprime, qprime, meter, rng);
        verts.extend(disc.vertex_set());
        verts.insert(v);
        edges.extend(disc.edge_set.iter().copied());
    }
    let explored = RootedGraph::new(verts.into_iter().collect(), edges, roots);
    for (i, q) in forbidden.iter().enumerate() {
        if root_preserving_isomorphic(&explored, q)? {
            return Ok(CanonicalOutcome {
                decision: CanonicalDecision::Reject,
                explored,
                matched: Some(i),
            });
        }
    }
    Ok(CanonicalOutcome { decision: CanonicalDecision::Accept, explored, matched: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::instances::{complete, cycle, disjoint_copies, grid, path};
    use crate::oracle::trial_rng;
    use crate::stats::within_4_sigma;

    #[test]
    fn single_edge_exploration() {
        let g = build_graph(2, &[(1, 2)]).unwrap();
        let mut meter = QueryMeter::new();
        let mut rng = trial_rng(1, 0);
        let ex = traverse(&g, 1, 3, 1, &mut meter, &mut rng);
        assert_eq!(ex.edge_set, BTreeSet::from([(1, 2)]));
        assert_eq!(meter.random_neighbor, 3);
    }

    #[test]
    fn isolated_root_is_empty_and_free() {
        let g = build_graph(3, &[(2, 3)]).unwrap();
        let mut meter = QueryMeter::new();
        let mut rng = trial_rng(1, 0);
        let ex = traverse(&g, 1, 4, 3, &mut meter, &mut rng);
        assert!(ex.edge_set.is_empty());
        assert_eq!(meter.random_neighbor, 0);
        assert_eq!(ex.to_rooted().vertices(), &[1]);
    }

    #[test]
    fn levels_disjoint_and_bounded() {
        let g = grid(5, 5);
        for seed in 0..50 {
            let mut meter = QueryMeter::new();
            let mut rng = trial_rng(seed, 0);
            let (dg, ld) = (3, 3);
            let ex = rlbfs(&g, dg, ld, &mut meter, &mut rng);
            let mut seen = BTreeSet::new();
            for level in &ex.levels {
                for &v in level {
                    assert!(seen.insert(v), "levels must be disjoint");
                }
            }
            // every level-l edge touches the previous level
            for (l, edges) in ex.level_edges.iter().enumerate() {
                let prev: BTreeSet<Vertex> = ex.levels[l].iter().copied().collect();
                for &(u, v) in edges {
                    assert!(prev.contains(&u) || prev.contains(&v));
                }
            }
            let bound: usize = (1..=ld).map(|i| dg.pow(i as u32)).sum();
            assert!(ex.edge_set.len() <= bound);
            assert!(seen.len() <= 1 + bound);
            assert!(meter.total() <= rlbfs_query_bound(dg, ld));
            assert!(meter.total() <= 1 + 2 * (dg as u64).pow(ld as u32));
        }
    }

    #[test]
    fn same_seed_same_transcript() {
        let g = grid(4, 4);
        let run = |seed| {
            let mut meter = QueryMeter::new();
            let mut rng = trial_rng(seed, 0);
            let ex = rlbfs(&g, 2, 3, &mut meter, &mut rng);
            (ex.root, ex.levels.clone(), ex.edge_set.clone(), meter)
        };
        assert_eq!(run(12), run(12));
    }

    #[test]
    fn deeper_run_extends_shallow_run() {
        let g = grid(4, 4);
        for seed in 0..30 {
            let mut m1 = QueryMeter::new();
            let mut m2 = QueryMeter::new();
            let mut r1 = trial_rng(seed, 0);
            let mut r2 = trial_rng(seed, 0);
            let shallow = traverse(&g, 1, 2, 2, &mut m1, &mut r1);
            let deep = traverse(&g, 1, 2, 3, &mut m2, &mut r2);
            assert!(shallow.edge_set.is_subset(&deep.edge_set));
            assert_eq!(shallow.levels[..3], deep.levels[..3]);
        }
    }

    #[test]
    fn triangle_full_exploration_rate_matches_enumeration() {
        // oracle: exhaustive enumeration of the finite choice tree
        let g = complete(3);
        let p_exact = crate::brute::traverse_outcome_probability(&g, 1, 2, 2, |edges| {
            edges.len() == 3
        });
        let trials = 100_000u64;
        let mut hits = 0;
        for t in 0..trials {
            let mut meter = QueryMeter::new();
            let mut rng = trial_rng(77, t);
            let ex = traverse(&g, 1, 2, 2, &mut meter, &mut rng);
            if ex.edge_set.len() == 3 {
                hits += 1;
            }
        }
        assert!(within_4_sigma(hits, trials, p_exact));
    }

    #[test]
    fn rlbfs_nonisolated_root_rate() {
        let h = complete(3);
        let (g, _) = disjoint_copies(&h, 2, 4); // 6 copy vertices, 4 isolated
        let trials = 50_000u64;
        let mut hits = 0;
        for t in 0..trials {
            let mut meter = QueryMeter::new();
            let mut rng = trial_rng(5, t);
            let ex = rlbfs(&g, 2, 1, &mut meter, &mut rng);
            if !ex.edge_set.is_empty() {
                hits += 1;
            }
        }
        assert!(within_4_sigma(hits, trials, 6.0 / 10.0));
    }

    #[test]
    fn iso_identical_paths() {
        let p = path(4);
        let a = RootedGraph::from_graph(&p, [1]);
        let b = RootedGraph::from_graph(&p, [1]);
        assert!(root_preserving_isomorphic(&a, &b).unwrap());
        // same graph, root moved to the other end: still isomorphic
        let c = RootedGraph::from_graph(&p, [4]);
        assert!(root_preserving_isomorphic(&a, &c).unwrap());
        // root in the middle is not
        let d = RootedGraph::from_graph(&p, [2]);
        assert!(!root_preserving_isomorphic(&a, &d).unwrap());
    }

    #[test]
    fn iso_root_cardinality_mismatch() {
        let p = path(3);
        let a = RootedGraph::from_graph(&p, [1]);
        let b = RootedGraph::from_graph(&p, [1, 3]);
        assert!(!root_preserving_isomorphic(&a, &b).unwrap());
    }

    #[test]
    fn iso_c4_adjacent_vs_opposite_roots() {
        let c = cycle(4);
        let adj = RootedGraph::from_graph(&c, [1, 2]);
        let opp = RootedGraph::from_graph(&c, [1, 3]);
        assert!(!root_preserving_isomorphic(&adj, &opp).unwrap());
        let adj2 = RootedGraph::from_graph(&c, [2, 3]);
        assert!(root_preserving_isomorphic(&adj, &adj2).unwrap());
    }

    #[test]
    fn iso_cap_enforced() {
        let g = grid(9, 9);
        let a = RootedGraph::from_graph(&g, [1]);
        assert!(matches!(
            root_preserving_isomorphic(&a, &a),
            Err(ExploreError::SizeLimit(81, ISO_SIZE_CAP))
        ));
    }

    #[test]
    fn canonical_tester_empty_family_accepts() {
        let g = grid(3, 3);
        for seed in 0..20 {
            let mut meter = QueryMeter::new();
            let mut rng = trial_rng(seed, 0);
            let out = canonical_tester(&g, 2, &[], &mut meter, &mut rng).unwrap();
            assert_eq!(out.decision, CanonicalDecision::Accept);
        }
    }

    #[test]
    fn canonical_tester_single_edge_always_rejects() {
        // Any root of the single edge explores the whole edge at q' = 1, so
        // the rooted single edge is always found.
        let g = build_graph(2, &[(1, 2)]).unwrap();
        let forbidden = vec![RootedGraph::new(
            vec![1, 2],
            BTreeSet::from([(1, 2)]),
            BTreeSet::from([1]),
        )];
        for seed in 0..50 {
            let mut meter = QueryMeter::new();
            let mut rng = trial_rng(seed, 0);
            let out = canonical_tester(&g, 1, &forbidden, &mut meter, &mut rng).unwrap();
            assert_eq!(out.decision, CanonicalDecision::Reject);
            // replaying the isomorphism on the stored transcript agrees
            assert!(root_preserving_isomorphic(&out.explored, &forbidden[0]).unwrap());
        }
    }
}
