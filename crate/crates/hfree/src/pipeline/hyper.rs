//! Bounded exploration of contracted hypergraphs and detection of shrunk
//! pattern copies inside the explored hyperedges.
//!
//! The start vertex is drawn uniformly from the full host vertex set and
//! then pushed through a representative map, so a hypergraph vertex is hit
//! with probability proportional to how many vertices it represents.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use crate::graph::{Coloring, Vertex};
use crate::oracle::QueryMeter;
use crate::pipeline::contracted::ContractedHypergraph;
use crate::pipeline::shrink::ShrunkPattern;

/// Transcript of one hypergraph exploration.
#[derive(Clone, Debug)]
pub struct HyperExploration {
    /// The raw uniformly drawn vertex.
    pub start_raw: Vertex,
    /// Its representative, the actual exploration root.
    pub start: Vertex,
    pub levels: Vec<Vec<Vertex>>,
    /// Indices into `q.edges` of all drawn hyperedges.
    pub edges: BTreeSet<usize>,
}

/// Bounded-breadth bounded-depth exploration of a contracted hypergraph:
/// every frontier vertex draws `dg` incident hyperedges (with replacement,
/// uniform over multiplicity) and all their vertices join the next level.
pub fn hrlbfs(
    q: &ContractedHypergraph,
    rep: &[Vertex],
    dg: usize,
    ld: usize,
    meter: &mut QueryMeter,
    rng: &mut impl Rng,
) -> HyperExploration {
    assert_eq!(rep.len(), q.n, "representative map must cover the host vertex set");
    meter.random_vertex += 1;
    let start_raw = rng.gen_range(1..=q.n as Vertex);
    let start = rep[(start_raw - 1) as usize];
    let mut levels = vec![vec![start]];
    let mut edges = BTreeSet::new();
    if !q.has_vertex(start) {
        return HyperExploration { start_raw, start, levels, edges };
    }
    let mut visited = BTreeSet::from([start]);
    for _ in 1..=ld {
        let mut gamma: BTreeSet<Vertex> = BTreeSet::new();
        for &u in levels.last().unwrap() {
            let incident = q.incident_edges(u);
            if incident.is_empty() {
                continue;
            }
            for _ in 0..dg {
                meter.random_neighbor += 1;
                let ei = incident[rng.gen_range(0..incident.len())];
                edges.insert(ei);
                gamma.extend(q.edges[ei].vertices.iter().copied());
            }
        }
        let next: Vec<Vertex> = gamma.difference(&visited).copied().collect();
        visited.extend(next.iter().copied());
        levels.push(next);
    }
    HyperExploration { start_raw, start, levels, edges }
}

/// A detected copy of a shrunk pattern: one host vertex per surviving
/// pattern vertex plus, per pattern edge, an explored hyperedge that
/// corresponds to it under that assignment.
#[derive(Clone, Debug)]
pub struct HyperWitness {
    /// (pattern vertex, host vertex) pairs, ascending in the pattern vertex.
    pub assignment: Vec<(u8, Vertex)>,
    /// Chosen explored edge per pattern edge, aligned with `pattern.edges`.
    pub edge_choice: Vec<usize>,
}

/// Detection: does the explored hyperedge set contain a colored copy of the
/// shrunk pattern? An explored edge matches a pattern edge when its vertex
/// colors and its label colors both agree; the per-color host vertices must
/// be consistent across all matched edges.
pub fn find_pattern_copy(
    q: &ContractedHypergraph,
    pattern: &ShrunkPattern,
    chi: &Coloring,
    explored: &BTreeSet<usize>,
) -> Option<HyperWitness> {
    let keys: Vec<(BTreeSet<u8>, BTreeSet<u8>)> = pattern
        .edges
        .iter()
        .map(|pe| {
            (
                pe.vertices.iter().copied().collect(),
                pe.label.iter().copied().collect(),
            )
        })
        .collect();
    let candidates: Vec<Vec<usize>> = keys
        .iter()
        .map(|(vcolors, lcolors)| {
            explored
                .iter()
                .copied()
                .filter(|&ei| {
                    let e = &q.edges[ei];
                    let ec: BTreeSet<u8> = e.vertices.iter().map(|&v| chi.of(v)).collect();
                    ec == *vcolors && e.colored_label(chi) == *lcolors
                })
                .collect()
        })
        .collect();
    fn rec(
        q: &ContractedHypergraph,
        chi: &Coloring,
        candidates: &[Vec<usize>],
        idx: usize,
        assign: &mut BTreeMap<u8, Vertex>,
        choice: &mut Vec<usize>,
    ) -> bool {
        if idx == candidates.len() {
            return true;
        }
        'next: for &ei in &candidates[idx] {
            let e = &q.edges[ei];
            let mut added: Vec<u8> = Vec::new();
            for &v in &e.vertices {
                let c = chi.of(v);
                match assign.get(&c) {
                    Some(&x) if x != v => {
                        for c in added.drain(..) {
                            assign.remove(&c);
                        }
                        continue 'next;
                    }
                    Some(_) => {}
                    None => {
                        assign.insert(c, v);
                        added.push(c);
                    }
                }
            }
            choice.push(ei);
            if rec(q, chi, candidates, idx + 1, assign, choice) {
                return true;
            }
            choice.pop();
            for c in added {
                assign.remove(&c);
            }
        }
        false
    }
    let mut assign = BTreeMap::new();
    let mut choice = Vec::new();
    if rec(q, chi, &candidates, 0, &mut assign, &mut choice) {
        Some(HyperWitness {
            assignment: assign.into_iter().collect(),
            edge_choice: choice,
        })
    } else {
        None
    }
}

/// Replays a witness against the detection conditions from scratch;
/// independent of the search path that produced it.
pub fn verify_hyper_witness(
    q: &ContractedHypergraph,
    pattern: &ShrunkPattern,
    chi: &Coloring,
    explored: &BTreeSet<usize>,
    w: &HyperWitness,
) -> bool {
    let assign: BTreeMap<u8, Vertex> = w.assignment.iter().copied().collect();
    if w.edge_choice.len() != pattern.edges.len() {
        return false;
    }
    // every surviving pattern vertex covered by an edge must be assigned
    for (pe, &ei) in pattern.edges.iter().zip(&w.edge_choice) {
        if !explored.contains(&ei) {
            return false;
        }
        let e = &q.edges[ei];
        let mut expect: BTreeSet<Vertex> = BTreeSet::new();
        for c in &pe.vertices {
            match assign.get(c) {
                Some(&v) => {
                    expect.insert(v);
                }
                None => return false,
            }
        }
        let got: BTreeSet<Vertex> = e.vertices.iter().copied().collect();
        if expect != got {
            return false;
        }
        if e.colored_label(chi) != pe.label.iter().copied().collect::<BTreeSet<u8>>() {
            return false;
        }
    }
    // assigned vertices carry the right colors and are distinct
    let mut seen = BTreeSet::new();
    for &(c, v) in &w.assignment {
        if chi.of(v) != c || !seen.insert(v) {
            return false;
        }
    }
    true
}

/// One exploration plus detection round on a hypergraph: rejects (returns a
/// witness) iff the explored hyperedges contain a copy of the pattern.
#[allow(clippy::too_many_arguments)]
pub fn hrlbd(
    q: &ContractedHypergraph,
    rep: &[Vertex],
    pattern: &ShrunkPattern,
    chi: &Coloring,
    dg: usize,
    ld: usize,
    meter: &mut QueryMeter,
    rng: &mut impl Rng,
) -> Option<HyperWitness> {
    let ex = hrlbfs(q, rep, dg, ld, meter, rng);
    let w = find_pattern_copy(q, pattern, chi, &ex.edges);
    debug_assert!(w
        .as_ref()
        .is_none_or(|w| verify_hyper_witness(q, pattern, chi, &ex.edges, w)));
    w
}
