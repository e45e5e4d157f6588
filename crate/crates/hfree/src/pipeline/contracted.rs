//! Contracted hypergraphs: the shrinking of a pattern mirrored on every copy
//! of an edge-disjoint colored copy set, with safety verified at each step.

use std::collections::{BTreeSet, HashMap};

use crate::graph::{Coloring, Graph, Vertex};
use crate::pipeline::shrink::{shrink_steps, ShrunkPattern};
use crate::pipeline::PipelineError;
use crate::subgraph::{CopyEmbedding, CopySet};

/// One hyperedge of a contracted hypergraph, over host-graph vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QEdge {
    pub id: u32,
    /// Sorted, nonempty vertex set.
    pub vertices: Vec<Vertex>,
    /// Sorted set of contracted host vertices this edge stands for.
    pub label: Vec<Vertex>,
    /// Index of the copy this edge came from.
    pub copy: u32,
    /// Id of the corresponding pattern edge in the shrunk pattern.
    pub pattern_edge: u32,
}

impl QEdge {
    pub fn is_selfloop(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn colored_label(&self, chi: &Coloring) -> BTreeSet<u8> {
        self.label.iter().map(|&v| chi.of(v)).collect()
    }
}

/// The hypergraph mirroring `M_i` on every copy of a copy set: vertices are
/// the host vertices whose colors were not contracted, hyperedges are the
/// per-copy images of the pattern edges.
#[derive(Clone, Debug)]
pub struct ContractedHypergraph {
    /// 1-based level; level 1 is the copy-union graph itself.
    pub level: usize,
    /// Host vertex count.
    pub n: usize,
    /// Contracted pattern vertices (equivalently colors), in order.
    pub order_prefix: Vec<u8>,
    /// Sorted surviving vertices.
    pub vertices: Vec<Vertex>,
    pub edges: Vec<QEdge>,
    incident: HashMap<Vertex, Vec<usize>>,
}

impl ContractedHypergraph {
    pub fn has_vertex(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Incident edge indices, in a canonical order (by vertex set, label,
    /// then copy), counting multiplicity.
    pub fn incident_edges(&self, v: Vertex) -> &[usize] {
        self.incident.get(&v).map_or(&[], Vec::as_slice)
    }

    /// Degree = number of incident hyperedges counting multiplicity.
    pub fn degree(&self, v: Vertex) -> usize {
        self.incident_edges(v).len()
    }

    pub fn is_isolated(&self, v: Vertex) -> bool {
        self.degree(v) == 0
    }

    /// Neighbors across all incident edges, excluding `v`.
    pub fn neighbors(&self, v: Vertex) -> BTreeSet<Vertex> {
        let mut out = BTreeSet::new();
        for &i in self.incident_edges(v) {
            out.extend(self.edges[i].vertices.iter().copied());
        }
        out.remove(&v);
        out
    }

    /// Distinct-neighbor count, where an incident selfloop contributes the
    /// vertex itself as one more neighbor.
    pub fn distinct_neighbor_count(&self, v: Vertex) -> usize {
        let selfloop = self
            .incident_edges(v)
            .iter()
            .any(|&i| self.edges[i].vertices == [v]);
        self.neighbors(v).len() + usize::from(selfloop)
    }

    pub fn non_isolated_vertices(&self) -> Vec<Vertex> {
        self.vertices.iter().copied().filter(|&v| !self.is_isolated(v)).collect()
    }
}

fn canonical_incident(edges: &[QEdge]) -> HashMap<Vertex, Vec<usize>> {
    let mut incident: HashMap<Vertex, Vec<usize>> = HashMap::new();
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by(|&a, &b| {
        let ea = &edges[a];
        let eb = &edges[b];
        (&ea.vertices, &ea.label, ea.copy, ea.id).cmp(&(&eb.vertices, &eb.label, eb.copy, eb.id))
    });
    for i in order {
        for &v in &edges[i].vertices {
            incident.entry(v).or_default().push(i);
        }
    }
    incident
}

/// Per-copy neighbor set of a vertex at a given shrink level: the image of
/// the pattern-level neighborhood of the vertex's color.
fn copy_neighbors(copy: &CopyEmbedding, pattern: &ShrunkPattern, color: u8) -> BTreeSet<Vertex> {
    pattern
        .neighbors_of(color)
        .into_iter()
        .map(|a| copy.image(a))
        .collect()
}

/// Map from vertex to the copies whose image contains it.
pub(crate) fn copies_at_map(copies: &[CopyEmbedding]) -> HashMap<Vertex, Vec<usize>> {
    let mut out: HashMap<Vertex, Vec<usize>> = HashMap::new();
    for (i, c) in copies.iter().enumerate() {
        for &v in &c.vertex_map {
            out.entry(v).or_default().push(i);
        }
    }
    out
}

fn require_coloring(d: &CopySet) -> Result<&Coloring, PipelineError> {
    d.coloring.as_ref().ok_or(PipelineError::UncoloredCopySet)
}

/// Verifies that every contraction step along `prefix` is safe for `d`:
/// any vertex of the contracted color shared by several copies must have the
/// same per-copy neighborhood at that step.
fn verify_chain(
    d: &CopySet,
    prefix: &[u8],
    steps: &[ShrunkPattern],
) -> Result<(), PipelineError> {
    let copies_at = copies_at_map(&d.copies);
    for (idx, &color) in prefix.iter().enumerate() {
        let pattern = &steps[idx];
        for (&u, owners) in &copies_at {
            // Only vertices playing role `color` get contracted at this step.
            let at_color: Vec<usize> = owners
                .iter()
                .copied()
                .filter(|&ci| d.copies[ci].image(color) == u)
                .collect();
            if at_color.len() < 2 {
                continue;
            }
            let first = copy_neighbors(&d.copies[at_color[0]], pattern, color);
            for &ci in &at_color[1..] {
                if copy_neighbors(&d.copies[ci], pattern, color) != first {
                    return Err(PipelineError::UnsafeContraction {
                        step: idx + 1,
                        vertex: u,
                        copy_a: at_color[0],
                        copy_b: ci,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Builds the contracted hypergraph of `d` after contracting `prefix`,
/// checking that every intermediate contraction was safe.
///
/// The construction is per copy: each copy is shrunk independently and the
/// results are combined; vertices of contracted colors disappear.
pub fn build_q(
    g: &Graph,
    h: &Graph,
    d: &CopySet,
    prefix: &[u8],
) -> Result<ContractedHypergraph, PipelineError> {
    let chi = require_coloring(d)?;
    assert_eq!(chi.len(), g.n(), "coloring must cover the host graph");
    let steps = shrink_steps(h, prefix)?;
    verify_chain(d, prefix, &steps)?;
    let pattern = steps.last().unwrap();
    let mut edges = Vec::new();
    let mut id = 0u32;
    for (ci, copy) in d.copies.iter().enumerate() {
        for pe in &pattern.edges {
            let mut vertices: Vec<Vertex> =
                pe.vertices.iter().map(|&a| copy.image(a)).collect();
            vertices.sort_unstable();
            let mut label: Vec<Vertex> = pe.label.iter().map(|&a| copy.image(a)).collect();
            label.sort_unstable();
            edges.push(QEdge { id, vertices, label, copy: ci as u32, pattern_edge: pe.id });
            id += 1;
        }
    }
    let contracted: BTreeSet<u8> = prefix.iter().copied().collect();
    let vertices: Vec<Vertex> = g
        .vertices()
        .filter(|&v| !contracted.contains(&chi.of(v)))
        .collect();
    let incident = canonical_incident(&edges);
    Ok(ContractedHypergraph {
        level: prefix.len() + 1,
        n: g.n(),
        order_prefix: prefix.to_vec(),
        vertices,
        edges,
        incident,
    })
}

/// Whether all copies of `d` containing `u` induce the same neighbor set of
/// `u` in `q`. Vacuously true for vertices in at most one copy.
pub fn is_safe(u: Vertex, d: &CopySet, q: &ContractedHypergraph) -> bool {
    let mut per_copy: HashMap<u32, BTreeSet<Vertex>> = HashMap::new();
    for &i in q.incident_edges(u) {
        let e = &q.edges[i];
        per_copy
            .entry(e.copy)
            .or_default()
            .extend(e.vertices.iter().copied().filter(|&x| x != u));
    }
    debug_assert!(per_copy.len() <= d.len());
    let mut values = per_copy.values();
    match values.next() {
        None => true,
        Some(first) => values.all(|s| s == first),
    }
}

/// Whether the whole contraction chain leading to `prefix` is safe for `d`.
pub fn is_consistent(g: &Graph, h: &Graph, d: &CopySet, prefix: &[u8]) -> bool {
    build_q(g, h, d, prefix).is_ok()
}
