//! Shadow graphs: simple near-planar stand-ins for a contracted hypergraph.
//!
//! For each surviving color the hypergraph construction is replayed with
//! plain edge contractions (always into the neighbor that will be contracted
//! first, or into a same-color neighbor), which keeps each per-color graph
//! planar whenever the host graph is. Their union, filtered down to pairs
//! actually adjacent in the hypergraph, reproduces the hypergraph's
//! neighborhood relation exactly.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{build_graph, norm_edge, Graph, Vertex};
use crate::pipeline::contracted::{copies_at_map, ContractedHypergraph};
use crate::pipeline::shrink::shrink_steps;
use crate::pipeline::PipelineError;
use crate::subgraph::CopySet;

/// A simple graph on an arbitrary vertex subset.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubGraph {
    adj: BTreeMap<Vertex, BTreeSet<Vertex>>,
}

impl SubGraph {
    pub fn with_vertices(vs: impl IntoIterator<Item = Vertex>) -> Self {
        SubGraph { adj: vs.into_iter().map(|v| (v, BTreeSet::new())).collect() }
    }

    pub fn insert_edge(&mut self, u: Vertex, v: Vertex) {
        if u == v {
            return;
        }
        self.adj.entry(u).or_default().insert(v);
        self.adj.entry(v).or_default().insert(u);
    }

    pub fn has_vertex(&self, v: Vertex) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj.get(&u).is_some_and(|s| s.contains(&v))
    }

    pub fn neighbors(&self, v: Vertex) -> Option<&BTreeSet<Vertex>> {
        self.adj.get(&v)
    }

    pub fn remove_vertex(&mut self, v: Vertex) {
        if let Some(ns) = self.adj.remove(&v) {
            for x in ns {
                self.adj.get_mut(&x).map(|s| s.remove(&v));
            }
        }
    }

    /// Contracts edge (u, w) into w: u's edges move to w, u disappears;
    /// parallel edges and the selfloop collapse away in the set model.
    pub fn contract_into(&mut self, u: Vertex, w: Vertex) {
        let ns = self.adj.remove(&u).unwrap_or_default();
        for x in ns {
            self.adj.get_mut(&x).map(|s| s.remove(&u));
            if x != w {
                self.adj.entry(x).or_default().insert(w);
                self.adj.entry(w).or_default().insert(x);
            }
        }
        self.adj.get_mut(&w).map(|s| s.remove(&u));
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.keys().copied()
    }

    pub fn edges(&self) -> BTreeSet<(Vertex, Vertex)> {
        let mut out = BTreeSet::new();
        for (&u, ns) in &self.adj {
            for &v in ns {
                out.insert(norm_edge(u, v));
            }
        }
        out
    }

    /// Slack in the planar edge bound: `3|V| - 6 - |E|`, or 0 where the
    /// bound is vacuous (|V| < 3).
    pub fn euler_margin(&self) -> i64 {
        if self.vertex_count() < 3 {
            return 0;
        }
        3 * self.vertex_count() as i64 - 6 - self.edge_count() as i64
    }

    pub fn satisfies_euler_bound(&self) -> bool {
        self.vertex_count() < 3 || self.edge_count() <= 3 * self.vertex_count() - 6
    }

    /// Compacts onto ids 1..k for the planarity checker.
    pub fn to_graph(&self) -> Graph {
        let verts: Vec<Vertex> = self.vertices().collect();
        let index: BTreeMap<Vertex, Vertex> = verts
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, (i + 1) as Vertex))
            .collect();
        let edges: Vec<(Vertex, Vertex)> =
            self.edges().into_iter().map(|(u, v)| (index[&u], index[&v])).collect();
        build_graph(verts.len(), &edges).expect("subgraph is simple")
    }
}

/// The per-color shadow graphs of a contracted hypergraph, their union, and
/// the union filtered to the hypergraph's exact neighborhood relation.
#[derive(Clone, Debug)]
pub struct ShadowGraph {
    pub per_color: Vec<(u8, SubGraph)>,
    pub union: SubGraph,
    pub shadow: SubGraph,
}

impl ShadowGraph {
    /// Soundness check: distinct vertices are adjacent in the shadow iff
    /// they are adjacent in the hypergraph.
    pub fn neighborhoods_match(&self, q: &ContractedHypergraph) -> bool {
        for v in q.non_isolated_vertices() {
            let expect = q.neighbors(v);
            match self.shadow.neighbors(v) {
                None => return false,
                Some(got) => {
                    if got != &expect {
                        return false;
                    }
                }
            }
        }
        // no stray vertices beyond the non-isolated ones
        self.shadow.vertex_count() == q.non_isolated_vertices().len()
    }
}

/// Builds the shadow of `q` by replaying the contraction chain for each
/// surviving color.
pub fn shadow(
    h: &Graph,
    d: &CopySet,
    q: &ContractedHypergraph,
) -> Result<ShadowGraph, PipelineError> {
    let chi = d.coloring.as_ref().ok_or(PipelineError::UncoloredCopySet)?;
    let prefix = &q.order_prefix;
    let steps = shrink_steps(h, prefix)?;
    let copies_at = copies_at_map(&d.copies);
    let position_in_prefix = |color: u8| prefix.iter().position(|&c| c == color);

    let base = {
        let mut s = SubGraph::default();
        for c in &d.copies {
            for &(u, v) in &c.edge_image {
                s.insert_edge(u, v);
            }
        }
        s
    };

    let surviving: Vec<u8> = (1..=h.n() as u8)
        .filter(|c| position_in_prefix(*c).is_none())
        .collect();

    let mut per_color = Vec::new();
    for &fr in &surviving {
        let mut gg = base.clone();
        for (idx, &step_color) in prefix.iter().enumerate() {
            let pattern = &steps[idx];
            let pattern_nbrs = pattern.neighbors_of(step_color);
            // contracted vertices of this step, ascending
            let mut us: Vec<Vertex> = copies_at
                .iter()
                .filter(|(&u, owners)| {
                    chi.of(u) == step_color
                        && owners.iter().any(|&ci| d.copies[ci].image(step_color) == u)
                })
                .map(|(&u, _)| u)
                .collect();
            us.sort_unstable();
            for u in us {
                // neighborhood of u in the level-(idx+1) hypergraph
                let mut gamma: BTreeSet<Vertex> = BTreeSet::new();
                for &ci in &copies_at[&u] {
                    for &a in &pattern_nbrs {
                        gamma.insert(d.copies[ci].image(a));
                    }
                }
                gamma.remove(&u);
                let lowest = gamma
                    .iter()
                    .copied()
                    .filter_map(|x| position_in_prefix(chi.of(x)).map(|p| (p, x)))
                    .min();
                let target = match lowest {
                    Some((_, w)) => Some(w),
                    None => gamma.iter().copied().find(|&x| chi.of(x) == fr),
                };
                match target {
                    Some(w) => {
                        if !gg.has_edge(u, w) {
                            return Err(PipelineError::ContractionEdgeMissing {
                                color: fr,
                                step: idx + 1,
                                u,
                                w,
                            });
                        }
                        gg.contract_into(u, w);
                    }
                    None => gg.remove_vertex(u),
                }
            }
        }
        per_color.push((fr, gg));
    }

    let mut union = SubGraph::default();
    for (_, gg) in &per_color {
        for v in gg.vertices() {
            union.adj.entry(v).or_default();
        }
        for (u, v) in gg.edges() {
            union.insert_edge(u, v);
        }
    }
    let mut filtered = SubGraph::with_vertices(union.vertices());
    for (u, v) in union.edges() {
        if q.neighbors(u).contains(&v) {
            filtered.insert_edge(u, v);
        }
    }
    Ok(ShadowGraph { per_color, union, shadow: filtered })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{complete, disjoint_copies, path};
    use crate::oracle::trial_rng;
    use crate::pipeline::contracted::build_q;
    use crate::subgraph::is_planar_small;

    #[test]
    fn shadow_at_level_one_is_the_union_graph() {
        let h = complete(3);
        let (g, d) = disjoint_copies(&h, 3, 2);
        let q = build_q(&g, &h, &d, &[]).unwrap();
        let s = shadow(&h, &d, &q).unwrap();
        assert_eq!(s.shadow.edges(), d.union_edges());
        // isolated pad vertices are not part of the shadow
        assert_eq!(s.shadow.vertex_count(), 9);
        assert!(s.neighborhoods_match(&q));
    }

    #[test]
    fn shadow_matches_neighborhoods_on_soups() {
        let h = path(3);
        for seed in 0..25 {
            let mut rng = trial_rng(seed, 0);
            let (g, d) = crate::brute::fuzz_copy_soup(&h, 6, 3, 1, &mut rng);
            for prefix in [&[][..], &[1][..], &[1, 3][..]] {
                let Ok(q) = build_q(&g, &h, &d, prefix) else { continue };
                let s = shadow(&h, &d, &q).unwrap();
                assert!(s.neighborhoods_match(&q), "seed {seed} prefix {prefix:?}");
                for (c, gg) in &s.per_color {
                    assert!(gg.satisfies_euler_bound(), "color {c} breaks Euler bound");
                    if gg.vertex_count() <= 10 {
                        assert!(is_planar_small(&gg.to_graph()).unwrap());
                    }
                }
            }
        }
    }
}
