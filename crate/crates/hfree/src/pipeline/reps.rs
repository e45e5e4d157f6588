//! Representative functions: where a contracted vertex "lives on" inside the
//! shrinking hypergraphs.
//!
//! A contracted vertex is mapped to the neighbor that gets contracted first
//! (lowest position in the order); following that chain keeps every
//! representative inside the current hypergraph, on a hyperedge whose label
//! still carries the original vertex.

use std::collections::BTreeSet;

use crate::graph::{Graph, Vertex};
use crate::pipeline::contracted::{build_q, copies_at_map};
use crate::pipeline::shrink::shrink_steps;
use crate::pipeline::PipelineError;
use crate::subgraph::CopySet;

/// The maps `P_1 ..= P_h`, each total on the host vertex set.
#[derive(Clone, Debug)]
pub struct RepresentativeFunctions {
    maps: Vec<Vec<Vertex>>,
}

impl RepresentativeFunctions {
    /// `P_i(u)` for 1-based `i`.
    pub fn at(&self, i: usize, u: Vertex) -> Vertex {
        self.maps[i - 1][(u - 1) as usize]
    }

    /// The full map `P_i` as a slice indexed by `u - 1`.
    pub fn map(&self, i: usize) -> &[Vertex] {
        &self.maps[i - 1]
    }

    pub fn levels(&self) -> usize {
        self.maps.len()
    }

    /// Number of starting vertices represented by `u` at level `i`.
    pub fn preimage_size(&self, i: usize, u: Vertex) -> usize {
        self.maps[i - 1].iter().filter(|&&x| x == u).count()
    }

    /// Checks the defining invariants against the copy set and the
    /// contraction chain.
    pub fn validate(
        &self,
        g: &Graph,
        h: &Graph,
        d: &CopySet,
        order: &[u8],
    ) -> Result<(), String> {
        let copies_at = copies_at_map(&d.copies);
        for u in g.vertices() {
            if self.at(1, u) != u {
                return Err(format!("P_1({u}) != {u}"));
            }
            let isolated = !copies_at.contains_key(&u);
            for i in 1..=self.levels() {
                let p = self.at(i, u);
                if isolated && p != u {
                    return Err(format!("isolated vertex {u} moved at level {i}"));
                }
                if !isolated {
                    let q = build_q(g, h, d, &order[..i - 1]).map_err(|e| e.to_string())?;
                    if q.has_vertex(u) {
                        if p != u {
                            return Err(format!("P_{i}({u}) != {u} but {u} is a vertex"));
                        }
                    } else {
                        if !q.has_vertex(p) {
                            return Err(format!("P_{i}({u}) = {p} is not a vertex"));
                        }
                        let carried = q
                            .incident_edges(p)
                            .iter()
                            .any(|&ei| q.edges[ei].label.contains(&u));
                        if !carried {
                            return Err(format!(
                                "no hyperedge at P_{i}({u}) = {p} carries {u} in its label"
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Builds the canonical representative functions for a full contraction
/// order under which every level is consistent for `d`.
pub fn representatives(
    g: &Graph,
    h: &Graph,
    d: &CopySet,
    order: &[u8],
) -> Result<RepresentativeFunctions, PipelineError> {
    let chi = d.coloring.as_ref().ok_or(PipelineError::UncoloredCopySet)?;
    if order.len() != h.n() {
        return Err(PipelineError::InvalidOrder("need the full contraction order".into()));
    }
    let steps = shrink_steps(h, &order[..h.n() - 1])?;
    let copies_at = copies_at_map(&d.copies);
    let position = |color: u8| order.iter().position(|&c| c == color).unwrap_or(usize::MAX);

    let n = g.n();
    let mut maps: Vec<Vec<Vertex>> = Vec::with_capacity(h.n());
    maps.push((1..=n as Vertex).collect());
    for i in 2..=h.n() {
        let prev_color = order[i - 2];
        let pattern = &steps[i - 2]; // M_{i-1}
        let pattern_nbrs = pattern.neighbors_of(prev_color);
        let mut map = maps.last().unwrap().clone();
        for u in 1..=n as Vertex {
            if !copies_at.contains_key(&u) {
                continue; // isolated in the copy union: fixed point forever
            }
            let surviving = position(chi.of(u)) >= i - 1;
            if surviving {
                debug_assert_eq!(map[(u - 1) as usize], u);
                continue;
            }
            let p = map[(u - 1) as usize];
            if chi.of(p) != prev_color {
                continue;
            }
            // p is contracted at this step; move to its lowest-order neighbor
            let p_owners = copies_at.get(&p).ok_or_else(|| {
                PipelineError::PreconditionViolated(format!(
                    "representative {p} of {u} is isolated"
                ))
            })?;
            let mut gamma: BTreeSet<Vertex> = BTreeSet::new();
            for &ci in p_owners {
                for &a in &pattern_nbrs {
                    gamma.insert(d.copies[ci].image(a));
                }
            }
            gamma.remove(&p);
            let next = gamma
                .into_iter()
                .map(|x| (position(chi.of(x)), x))
                .min()
                .ok_or_else(|| {
                    PipelineError::PreconditionViolated(format!(
                        "contracted vertex {p} has no remaining neighbor"
                    ))
                })?
                .1;
            map[(u - 1) as usize] = next;
        }
        maps.push(map);
    }
    Ok(RepresentativeFunctions { maps })
}
