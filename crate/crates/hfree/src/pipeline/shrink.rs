//! Shrinking a pattern into a sequence of labeled hypergraphs.
//!
//! Contracting a vertex removes it with its incident edges and adds one
//! hyperedge over its neighbor set whose label collects the contracted
//! vertex and the labels of everything it absorbed. After all but one vertex
//! is contracted, only selfloops on the last vertex remain and their labels
//! partition the contracted vertices.

use std::collections::BTreeSet;

use crate::graph::Graph;
use crate::pipeline::PipelineError;

/// An edge of a shrunk pattern, over pattern vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternEdge {
    pub id: u32,
    /// Sorted, nonempty vertex set; a single vertex is a selfloop.
    pub vertices: Vec<u8>,
    /// Sorted set of contracted pattern vertices this edge stands for;
    /// empty for original edges. Labels of distinct edges are disjoint.
    pub label: Vec<u8>,
    /// Ids of the previous level's edges this edge replaced (empty if the
    /// edge survived unchanged from the original pattern).
    pub modeled_by: Vec<u32>,
}

impl PatternEdge {
    pub fn is_selfloop(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn contains(&self, v: u8) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

/// The pattern after `level - 1` contractions: vertices are the uncontracted
/// pattern vertices, edges a multiset of labeled hyperedges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShrunkPattern {
    /// 1-based: level 1 is the pattern itself.
    pub level: usize,
    /// Sorted surviving pattern vertices.
    pub vertices: Vec<u8>,
    pub edges: Vec<PatternEdge>,
}

impl ShrunkPattern {
    pub fn edges_at(&self, v: u8) -> impl Iterator<Item = &PatternEdge> {
        self.edges.iter().filter(move |e| e.contains(v))
    }

    /// Neighbors of `v` across all incident edges, excluding `v` itself.
    pub fn neighbors_of(&self, v: u8) -> BTreeSet<u8> {
        let mut out = BTreeSet::new();
        for e in self.edges_at(v) {
            out.extend(e.vertices.iter().copied());
        }
        out.remove(&v);
        out
    }

    pub fn has_selfloop_at(&self, v: u8) -> bool {
        self.edges.iter().any(|e| e.vertices == [v])
    }

    /// Number of incident edges, counting multiplicity.
    pub fn degree(&self, v: u8) -> usize {
        self.edges_at(v).count()
    }
}

fn validate_order(h: &Graph, order: &[u8], full: bool) -> Result<(), PipelineError> {
    let hn = h.n();
    if full && order.len() != hn {
        return Err(PipelineError::InvalidOrder(format!(
            "order has {} entries, pattern has {hn} vertices",
            order.len()
        )));
    }
    if order.len() > hn {
        return Err(PipelineError::InvalidOrder("order longer than the pattern".into()));
    }
    let mut seen = vec![false; hn + 1];
    for &v in order {
        if v < 1 || v as usize > hn {
            return Err(PipelineError::InvalidOrder(format!("vertex {v} out of range")));
        }
        if seen[v as usize] {
            return Err(PipelineError::InvalidOrder(format!("vertex {v} repeated")));
        }
        seen[v as usize] = true;
    }
    Ok(())
}

/// Shrinks `h` along a (possibly partial) contraction order, returning the
/// levels `M_1 ..= M_{prefix.len()+1}`.
pub fn shrink_steps(h: &Graph, prefix: &[u8]) -> Result<Vec<ShrunkPattern>, PipelineError> {
    validate_order(h, prefix, false)?;
    if prefix.len() == h.n() && h.n() > 0 {
        return Err(PipelineError::InvalidOrder(
            "the last pattern vertex is never contracted".into(),
        ));
    }
    let mut next_id = 0u32;
    let mut edges: Vec<PatternEdge> = h
        .edges()
        .into_iter()
        .map(|(u, v)| {
            let e = PatternEdge {
                id: next_id,
                vertices: vec![u as u8, v as u8],
                label: Vec::new(),
                modeled_by: Vec::new(),
            };
            next_id += 1;
            e
        })
        .collect();
    let mut vertices: Vec<u8> = (1..=h.n() as u8).collect();
    let mut levels = vec![ShrunkPattern { level: 1, vertices: vertices.clone(), edges: edges.clone() }];
    for (step, &v) in prefix.iter().enumerate() {
        let (incident, rest): (Vec<PatternEdge>, Vec<PatternEdge>) =
            edges.into_iter().partition(|e| e.contains(v));
        let mut new_vertices: BTreeSet<u8> = BTreeSet::new();
        let mut label: BTreeSet<u8> = BTreeSet::from([v]);
        let mut modeled_by = Vec::new();
        for e in &incident {
            new_vertices.extend(e.vertices.iter().copied());
            label.extend(e.label.iter().copied());
            modeled_by.push(e.id);
        }
        new_vertices.remove(&v);
        if new_vertices.is_empty() {
            // v's component is exhausted: only a disconnected pattern gets here
            return Err(PipelineError::PatternDisconnected { step: step + 1 });
        }
        edges = rest;
        edges.push(PatternEdge {
            id: next_id,
            vertices: new_vertices.into_iter().collect(),
            label: label.into_iter().collect(),
            modeled_by,
        });
        next_id += 1;
        vertices.retain(|&x| x != v);
        levels.push(ShrunkPattern {
            level: step + 2,
            vertices: vertices.clone(),
            edges: edges.clone(),
        });
    }
    Ok(levels)
}

/// Full shrink along a complete order: returns `M_1 ..= M_h`.
pub fn shrink_pattern(h: &Graph, order: &[u8]) -> Result<Vec<ShrunkPattern>, PipelineError> {
    validate_order(h, order, true)?;
    if h.n() == 0 {
        return Err(PipelineError::InvalidOrder("pattern is empty".into()));
    }
    shrink_steps(h, &order[..h.n() - 1])
}

/// Checks every structural invariant of a shrink sequence against the
/// pattern and order that produced it. Returns the first failure.
pub fn check_shrink_invariants(
    h: &Graph,
    order: &[u8],
    levels: &[ShrunkPattern],
) -> Result<(), String> {
    let hn = h.n();
    if levels.len() != hn {
        return Err(format!("expected {hn} levels, got {}", levels.len()));
    }
    for (idx, m) in levels.iter().enumerate() {
        let i = idx + 1;
        let mut expected: Vec<u8> = order[idx..].to_vec();
        expected.sort_unstable();
        if m.vertices != expected {
            return Err(format!("level {i}: vertices {:?} != {:?}", m.vertices, expected));
        }
        if m.edges.iter().any(|e| e.vertices.is_empty()) {
            return Err(format!("level {i}: empty hyperedge"));
        }
        // labels are pairwise disjoint and together cover exactly the
        // contracted vertices
        let mut all_labels: BTreeSet<u8> = BTreeSet::new();
        let mut label_count = 0usize;
        for e in &m.edges {
            label_count += e.label.len();
            all_labels.extend(e.label.iter().copied());
            if e.label.iter().any(|l| m.vertices.contains(l)) {
                return Err(format!("level {i}: label intersects surviving vertices"));
            }
        }
        if all_labels.len() != label_count {
            return Err(format!("level {i}: labels are not disjoint"));
        }
        let contracted: BTreeSet<u8> = order[..idx].iter().copied().collect();
        if all_labels != contracted {
            return Err(format!(
                "level {i}: labels {all_labels:?} do not partition contracted set {contracted:?}"
            ));
        }
        // every labeled vertex is adjacent in the pattern only to vertices
        // of its own edge or that edge's label
        for e in &m.edges {
            let closure: BTreeSet<u8> = e
                .vertices
                .iter()
                .chain(e.label.iter())
                .copied()
                .collect();
            for &u in &e.label {
                for &w in h.neighbors(u as crate::graph::Vertex) {
                    if !closure.contains(&(w as u8)) {
                        return Err(format!(
                            "level {i}: labeled vertex {u} is adjacent to {w} outside its edge"
                        ));
                    }
                }
            }
        }
    }
    // final level: selfloops on the last vertex only
    let last = order[hn - 1];
    let final_level = &levels[hn - 1];
    if final_level.edges.iter().any(|e| e.vertices != [last]) {
        return Err("final level must consist of selfloops on the last vertex".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::instances::{complete, cycle, path};

    #[test]
    fn triangle_shrink_trace() {
        let h = complete(3);
        let ms = shrink_pattern(&h, &[1, 2, 3]).unwrap();
        assert_eq!(ms.len(), 3);
        // M_2: two parallel edges {2,3}, labels {} and {1}
        let m2 = &ms[1];
        assert_eq!(m2.vertices, vec![2, 3]);
        let mut sigs: Vec<(Vec<u8>, Vec<u8>)> =
            m2.edges.iter().map(|e| (e.vertices.clone(), e.label.clone())).collect();
        sigs.sort();
        assert_eq!(sigs, vec![(vec![2, 3], vec![]), (vec![2, 3], vec![1])]);
        // M_3: one selfloop on 3 labeled {1,2}
        let m3 = &ms[2];
        assert_eq!(m3.edges.len(), 1);
        assert_eq!(m3.edges[0].vertices, vec![3]);
        assert_eq!(m3.edges[0].label, vec![1, 2]);
    }

    #[test]
    fn path_shrink_trace() {
        let h = path(3); // 1-2-3
        let ms = shrink_pattern(&h, &[1, 2, 3]).unwrap();
        let m2 = &ms[1];
        let mut sigs: Vec<(Vec<u8>, Vec<u8>)> =
            m2.edges.iter().map(|e| (e.vertices.clone(), e.label.clone())).collect();
        sigs.sort();
        assert_eq!(sigs, vec![(vec![2], vec![1]), (vec![2, 3], vec![])]);
        let m3 = &ms[2];
        assert_eq!(m3.edges.len(), 1);
        assert_eq!(m3.edges[0].vertices, vec![3]);
        assert_eq!(m3.edges[0].label, vec![1, 2]);
    }

    #[test]
    fn path_alternate_order_gives_two_selfloops() {
        let h = path(3);
        let ms = shrink_pattern(&h, &[1, 3, 2]).unwrap();
        let m3 = &ms[2];
        assert_eq!(m3.edges.len(), 2);
        assert!(m3.edges.iter().all(|e| e.vertices == vec![2]));
        let mut labels: Vec<Vec<u8>> = m3.edges.iter().map(|e| e.label.clone()).collect();
        labels.sort();
        assert_eq!(labels, vec![vec![1], vec![3]]);
    }

    #[test]
    fn invariants_hold_for_cycles_all_orders() {
        let h = cycle(4);
        let orders = [
            [1u8, 2, 3, 4],
            [2, 4, 1, 3],
            [4, 3, 2, 1],
            [3, 1, 4, 2],
        ];
        for order in orders {
            let ms = shrink_pattern(&h, &order).unwrap();
            check_shrink_invariants(&h, &order, &ms).unwrap();
        }
    }

    #[test]
    fn modeled_by_links_replaced_edges() {
        let h = complete(3);
        let ms = shrink_pattern(&h, &[1, 2, 3]).unwrap();
        let m2_new = ms[1].edges.iter().find(|e| !e.label.is_empty()).unwrap();
        // the hyperedge replaced the two original edges at vertex 1
        assert_eq!(m2_new.modeled_by.len(), 2);
        let m3_new = &ms[2].edges[0];
        assert_eq!(m3_new.modeled_by.len(), 2);
    }

    #[test]
    fn invalid_orders_rejected() {
        let h = complete(3);
        assert!(matches!(
            shrink_pattern(&h, &[1, 1, 2]),
            Err(PipelineError::InvalidOrder(_))
        ));
        assert!(matches!(
            shrink_pattern(&h, &[1, 2]),
            Err(PipelineError::InvalidOrder(_))
        ));
        assert!(matches!(
            shrink_pattern(&h, &[1, 2, 4]),
            Err(PipelineError::InvalidOrder(_))
        ));
    }

    #[test]
    fn disconnected_pattern_rejected_mid_shrink() {
        let h = build_graph(4, &[(1, 2), (3, 4)]).unwrap();
        assert!(matches!(
            shrink_pattern(&h, &[1, 2, 3, 4]),
            Err(PipelineError::PatternDisconnected { step: 2 })
        ));
    }
}
