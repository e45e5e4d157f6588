//! Copy-set selection: keeping enough copies while forcing every remaining
//! contraction to be safe.
//!
//! `al_select` levels the copies by repeatedly removing everything at a
//! low-degree vertex and then keeps the levels that are large relative to
//! what they block. `prune_to_safe` fixes one random neighbor per color at
//! every vertex of the chosen color and drops nonconforming copies.
//! `many_safe` composes the two with a majority color choice; `next_level`
//! turns that into one full contraction step.

use std::collections::{BTreeSet, HashMap};

use rand::Rng;

use crate::graph::{Coloring, Graph, Vertex};
use crate::pipeline::contracted::{build_q, copies_at_map, ContractedHypergraph};
use crate::pipeline::shrink::{shrink_steps, ShrunkPattern};
use crate::pipeline::PipelineError;
use crate::subgraph::CopySet;

/// Per-level copy-set view: answers distinct-neighbor questions for any
/// subset of the copies without materializing hypergraphs.
struct LevelView<'a> {
    copies: &'a [crate::subgraph::CopyEmbedding],
    chi: &'a Coloring,
    copies_at: HashMap<Vertex, Vec<usize>>,
    /// per color: pattern-level neighbor set (None for contracted colors)
    pattern_nbrs: Vec<Option<BTreeSet<u8>>>,
    /// per color: whether the pattern has a selfloop there
    selfloop: Vec<bool>,
}

impl<'a> LevelView<'a> {
    fn new(h: &Graph, d: &'a CopySet, pattern: &ShrunkPattern) -> Result<Self, PipelineError> {
        let chi = d.coloring.as_ref().ok_or(PipelineError::UncoloredCopySet)?;
        let hn = h.n();
        let mut pattern_nbrs = vec![None; hn + 1];
        let mut selfloop = vec![false; hn + 1];
        for &c in &pattern.vertices {
            pattern_nbrs[c as usize] = Some(pattern.neighbors_of(c));
            selfloop[c as usize] = pattern.has_selfloop_at(c);
        }
        Ok(LevelView {
            copies: &d.copies,
            chi,
            copies_at: copies_at_map(&d.copies),
            pattern_nbrs,
            selfloop,
        })
    }

    fn active_copies_at(&self, u: Vertex, active: &[bool]) -> Vec<usize> {
        self.copies_at
            .get(&u)
            .map(|v| v.iter().copied().filter(|&ci| active[ci]).collect())
            .unwrap_or_default()
    }

    /// Distinct neighbors of `u` in the hypergraph restricted to the active
    /// copies; selfloops contribute the vertex itself.
    fn distinct_neighbors(&self, u: Vertex, active: &[bool]) -> usize {
        let color = self.chi.of(u) as usize;
        let Some(nbrs) = &self.pattern_nbrs[color] else { return 0 };
        let mut out: BTreeSet<Vertex> = BTreeSet::new();
        let mut any = false;
        for &ci in self.copies_at.get(&u).into_iter().flatten() {
            if !active[ci] || self.copies[ci].image(color as u8) != u {
                continue;
            }
            any = true;
            for &a in nbrs {
                out.insert(self.copies[ci].image(a));
            }
        }
        if !any {
            return 0;
        }
        out.remove(&u);
        out.len() + usize::from(self.selfloop[color])
    }

    /// Hypergraph vertices covered by at least one active copy, ascending.
    /// Vertices of contracted colors are no hypergraph vertices and are
    /// skipped.
    fn covered_vertices(&self, active: &[bool]) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self
            .copies_at
            .iter()
            .filter(|(&v, owners)| {
                self.pattern_nbrs[self.chi.of(v) as usize].is_some()
                    && owners.iter().any(|&ci| active[ci])
            })
            .map(|(&v, _)| v)
            .collect();
        out.sort_unstable();
        out
    }
}

/// Result of the leveling selection.
#[derive(Clone, Debug)]
pub struct AlOutcome {
    pub kept: CopySet,
    /// For each kept copy, a vertex of it with few distinct neighbors in the
    /// hypergraph restricted to the kept copies.
    pub witnesses: Vec<Vertex>,
}

/// Keeps at least `|d| / (4h+2)` copies such that each kept copy has a
/// vertex with at most `6h` distinct neighbors among the kept copies.
pub fn al_select(
    h: &Graph,
    d: &CopySet,
    pattern: &ShrunkPattern,
) -> Result<AlOutcome, PipelineError> {
    let hn = h.n();
    let cap = 6 * hn;
    let view = LevelView::new(h, d, pattern)?;
    let k = d.len();

    // Phase 1: level the copies by repeated low-degree removal.
    let mut active = vec![true; k];
    let mut level = vec![0usize; k];
    let mut level_vertex: Vec<Vertex> = Vec::new();
    let mut remaining = k;
    while remaining > 0 {
        let u = view
            .covered_vertices(&active)
            .into_iter()
            .find(|&u| view.distinct_neighbors(u, &active) <= cap)
            .ok_or(PipelineError::NoLowDegreeVertex)?;
        level_vertex.push(u);
        let j = level_vertex.len();
        for ci in view.active_copies_at(u, &active) {
            active[ci] = false;
            level[ci] = j;
            remaining -= 1;
        }
    }

    // Phase 2: walk the levels downward, trading each level against the
    // lower-level copies it blocks at its vertex.
    let mut in_d = vec![true; k];
    for j in (1..=level_vertex.len()).rev() {
        let u = level_vertex[j - 1];
        let a: Vec<usize> =
            (0..k).filter(|&ci| in_d[ci] && level[ci] == j).collect();
        let b: Vec<usize> = (0..k)
            .filter(|&ci| {
                in_d[ci] && level[ci] < j && d.copies[ci].contains_vertex(u)
            })
            .collect();
        if 2 * hn * a.len() >= b.len() {
            for ci in b {
                in_d[ci] = false;
            }
        } else {
            for ci in a {
                in_d[ci] = false;
            }
        }
    }

    let kept_idx: Vec<usize> = (0..k).filter(|&ci| in_d[ci]).collect();
    if (4 * hn + 2) * kept_idx.len() < k {
        return Err(PipelineError::BoundViolated(format!(
            "kept {} of {} copies, below 1/(4h+2)",
            kept_idx.len(),
            k
        )));
    }
    let witnesses: Vec<Vertex> =
        kept_idx.iter().map(|&ci| level_vertex[level[ci] - 1]).collect();
    // postcondition replay: every witness still has few distinct neighbors
    for (&ci, &w) in kept_idx.iter().zip(&witnesses) {
        debug_assert!(d.copies[ci].contains_vertex(w));
        if view.distinct_neighbors(w, &in_d) > cap {
            return Err(PipelineError::BoundViolated(format!(
                "witness {w} has too many distinct neighbors after selection"
            )));
        }
    }
    let kept = CopySet {
        copies: kept_idx.iter().map(|&ci| d.copies[ci].clone()).collect(),
        coloring: d.coloring.clone(),
    };
    Ok(AlOutcome { kept, witnesses })
}

fn six_h_pow(hn: usize, exp: u32) -> u128 {
    (6 * hn as u128).pow(exp)
}

/// Fixes, for every vertex of color `color`, one random neighbor per
/// neighbor color, and keeps only the copies that agree with the fixed
/// choice. Retries with fresh randomness until at least a `1/(6h)^h`
/// fraction survives (guaranteed to exist in expectation).
///
/// Precondition: in the hypergraph of `d`, every copy's color-`color` vertex
/// has at most `6h` distinct neighbors.
pub fn prune_to_safe(
    h: &Graph,
    d: &CopySet,
    pattern: &ShrunkPattern,
    color: u8,
    rng: &mut impl Rng,
) -> Result<CopySet, PipelineError> {
    let hn = h.n();
    let view = LevelView::new(h, d, pattern)?;
    let all = vec![true; d.len()];
    for (ci, c) in d.copies.iter().enumerate() {
        let u = c.image(color);
        if view.distinct_neighbors(u, &all) > 6 * hn {
            return Err(PipelineError::PreconditionViolated(format!(
                "copy {ci}: vertex {u} of color {color} has more than {} distinct neighbors",
                6 * hn
            )));
        }
    }
    let nbr_colors: Vec<u8> = {
        let mut cs: BTreeSet<u8> = pattern.neighbors_of(color).into_iter().collect();
        if pattern.has_selfloop_at(color) {
            cs.insert(color);
        }
        cs.into_iter().collect()
    };
    // all vertices of the color, ascending, with their copies
    let mut by_vertex: Vec<(Vertex, Vec<usize>)> = {
        let mut m: HashMap<Vertex, Vec<usize>> = HashMap::new();
        for (ci, c) in d.copies.iter().enumerate() {
            m.entry(c.image(color)).or_default().push(ci);
        }
        let mut v: Vec<_> = m.into_iter().collect();
        v.sort_unstable();
        v
    };
    for (_, owners) in &mut by_vertex {
        owners.sort_unstable();
    }

    let need = d.len() as u128; // survivors * (6h)^h >= need
    let budget = 64u128.saturating_mul(six_h_pow(hn, hn as u32));
    let mut attempts = 0u128;
    loop {
        attempts += 1;
        if attempts > budget {
            return Err(PipelineError::RetryLimit(format!(
                "prune_to_safe made {attempts} attempts without reaching the size bound"
            )));
        }
        let mut surviving: Vec<usize> = Vec::new();
        for (_, owners) in &by_vertex {
            // candidate neighbors per color, over all owning copies
            let mut selected: HashMap<u8, Vertex> = HashMap::new();
            for &s in &nbr_colors {
                let cands: Vec<Vertex> = owners
                    .iter()
                    .map(|&ci| d.copies[ci].image(s))
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect();
                selected.insert(s, cands[rng.gen_range(0..cands.len())]);
            }
            for &ci in owners {
                if nbr_colors.iter().all(|&s| d.copies[ci].image(s) == selected[&s]) {
                    surviving.push(ci);
                }
            }
        }
        if surviving.len() as u128 * six_h_pow(hn, hn as u32) >= need {
            let kept = CopySet {
                copies: surviving.iter().map(|&ci| d.copies[ci].clone()).collect(),
                coloring: d.coloring.clone(),
            };
            return Ok(kept);
        }
    }
}

/// Chooses a surviving color and a copy subset of size at least
/// `|d| / (6h)^(h+2)` whose color-class vertices are all safe: leveling
/// selection, then the majority witness color, then the safety pruning.
pub fn many_safe(
    h: &Graph,
    d: &CopySet,
    pattern: &ShrunkPattern,
    rng: &mut impl Rng,
) -> Result<(u8, CopySet), PipelineError> {
    let hn = h.n();
    let al = al_select(h, d, pattern)?;
    let view = LevelView::new(h, &al.kept, pattern)?;
    let all = vec![true; al.kept.len()];
    let mut best: Option<(u8, Vec<usize>)> = None;
    for &c in &pattern.vertices {
        let subset: Vec<usize> = al
            .kept
            .copies
            .iter()
            .enumerate()
            .filter(|(_, copy)| view.distinct_neighbors(copy.image(c), &all) <= 6 * hn)
            .map(|(ci, _)| ci)
            .collect();
        if best.as_ref().is_none_or(|(_, b)| subset.len() > b.len()) {
            best = Some((c, subset));
        }
    }
    let (color, subset) = best.expect("pattern has vertices");
    let d_c = CopySet {
        copies: subset.iter().map(|&ci| al.kept.copies[ci].clone()).collect(),
        coloring: al.kept.coloring.clone(),
    };
    let pruned = prune_to_safe(h, &d_c, pattern, color, rng)?;
    if pruned.len() as u128 * six_h_pow(hn, hn as u32 + 2) < d.len() as u128 {
        return Err(PipelineError::BoundViolated(format!(
            "many_safe kept {} of {} copies, below 1/(6h)^(h+2)",
            pruned.len(),
            d.len()
        )));
    }
    Ok((color, pruned))
}

/// One full contraction step.
#[derive(Clone, Debug)]
pub struct NextLevel {
    /// The pattern vertex contracted at this step.
    pub chosen: u8,
    pub d_next: CopySet,
    pub q_next: ContractedHypergraph,
}

/// Runs one step of the reduction: picks the contraction vertex via
/// `many_safe`, shrinks every copy accordingly, and verifies consistency and
/// the size bound.
pub fn next_level(
    g: &Graph,
    h: &Graph,
    d: &CopySet,
    q: &ContractedHypergraph,
    rng: &mut impl Rng,
) -> Result<NextLevel, PipelineError> {
    let pattern = shrink_steps(h, &q.order_prefix)?.pop().unwrap();
    let (chosen, d_next) = many_safe(h, d, &pattern, rng)?;
    let mut prefix = q.order_prefix.clone();
    prefix.push(chosen);
    let q_next = build_q(g, h, &d_next, &prefix)?;
    Ok(NextLevel { chosen, d_next, q_next })
}

/// Repeatedly drops all copies at any non-isolated vertex whose current
/// union-graph degree fell to at most `alpha/12` times its host degree,
/// where `alpha = |d| / n`. On planar hosts at least half the copies stay.
pub fn degree_prune(d: &CopySet, g: &Graph) -> CopySet {
    let n = g.n() as u64;
    let alpha_num = d.len() as u64; // alpha = alpha_num / n
    let mut active = vec![true; d.len()];
    let copies_at = copies_at_map(&d.copies);
    loop {
        // current degree in the union of active copies
        let mut deg: HashMap<Vertex, u64> = HashMap::new();
        for (ci, c) in d.copies.iter().enumerate() {
            if !active[ci] {
                continue;
            }
            for &(u, v) in &c.edge_image {
                *deg.entry(u).or_insert(0) += 1;
                *deg.entry(v).or_insert(0) += 1;
            }
        }
        // smallest non-isolated vertex with current degree <= (alpha/12) deg_G
        let target = deg
            .iter()
            .filter(|(&v, &cur)| cur > 0 && 12 * cur * n <= alpha_num * g.degree(v) as u64)
            .map(|(&v, _)| v)
            .min();
        match target {
            None => break,
            Some(v) => {
                for &ci in copies_at.get(&v).into_iter().flatten() {
                    // only copies with an edge at v count as incident
                    if active[ci] && d.copies[ci].edge_image.iter().any(|&(a, b)| a == v || b == v)
                    {
                        active[ci] = false;
                    }
                }
            }
        }
    }
    CopySet {
        copies: d
            .copies
            .iter()
            .zip(&active)
            .filter(|(_, &a)| a)
            .map(|(c, _)| c.clone())
            .collect(),
        coloring: d.coloring.clone(),
    }
}
