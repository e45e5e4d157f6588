//! Exact desk-scale subgraph machinery: copy enumeration, edge-disjoint
//! packing, coloring search, deletion distance, farness certification,
//! planarity by forbidden minors, and the semi-subgraph-freeness audit.
//!
//! All of these are exact (no sampling error) and intentionally limited to
//! small patterns and instances; they serve both as building blocks of the
//! testers and as ground truth the randomized side is validated against.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::graph::{build_graph, norm_edge, Coloring, Graph, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubgraphError {
    #[error("instance exceeds the desk-scale cap: {0}")]
    SizeLimit(String),
    #[error("pattern has no edges; containment cannot be broken by deletions")]
    PatternHasNoEdges,
}

/// An injective embedding of a pattern `H` into a host graph.
///
/// `vertex_map[a-1]` is the image of H-vertex `a`; `edge_image` is the sorted
/// list of the `|E(H)|` image edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CopyEmbedding {
    pub vertex_map: Vec<Vertex>,
    pub edge_image: Vec<(Vertex, Vertex)>,
}

impl CopyEmbedding {
    pub fn new(h: &Graph, vertex_map: Vec<Vertex>) -> Self {
        let mut edge_image: Vec<_> = h
            .edges()
            .iter()
            .map(|&(a, b)| {
                norm_edge(vertex_map[(a - 1) as usize], vertex_map[(b - 1) as usize])
            })
            .collect();
        edge_image.sort_unstable();
        CopyEmbedding { vertex_map, edge_image }
    }

    pub fn image(&self, h_vertex: u8) -> Vertex {
        self.vertex_map[(h_vertex - 1) as usize]
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.vertex_map.contains(&v)
    }

    /// Checks injectivity, adjacency preservation, and the edge-image count.
    pub fn verify(&self, g: &Graph, h: &Graph) -> bool {
        if self.vertex_map.len() != h.n() {
            return false;
        }
        let distinct: HashSet<_> = self.vertex_map.iter().collect();
        if distinct.len() != h.n() {
            return false;
        }
        if self.vertex_map.iter().any(|&v| v < 1 || v as usize > g.n()) {
            return false;
        }
        let mut imgs = BTreeSet::new();
        for (a, b) in h.edges() {
            let e = norm_edge(self.image(a as u8), self.image(b as u8));
            if !g.has_edge(e.0, e.1) {
                return false;
            }
            imgs.insert(e);
        }
        imgs.len() == h.m() && imgs.iter().copied().collect::<Vec<_>>() == self.edge_image
    }
}

/// A set of edge-disjoint copies of one pattern, optionally colored.
///
/// When `coloring` is present, every copy maps H-vertex `a` to a vertex of
/// color `a`; with all pattern vertices distinctly colored this rules out
/// monochromatic edges inside copies.
#[derive(Clone, Debug)]
pub struct CopySet {
    pub copies: Vec<CopyEmbedding>,
    pub coloring: Option<Coloring>,
}

impl CopySet {
    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    /// All copy edges as one set (the edge set of `G[D]`).
    pub fn union_edges(&self) -> BTreeSet<(Vertex, Vertex)> {
        self.copies.iter().flat_map(|c| c.edge_image.iter().copied()).collect()
    }

    /// The graph `G[D]`: vertex set of `g`, edges the union of the copies.
    pub fn union_graph(&self, g: &Graph) -> Graph {
        let edges: Vec<_> = self.union_edges().into_iter().collect();
        build_graph(g.n(), &edges).expect("copy edges are valid")
    }

    pub fn validate(&self, g: &Graph, h: &Graph) -> Result<(), String> {
        let mut used = BTreeSet::new();
        for (i, c) in self.copies.iter().enumerate() {
            if !c.verify(g, h) {
                return Err(format!("copy {i} is not a valid embedding"));
            }
            for &e in &c.edge_image {
                if !used.insert(e) {
                    return Err(format!("copy {i} shares edge {e:?} with an earlier copy"));
                }
            }
            if let Some(chi) = &self.coloring {
                for a in 1..=h.n() as u8 {
                    if chi.of(c.image(a)) != a {
                        return Err(format!("copy {i} breaks the coloring at role {a}"));
                    }
                }
            }
        }
        Ok(())
    }
}

const PATTERN_CAP: usize = 10;

fn check_pattern_cap(h: &Graph) -> Result<(), SubgraphError> {
    if h.n() > PATTERN_CAP {
        return Err(SubgraphError::SizeLimit(format!(
            "pattern has {} vertices, cap is {PATTERN_CAP}",
            h.n()
        )));
    }
    Ok(())
}

/// Search order: start at a max-degree pattern vertex, then repeatedly take
/// the vertex with the most already-placed neighbors. Keeps the candidate
/// sets small for the backtracking matcher.
fn matcher_order(h: &Graph) -> Vec<u8> {
    let hn = h.n();
    if hn == 0 {
        return Vec::new();
    }
    let mut order: Vec<u8> = Vec::with_capacity(hn);
    let mut placed = vec![false; hn + 1];
    while order.len() < hn {
        let next = (1..=hn as u8)
            .filter(|&a| !placed[a as usize])
            .max_by_key(|&a| {
                let anchored = h
                    .neighbors(a as Vertex)
                    .iter()
                    .filter(|&&b| placed[b as usize])
                    .count();
                (anchored, h.degree(a as Vertex), usize::MAX - a as usize)
            })
            .unwrap();
        placed[next as usize] = true;
        order.push(next);
    }
    order
}

struct Matcher<'a> {
    g: &'a Graph,
    h: &'a Graph,
    coloring: Option<&'a Coloring>,
    forbidden_edges: Option<&'a BTreeSet<(Vertex, Vertex)>>,
    order: Vec<u8>,
    candidate_perm: Option<&'a [Vertex]>,
    limit: usize,
    /// (sorted vertex image, sorted edge image) per found subgraph.
    found_keys: HashSet<crate::brute::SubgraphKey>,
    found: Vec<CopyEmbedding>,
}

impl<'a> Matcher<'a> {
    fn run(&mut self) {
        let mut map = vec![0 as Vertex; self.h.n()];
        let mut used = HashSet::new();
        self.recurse(0, &mut map, &mut used);
    }

    fn edge_ok(&self, u: Vertex, v: Vertex) -> bool {
        self.g.has_edge(u, v)
            && self
                .forbidden_edges
                .is_none_or(|f| !f.contains(&norm_edge(u, v)))
    }

    fn recurse(&mut self, depth: usize, map: &mut Vec<Vertex>, used: &mut HashSet<Vertex>) {
        if self.found.len() >= self.limit {
            return;
        }
        if depth == self.order.len() {
            let c = CopyEmbedding::new(self.h, map.clone());
            let mut verts = c.vertex_map.clone();
            verts.sort_unstable();
            let key = (verts, c.edge_image.clone());
            if self.found_keys.insert(key) {
                self.found.push(c);
            }
            return;
        }
        let a = self.order[depth];
        let anchors: Vec<Vertex> = self
            .h
            .neighbors(a as Vertex)
            .iter()
            .filter(|&&b| self.order[..depth].contains(&(b as u8)))
            .map(|&b| map[(b - 1) as usize])
            .collect();

        let try_candidate = |m: &mut Self, cand: Vertex, map: &mut Vec<Vertex>, used: &mut HashSet<Vertex>| {
            if used.contains(&cand) {
                return;
            }
            if let Some(chi) = m.coloring {
                if chi.of(cand) != a {
                    return;
                }
            }
            if m.g.degree(cand) < m.h.degree(a as Vertex) {
                return;
            }
            if !anchors.iter().all(|&x| m.edge_ok(x, cand)) {
                return;
            }
            map[(a - 1) as usize] = cand;
            used.insert(cand);
            m.recurse(depth + 1, map, used);
            used.remove(&cand);
            map[(a - 1) as usize] = 0;
        };

        if let Some(&x) = anchors.first() {
            // Anchored vertex: candidates come from a neighbor list.
            let ns: Vec<Vertex> = self.g.neighbors(x).to_vec();
            for cand in ns {
                try_candidate(self, cand, map, used);
                if self.found.len() >= self.limit {
                    return;
                }
            }
        } else {
            match self.candidate_perm {
                Some(perm) => {
                    for &cand in perm {
                        try_candidate(self, cand, map, used);
                        if self.found.len() >= self.limit {
                            return;
                        }
                    }
                }
                None => {
                    for cand in 1..=self.g.n() as Vertex {
                        try_candidate(self, cand, map, used);
                        if self.found.len() >= self.limit {
                            return;
                        }
                    }
                }
            }
        }
    }
}

/// Enumerates copies of `h` in `g`, one representative per distinct image
/// subgraph (so automorphic re-embeddings are not double counted), stopping
/// once `limit` copies were collected. The colored variant additionally
/// requires every image vertex to carry its role's color.
pub fn enumerate_copies(
    g: &Graph,
    h: &Graph,
    limit: usize,
    coloring: Option<&Coloring>,
) -> Result<Vec<CopyEmbedding>, SubgraphError> {
    check_pattern_cap(h)?;
    let mut m = Matcher {
        g,
        h,
        coloring,
        forbidden_edges: None,
        order: matcher_order(h),
        candidate_perm: None,
        limit,
        found_keys: HashSet::new(),
        found: Vec::new(),
    };
    m.run();
    Ok(m.found)
}

/// First copy of `h` in `g` that avoids `forbidden_edges`, or None.
pub fn find_copy_avoiding(
    g: &Graph,
    h: &Graph,
    coloring: Option<&Coloring>,
    forbidden_edges: &BTreeSet<(Vertex, Vertex)>,
    candidate_perm: Option<&[Vertex]>,
) -> Result<Option<CopyEmbedding>, SubgraphError> {
    check_pattern_cap(h)?;
    let mut m = Matcher {
        g,
        h,
        coloring,
        forbidden_edges: Some(forbidden_edges),
        order: matcher_order(h),
        candidate_perm,
        limit: 1,
        found_keys: HashSet::new(),
        found: Vec::new(),
    };
    m.run();
    Ok(m.found.pop())
}

/// Finds a copy of `h` inside an explored edge set (the tester's detection
/// step). Vertices are those touched by the edges; colors are looked up via
/// the host graph's ids.
pub fn find_copy_in_edges(
    h: &Graph,
    edges: &BTreeSet<(Vertex, Vertex)>,
    coloring: Option<&Coloring>,
) -> Result<Option<CopyEmbedding>, SubgraphError> {
    if edges.is_empty() || h.m() > edges.len() {
        // A pattern with edges cannot fit; an edgeless pattern needs vertices only.
        if h.m() > 0 {
            return Ok(None);
        }
    }
    let verts: Vec<Vertex> = edges
        .iter()
        .flat_map(|&(u, v)| [u, v])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if verts.len() < h.n() {
        return Ok(None);
    }
    let index: HashMap<Vertex, Vertex> = verts
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, (i + 1) as Vertex))
        .collect();
    let local_edges: Vec<_> = edges
        .iter()
        .map(|&(u, v)| (index[&u], index[&v]))
        .collect();
    let local = build_graph(verts.len(), &local_edges).expect("explored edges are simple");
    let local_coloring = coloring.map(|chi| {
        Coloring::new(verts.iter().map(|&v| chi.of(v)).collect())
    });
    let found = enumerate_copies(&local, h, 1, local_coloring.as_ref())?;
    Ok(found.into_iter().next().map(|c| CopyEmbedding {
        vertex_map: c.vertex_map.iter().map(|&lv| verts[(lv - 1) as usize]).collect(),
        edge_image: c
            .edge_image
            .iter()
            .map(|&(u, v)| norm_edge(verts[(u - 1) as usize], verts[(v - 1) as usize]))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect(),
    }))
}

/// Automorphisms of `h` as permutation vectors (`perm[a-1]` = image of `a`).
pub fn automorphisms(h: &Graph) -> Result<Vec<Vec<u8>>, SubgraphError> {
    let embeddings = enumerate_all_embeddings(h, h)?;
    Ok(embeddings
        .into_iter()
        .map(|m| m.iter().map(|&v| v as u8).collect())
        .collect())
}

/// All injective adjacency-preserving maps h -> g (no automorphism dedup).
/// Exact but exponential; both graphs must be desk-scale.
fn enumerate_all_embeddings(h: &Graph, g: &Graph) -> Result<Vec<Vec<Vertex>>, SubgraphError> {
    check_pattern_cap(h)?;
    fn rec(
        h: &Graph,
        g: &Graph,
        order: &[u8],
        depth: usize,
        map: &mut Vec<Vertex>,
        used: &mut HashSet<Vertex>,
        out: &mut Vec<Vec<Vertex>>,
    ) {
        if depth == order.len() {
            out.push(map.clone());
            return;
        }
        let a = order[depth];
        for cand in 1..=g.n() as Vertex {
            if used.contains(&cand) {
                continue;
            }
            let ok = h.neighbors(a as Vertex).iter().all(|&b| {
                let mapped = map[(b - 1) as usize];
                mapped == 0 || g.has_edge(mapped, cand)
            });
            if !ok {
                continue;
            }
            map[(a - 1) as usize] = cand;
            used.insert(cand);
            rec(h, g, order, depth + 1, map, used, out);
            used.remove(&cand);
            map[(a - 1) as usize] = 0;
        }
    }
    let order: Vec<u8> = (1..=h.n() as u8).collect();
    let mut out = Vec::new();
    rec(h, g, &order, 0, &mut vec![0; h.n()], &mut HashSet::new(), &mut out);
    // Keep only maps preserving all edges (non-edges may map anywhere for
    // subgraph embeddings, so nothing more to filter).
    Ok(out)
}

/// Greedily packs pairwise edge-disjoint (optionally colored) copies of `h`
/// until no further copy exists. Maximal, not maximum. The rng only sets the
/// scan order, so a fixed seed gives a fixed packing.
pub fn greedy_packing(
    g: &Graph,
    h: &Graph,
    coloring: Option<&Coloring>,
    rng: &mut impl Rng,
) -> Result<CopySet, SubgraphError> {
    check_pattern_cap(h)?;
    let mut perm: Vec<Vertex> = (1..=g.n() as Vertex).collect();
    perm.shuffle(rng);
    let mut used = BTreeSet::new();
    let mut copies = Vec::new();
    while let Some(c) = find_copy_avoiding(g, h, coloring, &used, Some(&perm))? {
        used.extend(c.edge_image.iter().copied());
        copies.push(c);
    }
    Ok(CopySet { copies, coloring: coloring.cloned() })
}

/// How many copies of a packing survive a candidate coloring, i.e. admit a
/// re-embedding of the same image whose vertex colors equal the roles.
///
/// A copy survives iff its color pattern is a permutation whose inverse is an
/// automorphism of `h`, which for a uniform coloring happens with probability
/// `|Aut(h)| / h^h` per copy.
pub fn colored_survivors(
    packing: &[CopyEmbedding],
    chi: &Coloring,
    h: &Graph,
    auts: &[Vec<u8>],
) -> Vec<CopyEmbedding> {
    let hn = h.n() as u8;
    let mut out = Vec::new();
    for c in packing {
        let pattern: Vec<u8> = c.vertex_map.iter().map(|&v| chi.of(v)).collect();
        let mut seen = vec![false; hn as usize + 1];
        let bijective = pattern.iter().all(|&p| {
            if p < 1 || p > hn || seen[p as usize] {
                false
            } else {
                seen[p as usize] = true;
                true
            }
        });
        if !bijective {
            continue;
        }
        // inverse of the color pattern
        let mut inv = vec![0u8; hn as usize];
        for (idx, &p) in pattern.iter().enumerate() {
            inv[(p - 1) as usize] = (idx + 1) as u8;
        }
        if auts.iter().any(|a| a == &inv) {
            // Recompose so that role a sits on a vertex of color a.
            let map: Vec<Vertex> =
                (1..=hn).map(|a| c.vertex_map[(inv[(a - 1) as usize] - 1) as usize]).collect();
            out.push(CopyEmbedding::new(h, map));
        }
    }
    out
}

/// Samples `trials` uniform colorings and keeps the one maximizing the number
/// of copies of a fixed uncolored greedy packing that survive it. Returns the
/// winning coloring and the surviving copies recomposed as colored embeddings.
pub fn best_coloring(
    g: &Graph,
    h: &Graph,
    trials: usize,
    rng: &mut impl Rng,
) -> Result<(Coloring, CopySet), SubgraphError> {
    assert!(trials >= 1, "need at least one coloring trial");
    let base = greedy_packing(g, h, None, rng)?;
    let auts = automorphisms(h)?;
    let hn = h.n() as u8;
    let mut best: Option<(Coloring, Vec<CopyEmbedding>)> = None;
    for _ in 0..trials {
        let chi = Coloring::random(g.n(), hn, rng);
        let survivors = colored_survivors(&base.copies, &chi, h, &auts);
        if best.as_ref().is_none_or(|(_, b)| survivors.len() > b.len()) {
            best = Some((chi, survivors));
        }
    }
    let (chi, copies) = best.expect("trials >= 1");
    Ok((chi.clone(), CopySet { copies, coloring: Some(chi) }))
}

/// Default number of coloring trials: `64 * h^h`, capped at 10^5.
pub fn default_coloring_trials(h: &Graph) -> usize {
    let hh = (h.n() as u64).checked_pow(h.n() as u32).unwrap_or(u64::MAX);
    (64u64.saturating_mul(hh)).min(100_000) as usize
}

const DISTANCE_EDGE_CAP: usize = 40;

/// Minimum number of edge deletions after which `g` has no copy of `h`,
/// by branch-and-bound on an uncovered copy's edges.
pub fn exact_deletion_distance(g: &Graph, h: &Graph) -> Result<usize, SubgraphError> {
    exact_deletion_distance_with_cap(g, h, DISTANCE_EDGE_CAP)
}

pub fn exact_deletion_distance_with_cap(
    g: &Graph,
    h: &Graph,
    edge_cap: usize,
) -> Result<usize, SubgraphError> {
    check_pattern_cap(h)?;
    if g.m() > edge_cap {
        return Err(SubgraphError::SizeLimit(format!(
            "graph has {} edges, cap is {edge_cap}",
            g.m()
        )));
    }
    if h.m() == 0 {
        // Deletions never remove vertices, so containment is decided by n alone.
        return if g.n() >= h.n() && enumerate_copies(g, h, 1, None)?.len() == 1 {
            Err(SubgraphError::PatternHasNoEdges)
        } else {
            Ok(0)
        };
    }
    fn solve(
        g: &Graph,
        h: &Graph,
        removed: &mut BTreeSet<(Vertex, Vertex)>,
        depth: usize,
        best: &mut usize,
    ) -> Result<(), SubgraphError> {
        if depth >= *best {
            return Ok(());
        }
        match find_copy_avoiding(g, h, None, removed, None)? {
            None => {
                *best = depth;
                Ok(())
            }
            Some(c) => {
                for &e in &c.edge_image {
                    removed.insert(e);
                    solve(g, h, removed, depth + 1, best)?;
                    removed.remove(&e);
                }
                Ok(())
            }
        }
    }
    let mut best = g.m() + 1; // deleting every edge always works (h.m() > 0)
    let mut removed = BTreeSet::new();
    solve(g, h, &mut removed, 0, &mut best)?;
    Ok(best.min(g.m()))
}

/// Proof that a graph is epsilon-far from `h`-free for every eps below `bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct FarnessCertificate {
    /// Size of the edge-disjoint packing found.
    pub packing_size: usize,
    /// The graph is eps-far for every eps < packing_size / n.
    pub bound: f64,
    /// Exact deletion distance, when it was computed; at least `packing_size`.
    pub exact_distance: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FarnessOutcome {
    Certified(FarnessCertificate),
    /// Greedy maximality is not a farness disproof; nothing is claimed.
    NotCertified,
}

/// Certifies eps-farness from `h`-freeness when a greedy packing of size `k`
/// has `k > eps * n` (each edge-disjoint copy forces one deletion).
pub fn certify_far(g: &Graph, h: &Graph, eps: f64) -> Result<FarnessOutcome, SubgraphError> {
    let mut rng = crate::oracle::trial_rng(0, 0);
    let packing = greedy_packing(g, h, None, &mut rng)?;
    let k = packing.len();
    if k as f64 > eps * g.n() as f64 {
        Ok(FarnessOutcome::Certified(FarnessCertificate {
            packing_size: k,
            bound: k as f64 / g.n() as f64,
            exact_distance: None,
        }))
    } else {
        Ok(FarnessOutcome::NotCertified)
    }
}

// ---------------------------------------------------------------------------
// Planarity by forbidden minors
// ---------------------------------------------------------------------------

const PLANARITY_CAP: usize = 10;

/// Exact planarity for small graphs: true iff the graph has no K5 and no
/// K3,3 minor, decided by exhaustive branch-set search after shrinking away
/// vertices of degree at most 2 (which cannot affect those minors).
pub fn is_planar_small(g: &Graph) -> Result<bool, SubgraphError> {
    let (verts, edges) = reduce_low_degree(g);
    if verts.len() <= 4 {
        return Ok(true);
    }
    if verts.len() > PLANARITY_CAP {
        return Err(SubgraphError::SizeLimit(format!(
            "{} vertices remain after degree-2 reduction, cap is {PLANARITY_CAP}",
            verts.len()
        )));
    }
    // Dense leftovers are nonplanar outright, which by Wagner's theorem
    // already implies a forbidden minor.
    if edges.len() > 3 * verts.len() - 6 {
        return Ok(false);
    }
    let index: HashMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = verts.len();
    let mut adj = vec![0u32; n];
    for &(u, v) in &edges {
        let (iu, iv) = (index[&u], index[&v]);
        adj[iu] |= 1 << iv;
        adj[iv] |= 1 << iu;
    }
    Ok(!has_k5_minor(&adj) && !has_k33_minor(&adj))
}

/// Repeatedly deletes degree <= 1 vertices and suppresses degree-2 vertices.
fn reduce_low_degree(g: &Graph) -> (Vec<Vertex>, BTreeSet<(Vertex, Vertex)>) {
    let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> = BTreeMap::new();
    for (u, v) in g.edges() {
        adj.entry(u).or_default().insert(v);
        adj.entry(v).or_default().insert(u);
    }
    loop {
        let target = adj.iter().find(|(_, ns)| ns.len() <= 2).map(|(&v, _)| v);
        let Some(v) = target else { break };
        let ns: Vec<Vertex> = adj[&v].iter().copied().collect();
        for &x in &ns {
            adj.get_mut(&x).unwrap().remove(&v);
        }
        if ns.len() == 2 && ns[0] != ns[1] {
            adj.get_mut(&ns[0]).unwrap().insert(ns[1]);
            adj.get_mut(&ns[1]).unwrap().insert(ns[0]);
        }
        adj.remove(&v);
        adj.retain(|_, ns| !ns.is_empty());
    }
    let verts: Vec<Vertex> = adj.keys().copied().collect();
    let mut edges = BTreeSet::new();
    for (&u, ns) in &adj {
        for &v in ns {
            edges.insert(norm_edge(u, v));
        }
    }
    (verts, edges)
}

fn connected_subsets(adj: &[u32]) -> Vec<u32> {
    let n = adj.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let start = mask.trailing_zeros();
        let mut seen = 1u32 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u32;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= adj[v] & mask & !seen;
            }
            seen |= next;
            frontier = next;
        }
        if seen == mask {
            out.push(mask);
        }
    }
    out
}

fn masks_adjacent(adj: &[u32], a: u32, b: u32) -> bool {
    let mut m = a;
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        m &= m - 1;
        if adj[v] & b != 0 {
            return true;
        }
    }
    false
}

fn has_k5_minor(adj: &[u32]) -> bool {
    let subsets = connected_subsets(adj);
    fn rec(adj: &[u32], subsets: &[u32], chosen: &mut Vec<u32>, used: u32, from: usize) -> bool {
        if chosen.len() == 5 {
            return true;
        }
        for (i, &s) in subsets.iter().enumerate().skip(from) {
            if s & used != 0 {
                continue;
            }
            if !chosen.iter().all(|&c| masks_adjacent(adj, c, s)) {
                continue;
            }
            chosen.push(s);
            if rec(adj, subsets, chosen, used | s, i + 1) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    rec(adj, &subsets, &mut Vec::new(), 0, 0)
}

fn has_k33_minor(adj: &[u32]) -> bool {
    let subsets = connected_subsets(adj);
    // Sides A and B of three connected branch sets each, all nine cross
    // pairs adjacent. Within-side order is forced ascending to cut symmetry.
    fn rec(
        adj: &[u32],
        subsets: &[u32],
        a: &mut Vec<u32>,
        b: &mut Vec<u32>,
        used: u32,
        from_a: usize,
        from_b: usize,
    ) -> bool {
        if a.len() == 3 && b.len() == 3 {
            return true;
        }
        if a.len() < 3 {
            for (i, &s) in subsets.iter().enumerate().skip(from_a) {
                if s & used != 0 {
                    continue;
                }
                if !b.iter().all(|&c| masks_adjacent(adj, c, s)) {
                    continue;
                }
                a.push(s);
                if rec(adj, subsets, a, b, used | s, i + 1, from_b) {
                    return true;
                }
                a.pop();
            }
            return false;
        }
        for (i, &s) in subsets.iter().enumerate().skip(from_b) {
            if s & used != 0 {
                continue;
            }
            if !a.iter().all(|&c| masks_adjacent(adj, c, s)) {
                continue;
            }
            b.push(s);
            if rec(adj, subsets, a, b, used | s, from_a, i + 1) {
                return true;
            }
            b.pop();
        }
        false
    }
    rec(adj, &subsets, &mut Vec::new(), &mut Vec::new(), 0, 0, 0)
}

// ---------------------------------------------------------------------------
// Semi-subgraph-freeness audit
// ---------------------------------------------------------------------------

const AUDIT_CAP: usize = 8;

/// Result of auditing whether a property behaves like freeness from a finite
/// family at one value of `n`: satisfying graphs must avoid every member,
/// and graphs farther than `eps * n` edits from the property must contain one.
#[derive(Clone, Debug)]
pub struct AuditReport {
    pub n: usize,
    pub eps: f64,
    /// Graphs satisfying the property that contain a family member.
    pub condition_i_violations: Vec<Graph>,
    /// Graphs more than `eps * n` edge edits from the property containing
    /// no family member.
    pub condition_ii_violations: Vec<Graph>,
}

impl AuditReport {
    pub fn holds(&self) -> bool {
        self.condition_i_violations.is_empty() && self.condition_ii_violations.is_empty()
    }
}

/// Exhaustively audits all labeled graphs on `n <= 8` vertices.
///
/// Distance to the property counts edge insertions and deletions; for purely
/// monotone properties such as subgraph-freeness the insertion moves are
/// simply never profitable.
pub fn semi_subgraph_freeness_audit(
    property: impl Fn(&Graph) -> bool,
    family: &[Graph],
    n: usize,
    eps: f64,
) -> Result<AuditReport, SubgraphError> {
    if n > AUDIT_CAP {
        return Err(SubgraphError::SizeLimit(format!("audit supports n <= {AUDIT_CAP}, got {n}")));
    }
    let pairs: Vec<(Vertex, Vertex)> = {
        let mut v = Vec::new();
        for u in 1..=n as Vertex {
            for w in (u + 1)..=n as Vertex {
                v.push((u, w));
            }
        }
        v
    };
    let ne = pairs.len();
    let total = 1usize << ne;
    let graph_of = |mask: usize| -> Graph {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        build_graph(n, &edges).expect("mask graphs are simple")
    };

    // Embeddings of each family member into K_n, as edge masks paired with
    // how many vertices the member needs.
    let kn = crate::instances::complete(n);
    let mut member_masks: Vec<(usize, Vec<usize>)> = Vec::new();
    for f in family {
        if f.n() > n {
            member_masks.push((f.n(), Vec::new()));
            continue;
        }
        let copies = enumerate_copies(&kn, f, usize::MAX, None)?;
        let index: HashMap<(Vertex, Vertex), usize> =
            pairs.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let masks = copies
            .iter()
            .map(|c| c.edge_image.iter().fold(0usize, |acc, e| acc | (1 << index[e])))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        member_masks.push((f.n(), masks));
    }
    let contains_member = |mask: usize| -> bool {
        member_masks
            .iter()
            .any(|(need, masks)| *need <= n && masks.iter().any(|&fm| fm & !mask == 0))
    };

    // Multi-source BFS over single-edge flips from the satisfying set.
    // Distances fit in u8: at most C(8,2) = 28 flips, 255 marks unreachable.
    let mut dist = vec![u8::MAX; total];
    let mut queue = std::collections::VecDeque::new();
    let mut satisfies = vec![false; total];
    for mask in 0..total {
        if property(&graph_of(mask)) {
            satisfies[mask] = true;
            dist[mask] = 0;
            queue.push_back(mask);
        }
    }
    while let Some(mask) = queue.pop_front() {
        for i in 0..ne {
            let next = mask ^ (1 << i);
            if dist[next] == u8::MAX {
                dist[next] = dist[mask] + 1;
                queue.push_back(next);
            }
        }
    }

    let mut violations_i = Vec::new();
    let mut violations_ii = Vec::new();
    for mask in 0..total {
        if satisfies[mask] && contains_member(mask) {
            violations_i.push(graph_of(mask));
        }
        let far = dist[mask] == u8::MAX || dist[mask] as f64 > eps * n as f64;
        if far && !contains_member(mask) {
            violations_ii.push(graph_of(mask));
        }
    }
    Ok(AuditReport {
        n,
        eps,
        condition_i_violations: violations_i,
        condition_ii_violations: violations_ii,
    })
}
