//! Independent exhaustive reference implementations.
//!
//! Everything here recomputes a quantity from first principles — full choice
//! trees, all permutations, all injections — without touching the randomized
//! or pruned code paths it is used to check. Strictly desk-scale.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::Rng;

use crate::graph::{build_graph, norm_edge, Coloring, Graph, Vertex};
use crate::subgraph::{CopyEmbedding, CopySet};

/// Sorted edge list of a subgraph, the canonical outcome key.
pub type EdgeSet = BTreeSet<(Vertex, Vertex)>;
/// A subgraph as (sorted vertex image, sorted edge image).
pub type SubgraphKey = (Vec<Vertex>, Vec<(Vertex, Vertex)>);

/// Probability that `traverse(g, root, dg, ld)` ends with an edge set
/// satisfying `pred`, by exhaustive enumeration of every sequence of neighbor
/// draws. Exponential in `dg`, `ld`, and the degrees: tiny inputs only.
pub fn traverse_outcome_probability(
    g: &Graph,
    root: Vertex,
    dg: usize,
    ld: usize,
    pred: impl Fn(&EdgeSet) -> bool,
) -> f64 {
    let mut outcomes: HashMap<EdgeSet, f64> = HashMap::new();
    enumerate_levels(
        g,
        vec![root],
        BTreeSet::from([root]),
        BTreeSet::new(),
        dg,
        ld,
        1.0,
        &mut outcomes,
    );
    outcomes.iter().filter(|(e, _)| pred(e)).map(|(_, p)| p).sum()
}

/// Probability that a full `rlbd` call (uniform root, then traverse) ends
/// with an edge set satisfying `pred`.
pub fn rlbd_outcome_probability(
    g: &Graph,
    dg: usize,
    ld: usize,
    pred: impl Fn(&EdgeSet) -> bool,
) -> f64 {
    let n = g.n() as f64;
    g.vertices()
        .map(|v| traverse_outcome_probability(g, v, dg, ld, &pred) / n)
        .sum()
}

#[allow(clippy::too_many_arguments)]
fn enumerate_levels(
    g: &Graph,
    frontier: Vec<Vertex>,
    visited: BTreeSet<Vertex>,
    edges: EdgeSet,
    dg: usize,
    remaining: usize,
    prob: f64,
    out: &mut HashMap<EdgeSet, f64>,
) {
    if remaining == 0 || frontier.is_empty() {
        *out.entry(edges).or_insert(0.0) += prob;
        return;
    }
    // All ways the whole level can draw: for each expanded vertex, dg
    // independent uniform neighbor choices.
    let expanded: Vec<Vertex> = frontier.iter().copied().filter(|&u| g.degree(u) > 0).collect();
    let mut states: Vec<(BTreeSet<Vertex>, EdgeSet, f64)> =
        vec![(BTreeSet::new(), BTreeSet::new(), 1.0)];
    for &u in &expanded {
        let ns = g.neighbors(u);
        let p_each = 1.0 / ns.len() as f64;
        for _ in 0..dg {
            let mut next = Vec::new();
            for (gamma, es, p) in &states {
                for &x in ns {
                    let mut gamma2 = gamma.clone();
                    let mut es2 = es.clone();
                    gamma2.insert(x);
                    es2.insert(norm_edge(u, x));
                    next.push((gamma2, es2, p * p_each));
                }
            }
            // merge identical partial states to keep the tree small
            let mut merged: HashMap<SubgraphKey, f64> = HashMap::new();
            for (gamma, es, p) in next {
                let key = (
                    gamma.iter().copied().collect::<Vec<_>>(),
                    es.iter().copied().collect::<Vec<_>>(),
                );
                *merged.entry(key).or_insert(0.0) += p;
            }
            states = merged
                .into_iter()
                .map(|((gamma, es), p)| {
                    (gamma.into_iter().collect(), es.into_iter().collect(), p)
                })
                .collect();
        }
    }
    for (gamma, level_edges, p) in states {
        let next_frontier: Vec<Vertex> =
            gamma.difference(&visited).copied().collect();
        let mut visited2 = visited.clone();
        visited2.extend(next_frontier.iter().copied());
        let mut edges2 = edges.clone();
        edges2.extend(level_edges.iter().copied());
        enumerate_levels(g, next_frontier, visited2, edges2, dg, remaining - 1, prob * p, out);
    }
}

/// All copies of `h` in `g` by trying every injection, as a set of
/// (sorted vertex image, sorted edge image) pairs. Oracle for the matcher.
pub fn naive_copies(g: &Graph, h: &Graph) -> BTreeSet<SubgraphKey> {
    let mut out = BTreeSet::new();
    let mut map = vec![0 as Vertex; h.n()];
    fn rec(
        g: &Graph,
        h: &Graph,
        depth: usize,
        map: &mut Vec<Vertex>,
        used: &mut HashSet<Vertex>,
        out: &mut BTreeSet<SubgraphKey>,
    ) {
        if depth == h.n() {
            let ok = h.edges().iter().all(|&(a, b)| {
                g.has_edge(map[(a - 1) as usize], map[(b - 1) as usize])
            });
            if ok {
                let mut verts = map.clone();
                verts.sort_unstable();
                let mut edges: Vec<_> = h
                    .edges()
                    .iter()
                    .map(|&(a, b)| norm_edge(map[(a - 1) as usize], map[(b - 1) as usize]))
                    .collect();
                edges.sort_unstable();
                out.insert((verts, edges));
            }
            return;
        }
        for cand in 1..=g.n() as Vertex {
            if used.insert(cand) {
                map[depth] = cand;
                rec(g, h, depth + 1, map, used, out);
                used.remove(&cand);
            }
        }
    }
    rec(g, h, 0, &mut map, &mut HashSet::new(), &mut out);
    out
}

/// Root-preserving isomorphism by trying all bijections. Oracle for the
/// pruned backtracking version; factorial, keep below ~8 vertices.
pub fn exhaustive_root_isomorphic(
    a: &crate::explore::RootedGraph,
    b: &crate::explore::RootedGraph,
) -> bool {
    let va = a.vertices().to_vec();
    let vb = b.vertices().to_vec();
    if va.len() != vb.len() {
        return false;
    }
    permutations(vb.len()).into_iter().any(|perm| {
        let map: HashMap<Vertex, Vertex> =
            va.iter().zip(perm.iter()).map(|(&x, &i)| (x, vb[i])).collect();
        va.iter().all(|&u| a.is_root(u) == b.is_root(map[&u]))
            && va.iter().all(|&u| {
                va.iter().all(|&v| {
                    u == v || a.adjacent(u, v) == b.adjacent(map[&u], map[&v])
                })
            })
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

/// Maximum (optimal) edge-disjoint packing size, by branch and bound over
/// the full copy list.
pub fn max_packing_exact(g: &Graph, h: &Graph) -> usize {
    let copies: Vec<CopyEmbedding> =
        crate::subgraph::enumerate_copies(g, h, usize::MAX, None).expect("desk scale");
    fn rec(
        copies: &[CopyEmbedding],
        idx: usize,
        used: &mut BTreeSet<(Vertex, Vertex)>,
        count: usize,
        best: &mut usize,
    ) {
        *best = (*best).max(count);
        if idx == copies.len() || count + (copies.len() - idx) <= *best {
            return;
        }
        let c = &copies[idx];
        if c.edge_image.iter().all(|e| !used.contains(e)) {
            for e in &c.edge_image {
                used.insert(*e);
            }
            rec(copies, idx + 1, used, count + 1, best);
            for e in &c.edge_image {
                used.remove(e);
            }
        }
        rec(copies, idx + 1, used, count, best);
    }
    let mut best = 0;
    rec(&copies, 0, &mut BTreeSet::new(), 0, &mut best);
    best
}

/// All connected graphs on exactly `n` labeled vertices, one representative
/// per isomorphism class.
pub fn connected_graphs_up_to_iso(n: usize) -> Vec<Graph> {
    assert!((1..=6).contains(&n), "desk scale only");
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
    let perms = permutations(n);
    let canon = |mask: usize| -> usize {
        let mut best = usize::MAX;
        for perm in &perms {
            let mut relabeled = 0usize;
            for (i, &(u, v)) in pairs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    let (u2, v2) = norm_edge(
                        (perm[(u - 1) as usize] + 1) as Vertex,
                        (perm[(v - 1) as usize] + 1) as Vertex,
                    );
                    let j = pairs.iter().position(|&p| p == (u2, v2)).unwrap();
                    relabeled |= 1 << j;
                }
            }
            best = best.min(relabeled);
        }
        best
    };
    let mut reps = BTreeSet::new();
    for mask in 0..(1usize << ne) {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = build_graph(n, &edges).unwrap();
        if g.is_connected() {
            reps.insert(canon(mask));
        }
    }
    reps.into_iter()
        .map(|mask| {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            build_graph(n, &edges).unwrap()
        })
        .collect()
}

/// Stepwise construction of the contracted hypergraph, following the global
/// description: per step, simultaneously contract every vertex of the step's
/// color inside every copy of the combined hypergraph, checking safety as it
/// goes. Independent route against the per-copy shrink-and-union builder.
///
/// Returns the final hyperedges as (sorted vertices, sorted label, copy).
#[allow(clippy::type_complexity)]
pub fn build_q_stepwise(
    g: &Graph,
    d: &CopySet,
    prefix: &[u8],
) -> Result<Vec<(Vec<Vertex>, Vec<Vertex>, u32)>, String> {
    let chi = d.coloring.as_ref().ok_or("copy set carries no coloring")?;
    assert_eq!(chi.len(), g.n());
    #[derive(Clone)]
    struct Edge {
        vertices: BTreeSet<Vertex>,
        label: BTreeSet<Vertex>,
        copy: u32,
    }
    let mut edges: Vec<Edge> = Vec::new();
    for (ci, c) in d.copies.iter().enumerate() {
        for &(u, v) in &c.edge_image {
            edges.push(Edge {
                vertices: BTreeSet::from([u, v]),
                label: BTreeSet::new(),
                copy: ci as u32,
            });
        }
    }
    for &color in prefix {
        // contracted vertices of this step, with the copies owning them
        let mut targets: HashMap<Vertex, Vec<u32>> = HashMap::new();
        for (ci, c) in d.copies.iter().enumerate() {
            targets.entry(c.image(color)).or_default().push(ci as u32);
        }
        // safety: per shared vertex, neighbor sets across copies must agree
        for (&u, owners) in &targets {
            let nbrs_of = |copy: u32| -> BTreeSet<Vertex> {
                edges
                    .iter()
                    .filter(|e| e.copy == copy && e.vertices.contains(&u))
                    .flat_map(|e| e.vertices.iter().copied())
                    .filter(|&x| x != u)
                    .collect()
            };
            let first = nbrs_of(owners[0]);
            for &o in &owners[1..] {
                if nbrs_of(o) != first {
                    return Err(format!("vertex {u} unsafe at color {color}"));
                }
            }
        }
        let mut next: Vec<Edge> = Vec::new();
        let mut new_edges: Vec<Edge> = Vec::new();
        let mut absorbed: HashMap<(Vertex, u32), Edge> = HashMap::new();
        for e in edges {
            let hit: Vec<Vertex> = e
                .vertices
                .iter()
                .copied()
                .filter(|v| targets.get(v).is_some_and(|o| o.contains(&e.copy)))
                .collect();
            match hit.as_slice() {
                [] => next.push(e),
                [u] => {
                    // merge into this copy's pending hyperedge at u
                    let slot = absorbed.entry((*u, e.copy)).or_insert_with(|| Edge {
                        vertices: BTreeSet::new(),
                        label: BTreeSet::from([*u]),
                        copy: e.copy,
                    });
                    slot.vertices.extend(e.vertices.iter().copied().filter(|x| x != u));
                    slot.label.extend(e.label.iter().copied());
                }
                _ => {
                    return Err(format!(
                        "edge {:?} touches two contracted vertices; monochromatic copies",
                        e.vertices
                    ))
                }
            }
        }
        for (_, e) in absorbed {
            if e.vertices.is_empty() {
                return Err("contraction produced an empty hyperedge".into());
            }
            new_edges.push(e);
        }
        next.extend(new_edges);
        edges = next;
    }
    Ok(edges
        .into_iter()
        .map(|e| {
            (
                e.vertices.into_iter().collect(),
                e.label.into_iter().collect(),
                e.copy,
            )
        })
        .collect())
}

/// Probability that `draws` uniform picks over classes with the given sizes
/// hit every class at least once (inclusion-exclusion).
pub fn coverage_probability(class_sizes: &[u64], draws: u32) -> f64 {
    let total: u64 = class_sizes.iter().sum();
    if class_sizes.is_empty() {
        return 1.0;
    }
    if class_sizes.contains(&0) {
        return 0.0;
    }
    let s = class_sizes.len();
    let mut p = 0.0;
    for subset in 0..(1u32 << s) {
        let missing: u64 = (0..s)
            .filter(|&j| subset >> j & 1 == 1)
            .map(|j| class_sizes[j])
            .sum();
        let sign = if subset.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        p += sign * ((total - missing) as f64 / total as f64).powi(draws as i32);
    }
    p.clamp(0.0, 1.0)
}

/// Planar "copy soup": `k` colored copies of a connected pattern, glued by
/// identifying same-colored vertices of different connected components
/// (a one-point amalgamation, so planarity is preserved), plus isolated
/// padding. Produces instances whose copies overlap at vertices but never
/// at edges.
pub fn fuzz_copy_soup(
    h: &Graph,
    k: usize,
    merges: usize,
    pad: usize,
    rng: &mut impl Rng,
) -> (Graph, CopySet) {
    assert!(h.is_connected() && h.n() >= 2, "pattern must be connected");
    let hn = h.n();
    // start from k disjoint copies on provisional ids
    let mut maps: Vec<Vec<Vertex>> = (0..k)
        .map(|j| (1..=hn as Vertex).map(|a| (j * hn) as Vertex + a).collect())
        .collect();
    let mut merged_into: HashMap<Vertex, Vertex> = HashMap::new();
    let resolve = |mut v: Vertex, m: &HashMap<Vertex, Vertex>| -> Vertex {
        while let Some(&w) = m.get(&v) {
            v = w;
        }
        v
    };
    // union-find-ish component tracking over copies: two copies in the same
    // component may not be glued again
    let mut comp: Vec<usize> = (0..k).collect();
    fn find(comp: &mut Vec<usize>, i: usize) -> usize {
        if comp[i] != i {
            let r = find(comp, comp[i]);
            comp[i] = r;
            r
        } else {
            comp[i]
        }
    }
    let mut done = 0;
    let mut attempts = 0;
    while done < merges && attempts < merges * 20 {
        attempts += 1;
        let (i, j) = (rng.gen_range(0..k), rng.gen_range(0..k));
        let (ri, rj) = (find(&mut comp, i), find(&mut comp, j));
        if ri == rj {
            continue;
        }
        let role = rng.gen_range(1..=hn as u8);
        let a = resolve(maps[i][(role - 1) as usize], &merged_into);
        let b = resolve(maps[j][(role - 1) as usize], &merged_into);
        if a == b {
            continue;
        }
        merged_into.insert(b, a);
        comp[rj] = ri;
        done += 1;
    }
    // compact ids
    let mut ids: BTreeSet<Vertex> = BTreeSet::new();
    for m in &maps {
        for &v in m {
            ids.insert(resolve(v, &merged_into));
        }
    }
    let rename: HashMap<Vertex, Vertex> = ids
        .iter()
        .enumerate()
        .map(|(idx, &v)| (v, (idx + 1) as Vertex))
        .collect();
    let n = ids.len() + pad;
    let mut colors = vec![1u8; n];
    for m in &mut maps {
        for (idx, v) in m.iter_mut().enumerate() {
            *v = rename[&resolve(*v, &merged_into)];
            colors[(*v - 1) as usize] = (idx + 1) as u8;
        }
    }
    for c in colors.iter_mut().skip(ids.len()) {
        *c = rng.gen_range(1..=hn as u8);
    }
    let mut edges = Vec::new();
    for m in &maps {
        for (a, b) in h.edges() {
            edges.push((m[(a - 1) as usize], m[(b - 1) as usize]));
        }
    }
    let g = build_graph(n, &edges).expect("soup is simple");
    let copies: Vec<CopyEmbedding> =
        maps.into_iter().map(|m| CopyEmbedding::new(h, m)).collect();
    let cs = CopySet { copies, coloring: Some(Coloring::new(colors)) };
    debug_assert!(cs.validate(&g, h).is_ok());
    (g, cs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{complete, cycle, grid, path};
    use crate::oracle::trial_rng;

    #[test]
    fn traverse_tree_probabilities_sum_to_one() {
        let g = complete(3);
        let total = traverse_outcome_probability(&g, 1, 2, 2, |_| true);
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn triangle_rlbd_probability_by_hand() {
        // dg = 2, ld = 2 on a single triangle: level 1 sees both neighbors
        // with probability 1/2; given that, the closing edge is drawn by
        // either endpoint with probability 1 - (1/4)(1/4) = 15/16.
        let g = complete(3);
        let p = rlbd_outcome_probability(&g, 2, 2, |edges| edges.len() == 3);
        assert!((p - 15.0 / 32.0).abs() < 1e-9, "got {p}");
    }

    #[test]
    fn naive_matches_matcher_on_small_graphs() {
        let cases = [
            (grid(2, 3), complete(3)),
            (complete(4), complete(3)),
            (complete(4), path(3)),
            (cycle(5), path(4)),
            (grid(2, 2), cycle(4)),
        ];
        for (g, h) in cases {
            let naive = naive_copies(&g, &h);
            let fast = crate::subgraph::enumerate_copies(&g, &h, usize::MAX, None).unwrap();
            let fast_keys: BTreeSet<_> = fast
                .iter()
                .map(|c| {
                    let mut v = c.vertex_map.clone();
                    v.sort_unstable();
                    (v, c.edge_image.clone())
                })
                .collect();
            assert_eq!(naive, fast_keys);
        }
    }

    #[test]
    fn max_packing_k4() {
        assert_eq!(max_packing_exact(&complete(4), &complete(3)), 1);
        assert_eq!(max_packing_exact(&complete(5), &complete(3)), 2);
    }

    #[test]
    fn connected_graph_counts() {
        // known counts of connected graphs up to isomorphism
        assert_eq!(connected_graphs_up_to_iso(1).len(), 1);
        assert_eq!(connected_graphs_up_to_iso(2).len(), 1);
        assert_eq!(connected_graphs_up_to_iso(3).len(), 2);
        assert_eq!(connected_graphs_up_to_iso(4).len(), 6);
        assert_eq!(connected_graphs_up_to_iso(5).len(), 21);
    }

    #[test]
    fn coverage_single_class_is_certain() {
        assert!((coverage_probability(&[3], 1) - 1.0).abs() < 1e-12);
        let p = coverage_probability(&[1, 1], 9);
        assert!((p - (1.0 - 2.0 * 0.5f64.powi(9))).abs() < 1e-12);
    }

    #[test]
    fn soup_is_planar_sized_and_valid() {
        let h = complete(3);
        for seed in 0..40 {
            let mut rng = trial_rng(seed, 0);
            let (g, cs) = fuzz_copy_soup(&h, 6, 3, 2, &mut rng);
            assert!(cs.validate(&g, &h).is_ok());
            assert!(g.satisfies_euler_bound());
            assert_eq!(cs.len(), 6);
        }
    }
}
