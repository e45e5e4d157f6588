//! Simple undirected graphs with vertex ids `1..=n`, plus vertex colorings.
//!
//! Adjacency is stored as a sorted neighbor sequence per vertex, which fixes
//! the meaning of "the i-th neighbor" for the indexed-neighbor oracle and
//! makes all sampling reproducible under a fixed seed.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use thiserror::Error;

/// 1-based vertex id.
pub type Vertex = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("endpoint {v} out of range 1..={n}")]
    OutOfRange { v: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
}

/// Normalizes an edge to `(min, max)` order.
#[inline]
pub fn norm_edge(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A simple undirected graph on vertices `{1..n}`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    m: usize,
}

impl Graph {
    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        1..=self.n() as Vertex
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[(v - 1) as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[(v - 1) as usize].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges in lexicographic `(u, v)` order with `u < v`.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.m);
        for v in self.vertices() {
            for &w in self.neighbors(v) {
                if v < w {
                    out.push((v, w));
                }
            }
        }
        out
    }

    pub fn edge_set(&self) -> BTreeSet<(Vertex, Vertex)> {
        self.edges().into_iter().collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![1 as Vertex];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if !seen[(w - 1) as usize] {
                    seen[(w - 1) as usize] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n()
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n()];
        let mut comps = Vec::new();
        for v in self.vertices() {
            if seen[(v - 1) as usize] {
                continue;
            }
            let mut comp = vec![v];
            let mut stack = vec![v];
            seen[(v - 1) as usize] = true;
            while let Some(u) = stack.pop() {
                for &w in self.neighbors(u) {
                    if !seen[(w - 1) as usize] {
                        seen[(w - 1) as usize] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// `|E| <= 3|V| - 6` check (vacuous below 3 vertices).
    pub fn satisfies_euler_bound(&self) -> bool {
        self.n() < 3 || self.m <= 3 * self.n() - 6
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={}, edges={:?})", self.n(), self.m, self.edges())
    }
}

/// Builds a simple graph from an edge list, deduplicating parallel edges.
///
/// Rejects self-loops and endpoints outside `1..=n`.
pub fn build_graph(n: usize, edge_list: &[(Vertex, Vertex)]) -> Result<Graph, GraphError> {
    let mut set = BTreeSet::new();
    for &(u, v) in edge_list {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        for w in [u, v] {
            if w < 1 || w as usize > n {
                return Err(GraphError::OutOfRange { v: w, n });
            }
        }
        set.insert(norm_edge(u, v));
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in &set {
        adj[(u - 1) as usize].push(v);
        adj[(v - 1) as usize].push(u);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    Ok(Graph { adj, m: set.len() })
}

/// A total vertex coloring with colors `1..=h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<u8>,
}

impl Coloring {
    /// `colors[v-1]` is the color of vertex `v`; every entry must be in `1..=h`.
    pub fn new(colors: Vec<u8>) -> Self {
        assert!(colors.iter().all(|&c| c >= 1), "colors are 1-based");
        Coloring { colors }
    }

    pub fn of(&self, v: Vertex) -> u8 {
        self.colors[(v - 1) as usize]
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Uniformly random coloring of `n` vertices with colors `1..=h`.
    pub fn random(n: usize, h: u8, rng: &mut impl Rng) -> Self {
        Coloring { colors: (0..n).map(|_| rng.gen_range(1..=h)).collect() }
    }
}
