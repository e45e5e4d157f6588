//! Oracle access models with query accounting.
//!
//! All testers touch the input graph only through the functions here, so the
//! meter counts are exact. Neighbor draws are with replacement; the
//! distinct-neighbor model additionally remembers what it already returned
//! per vertex and reports exhaustion as a value, not an error.

use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, Vertex};

/// Which access model a tester is run against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    RandomNeighbor,
    RandomDistinctNeighbor,
    DegreeIndexed,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("vertex {0} is isolated")]
    IsolatedVertex(Vertex),
    #[error("neighbor index {i} out of range for vertex {v} of degree {deg}")]
    IndexOutOfRange { v: Vertex, i: usize, deg: usize },
}

/// Counts every oracle query of a single tester run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QueryMeter {
    pub random_vertex: u64,
    pub random_neighbor: u64,
    pub distinct_neighbor: u64,
    pub degree: u64,
    pub indexed_neighbor: u64,
}

impl QueryMeter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn total(&self) -> u64 {
        self.random_vertex
            + self.random_neighbor
            + self.distinct_neighbor
            + self.degree
            + self.indexed_neighbor
    }

    pub fn merge(&mut self, other: &QueryMeter) {
        self.random_vertex += other.random_vertex;
        self.random_neighbor += other.random_neighbor;
        self.distinct_neighbor += other.distinct_neighbor;
        self.degree += other.degree;
        self.indexed_neighbor += other.indexed_neighbor;
    }
}

/// Independent reproducible RNG stream for one trial.
///
/// Streams derived from the same master seed but different trial indices are
/// independent, so trials can run concurrently and still replay bit-exact.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// Uniform vertex from `{1..n}`.
pub fn random_vertex(
    g: &Graph,
    meter: &mut QueryMeter,
    rng: &mut impl Rng,
) -> Result<Vertex, OracleError> {
    if g.n() == 0 {
        return Err(OracleError::EmptyGraph);
    }
    meter.random_vertex += 1;
    Ok(rng.gen_range(1..=g.n() as Vertex))
}

/// Uniform neighbor of `v`, with replacement across calls.
pub fn random_neighbor(
    g: &Graph,
    v: Vertex,
    meter: &mut QueryMeter,
    rng: &mut impl Rng,
) -> Result<Vertex, OracleError> {
    let ns = g.neighbors(v);
    if ns.is_empty() {
        return Err(OracleError::IsolatedVertex(v));
    }
    meter.random_neighbor += 1;
    Ok(ns[rng.gen_range(0..ns.len())])
}

/// Degree query.
pub fn degree_query(g: &Graph, v: Vertex, meter: &mut QueryMeter) -> usize {
    meter.degree += 1;
    g.degree(v)
}

/// The i-th neighbor of `v` in sorted adjacency order, `1 <= i <= deg(v)`.
pub fn indexed_neighbor(
    g: &Graph,
    v: Vertex,
    i: usize,
    meter: &mut QueryMeter,
) -> Result<Vertex, OracleError> {
    let ns = g.neighbors(v);
    if i < 1 || i > ns.len() {
        return Err(OracleError::IndexOutOfRange { v, i, deg: ns.len() });
    }
    meter.indexed_neighbor += 1;
    Ok(ns[i - 1])
}

/// Stateful random-distinct-neighbor oracle.
///
/// Each query for `v` returns a neighbor not returned before, uniformly among
/// the remaining ones; once all `deg(v)` neighbors are out it returns `None`
/// (the special "exhausted" symbol). After `deg(v) + 1` queries the caller
/// therefore knows `deg(v)` exactly.
pub struct DistinctNeighborOracle<'g> {
    g: &'g Graph,
    remaining: HashMap<Vertex, Vec<Vertex>>,
}

impl<'g> DistinctNeighborOracle<'g> {
    pub fn new(g: &'g Graph) -> Self {
        DistinctNeighborOracle { g, remaining: HashMap::new() }
    }

    pub fn query(
        &mut self,
        v: Vertex,
        meter: &mut QueryMeter,
        rng: &mut impl Rng,
    ) -> Option<Vertex> {
        meter.distinct_neighbor += 1;
        let rem = self
            .remaining
            .entry(v)
            .or_insert_with(|| self.g.neighbors(v).to_vec());
        if rem.is_empty() {
            return None;
        }
        let i = rng.gen_range(0..rem.len());
        Some(rem.swap_remove(i))
    }
}
