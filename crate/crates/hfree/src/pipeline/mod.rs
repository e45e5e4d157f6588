//! The contraction pipeline: shrinking a pattern into labeled hypergraphs,
//! mirroring the shrinking on edge-disjoint colored copies, selecting copy
//! subsets that keep every contraction safe, and exploring the resulting
//! hypergraphs.
//!
//! The intended flow for a far instance is
//! `best_coloring -> greedy_packing -> degree_prune -> next_level^(h-1) ->
//! representatives`, after which `hrlbd` on the final selfloop-only
//! hypergraph detects a copy with constant probability.

mod contracted;
mod hyper;
mod reps;
mod select;
mod shadow;
mod shrink;

pub use contracted::{build_q, is_consistent, is_safe, ContractedHypergraph, QEdge};
pub use hyper::{hrlbd, hrlbfs, verify_hyper_witness, HyperExploration, HyperWitness};
pub use reps::{representatives, RepresentativeFunctions};
pub use select::{
    al_select, degree_prune, many_safe, next_level, prune_to_safe, AlOutcome, NextLevel,
};
pub use shadow::{shadow, ShadowGraph, SubGraph};
pub use shrink::{
    check_shrink_invariants, shrink_pattern, shrink_steps, PatternEdge, ShrunkPattern,
};

use thiserror::Error;

use crate::graph::Vertex;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PipelineError {
    #[error("contraction order is not valid: {0}")]
    InvalidOrder(String),
    #[error("pattern must be connected for the shrinking process (step {step} has no remaining neighbors)")]
    PatternDisconnected { step: usize },
    #[error("copy set carries no coloring")]
    UncoloredCopySet,
    #[error(
        "vertex {vertex} is unsafe at step {step}: copies {copy_a} and {copy_b} disagree on its neighbors"
    )]
    UnsafeContraction { step: usize, vertex: Vertex, copy_a: usize, copy_b: usize },
    #[error("shadow contraction of ({u},{w}) at step {step} has no such edge (color {color})")]
    ContractionEdgeMissing { color: u8, step: usize, u: Vertex, w: Vertex },
    #[error("no vertex with few distinct neighbors exists; shadow invariants are broken")]
    NoLowDegreeVertex,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("retry budget exhausted: {0}")]
    RetryLimit(String),
    #[error("selection bound violated: {0}")]
    BoundViolated(String),
}
