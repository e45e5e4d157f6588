//! Constant-query one-sided-error testers for subgraph-freeness in planar
//! graphs under the random-neighbor oracle, together with the contraction
//! machinery (pattern shrinking, labeled hypergraphs, shadow graphs,
//! copy-set selection) that backs their analysis, made executable and
//! checkable against exact brute-force oracles on small instances.
//!
//! Layout:
//! - [`graph`]: simple graphs with vertex ids `1..=n` and vertex colorings.
//! - [`oracle`]: query-metered access models (random neighbor, random
//!   distinct neighbor, degree + indexed neighbor) and seedable RNG streams.
//! - [`instances`]: planar test-instance generators and edge-list I/O.
//! - [`explore`]: bounded-breadth bounded-depth exploration, rooted
//!   isomorphism, and the canonical tester runner.
//! - [`subgraph`]: exact desk-scale oracles — copy enumeration, packing,
//!   deletion distance, farness certificates, planarity, freeness audit.
//! - [`testers`]: the one-sided testers and oracle-sensitivity experiments.
//! - [`pipeline`]: pattern shrinking, contracted hypergraphs, safe vertices,
//!   shadow graphs, copy selection, representatives, hypergraph exploration.
//! - [`experiment`]: experiment orchestration and CSV emission.
//! - [`brute`]: independent exhaustive reference implementations used to
//!   cross-check everything above at desk scale.

pub mod brute;
pub mod experiment;
pub mod explore;
pub mod graph;
pub mod instances;
pub mod oracle;
pub mod pipeline;
pub mod stats;
pub mod subgraph;
pub mod testers;

pub use graph::{build_graph, Coloring, Graph, GraphError, Vertex};
pub use oracle::{trial_rng, OracleKind, QueryMeter};
