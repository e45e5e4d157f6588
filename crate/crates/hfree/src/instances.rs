//! Planar test-instance generators, named forbidden patterns, and the
//! canonical edge-list text format.
//!
//! Every generated kind except [`InstanceSpec::CliqueOnSqrtN`] is planar by
//! construction; the clique is the classic hard case kept around for
//! negative tests.

use std::fmt;

use thiserror::Error;

use crate::graph::{build_graph, Graph, GraphError, Vertex};
use crate::subgraph::{self, CopySet};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("invalid instance spec: {0}")]
    InvalidSpec(String),
    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// What to generate.
#[derive(Clone, Debug, PartialEq)]
pub enum InstanceSpec {
    /// `copies` vertex-disjoint copies of a pattern plus `pad` isolated vertices.
    DisjointCopies { copies: usize, pad: usize },
    /// `rows x cols` grid graph.
    Grid { rows: usize, cols: usize },
    /// Cycle C_n.
    Cycle { n: usize },
    /// Perfect matching M_n (n even).
    Matching { n: usize },
    /// `rows x cols` grid with one diagonal per cell (a planar triangulated patch).
    TriangulationPatch { rows: usize, cols: usize },
    /// Clique on floor(sqrt(n)) vertices plus isolated vertices up to n.
    /// Intentionally non-planar once the clique has 5 or more vertices.
    CliqueOnSqrtN { n: usize },
}

impl fmt::Display for InstanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceSpec::DisjointCopies { copies, pad } => {
                write!(f, "disjoint-copies(k={copies},pad={pad})")
            }
            InstanceSpec::Grid { rows, cols } => write!(f, "grid({rows}x{cols})"),
            InstanceSpec::Cycle { n } => write!(f, "cycle({n})"),
            InstanceSpec::Matching { n } => write!(f, "matching({n})"),
            InstanceSpec::TriangulationPatch { rows, cols } => {
                write!(f, "triangulation({rows}x{cols})")
            }
            InstanceSpec::CliqueOnSqrtN { n } => write!(f, "clique-sqrt({n})"),
        }
    }
}

/// Generates a graph from `spec`; `pattern` is only consulted by
/// [`InstanceSpec::DisjointCopies`].
pub fn gen_instance(spec: &InstanceSpec, pattern: Option<&Graph>) -> Result<Graph, InstanceError> {
    match *spec {
        InstanceSpec::DisjointCopies { copies, pad } => {
            let h = pattern.ok_or_else(|| {
                InstanceError::InvalidSpec("disjoint-copies needs a pattern".into())
            })?;
            if copies == 0 {
                return Err(InstanceError::InvalidSpec("need at least one copy".into()));
            }
            if h.n() <= 8 && !subgraph::is_planar_small(h).unwrap_or(true) {
                return Err(InstanceError::InvalidSpec("pattern is not planar".into()));
            }
            Ok(disjoint_copies(h, copies, pad).0)
        }
        InstanceSpec::Grid { rows, cols } => {
            if rows == 0 || cols == 0 {
                return Err(InstanceError::InvalidSpec("grid sides must be positive".into()));
            }
            Ok(grid(rows, cols))
        }
        InstanceSpec::Cycle { n } => {
            if n < 3 {
                return Err(InstanceError::InvalidSpec("cycle needs n >= 3".into()));
            }
            Ok(cycle(n))
        }
        InstanceSpec::Matching { n } => {
            if n == 0 || n % 2 != 0 {
                return Err(InstanceError::InvalidSpec("matching needs even n >= 2".into()));
            }
            Ok(matching(n))
        }
        InstanceSpec::TriangulationPatch { rows, cols } => {
            if rows < 2 || cols < 2 {
                return Err(InstanceError::InvalidSpec(
                    "triangulation patch needs sides >= 2".into(),
                ));
            }
            Ok(triangulation_patch(rows, cols))
        }
        InstanceSpec::CliqueOnSqrtN { n } => {
            if n == 0 {
                return Err(InstanceError::InvalidSpec("need n >= 1".into()));
            }
            Ok(clique_on_sqrt(n))
        }
    }
}

/// `k` vertex-disjoint copies of `h` plus `pad` isolated vertices, together
/// with the colored copy set that witnesses them (vertex of copy `j` playing
/// role `a` is `j*h.n() + a`, colors equal to roles).
pub fn disjoint_copies(h: &Graph, k: usize, pad: usize) -> (Graph, CopySet) {
    let hn = h.n();
    let n = k * hn + pad;
    let mut edges = Vec::new();
    let mut copies = Vec::new();
    let mut colors = vec![1u8; n];
    for j in 0..k {
        let base = (j * hn) as Vertex;
        for (u, v) in h.edges() {
            edges.push((base + u, base + v));
        }
        let vertex_map: Vec<Vertex> = (1..=hn as Vertex).map(|a| base + a).collect();
        for a in 1..=hn {
            colors[(base as usize) + a - 1] = a as u8;
        }
        copies.push(subgraph::CopyEmbedding::new(h, vertex_map));
    }
    let g = build_graph(n, &edges).expect("disjoint copies are simple");
    let coloring = crate::graph::Coloring::new(colors);
    (g, CopySet { copies, coloring: Some(coloring) })
}

pub fn grid(rows: usize, cols: usize) -> Graph {
    let id = |r: usize, c: usize| (r * cols + c + 1) as Vertex;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    build_graph(rows * cols, &edges).expect("grid is simple")
}

pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (1..=n as Vertex)
        .map(|v| (v, if v == n as Vertex { 1 } else { v + 1 }))
        .collect();
    build_graph(n, &edges).expect("cycle is simple")
}

pub fn matching(n: usize) -> Graph {
    let edges: Vec<_> = (0..n as Vertex / 2).map(|i| (2 * i + 1, 2 * i + 2)).collect();
    build_graph(n, &edges).expect("matching is simple")
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n as Vertex).map(|v| (v, v + 1)).collect();
    build_graph(n, &edges).expect("path is simple")
}

pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (2..=leaves as Vertex + 1).map(|v| (1, v)).collect();
    build_graph(leaves + 1, &edges).expect("star is simple")
}

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 1..=n as Vertex {
        for v in (u + 1)..=n as Vertex {
            edges.push((u, v));
        }
    }
    build_graph(n, &edges).expect("clique is simple")
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 1..=a as Vertex {
        for v in (a as Vertex + 1)..=(a + b) as Vertex {
            edges.push((u, v));
        }
    }
    build_graph(a + b, &edges).expect("biclique is simple")
}

pub fn triangulation_patch(rows: usize, cols: usize) -> Graph {
    let id = |r: usize, c: usize| (r * cols + c + 1) as Vertex;
    let mut g = grid(rows, cols).edges();
    for r in 0..rows - 1 {
        for c in 0..cols - 1 {
            g.push((id(r, c), id(r + 1, c + 1)));
        }
    }
    build_graph(rows * cols, &g).expect("patch is simple")
}

pub fn clique_on_sqrt(n: usize) -> Graph {
    let s = (n as f64).sqrt().floor() as usize;
    let mut edges = Vec::new();
    for u in 1..=s as Vertex {
        for v in (u + 1)..=s as Vertex {
            edges.push((u, v));
        }
    }
    build_graph(n, &edges).expect("clique pad is simple")
}

/// Looks up a forbidden pattern by name: `triangle`, `cN`, `kN`, `pathN`,
/// `starN` (N leaves), or `kA,B` for complete bipartite.
pub fn pattern_by_name(name: &str) -> Result<Graph, InstanceError> {
    let bad = || InstanceError::InvalidSpec(format!("unknown pattern name: {name}"));
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    if name == "triangle" {
        return Ok(complete(3));
    }
    if let Some(rest) = name.strip_prefix("path") {
        let n = num(rest)?;
        if n < 1 {
            return Err(bad());
        }
        return Ok(path(n));
    }
    if let Some(rest) = name.strip_prefix("star") {
        let n = num(rest)?;
        if n < 1 {
            return Err(bad());
        }
        return Ok(star(n));
    }
    if let Some(rest) = name.strip_prefix('c') {
        let n = num(rest)?;
        if n < 3 {
            return Err(bad());
        }
        return Ok(cycle(n));
    }
    if let Some(rest) = name.strip_prefix('k') {
        if let Some((a, b)) = rest.split_once(',') {
            let (a, b) = (num(a)?, num(b)?);
            if a < 1 || b < 1 {
                return Err(bad());
            }
            return Ok(complete_bipartite(a, b));
        }
        let n = num(rest)?;
        if n < 1 {
            return Err(bad());
        }
        return Ok(complete(n));
    }
    Err(bad())
}

/// Canonical serialization: header `n m`, then one `u v` line per edge with
/// `u < v`, edges sorted lexicographically, LF newlines.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Parses the edge-list format; inverse of [`write_edge_list`] on its output.
pub fn read_edge_list(text: &str) -> Result<Graph, InstanceError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or(InstanceError::ParseError { line: 1, msg: "empty input".into() })?;
    let mut it = header.split_whitespace();
    let parse = |tok: Option<&str>, line: usize| -> Result<usize, InstanceError> {
        tok.ok_or(InstanceError::ParseError { line, msg: "missing field".into() })?
            .parse()
            .map_err(|_| InstanceError::ParseError { line, msg: "not an integer".into() })
    };
    let n = parse(it.next(), 1)?;
    let m = parse(it.next(), 1)?;
    if it.next().is_some() {
        return Err(InstanceError::ParseError { line: 1, msg: "trailing tokens".into() });
    }
    let mut edges = Vec::with_capacity(m);
    let mut count = 0;
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let u = parse(it.next(), lineno)? as Vertex;
        let v = parse(it.next(), lineno)? as Vertex;
        if it.next().is_some() {
            return Err(InstanceError::ParseError { line: lineno, msg: "trailing tokens".into() });
        }
        edges.push((u, v));
        count += 1;
    }
    if count != m {
        return Err(InstanceError::ParseError {
            line: count + 1,
            msg: format!("header declares {m} edges, found {count}"),
        });
    }
    Ok(build_graph(n, &edges)?)
}
