//! Immutable vertex-weighted graphs, the random-graph models, and traversal.

mod io;
mod sample;
mod traverse;
mod vertex_set;

pub use io::{read_graph, write_graph, write_graph_with_header};
pub use sample::*;
pub use traverse::*;
pub use vertex_set::VertexSet;

use crate::weights::LawError;

#[derive(Debug, thiserror::Error)]
pub enum GraphError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(u32, u32),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(u32, u32),
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Law(#[from] LawError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Undirected simple graph with per-vertex weights, in compressed adjacency
/// form. Neighbour lists are sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    weights: Vec<f64>,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    ell_n: f64,
}

impl Graph {
    /// Builds a graph from weights and an undirected edge list in any order.
    /// Self-loops, out-of-range endpoints and repeated edges are rejected.
    pub fn from_edges(weights: Vec<f64>, edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        let n = weights.len();
        if n > u32::MAX as usize {
            return Err(GraphError::InvalidArgument(format!("{n} vertices exceed the u32 index range")));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(GraphError::InvalidArgument(format!("vertex weight {w} must be positive")));
        }
        let mut degree = vec![0usize; n];
        for &(a, b) in edges {
            if a == b || a as usize >= n || b as usize >= n {
                return Err(GraphError::InvalidEdge(a, b));
            }
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; offsets[n]];
        for &(a, b) in edges {
            neighbors[fill[a as usize]] = b;
            fill[a as usize] += 1;
            neighbors[fill[b as usize]] = a;
            fill[b as usize] += 1;
        }
        for v in 0..n {
            let list = &mut neighbors[offsets[v]..offsets[v + 1]];
            list.sort_unstable();
            if let Some(pair) = list.windows(2).find(|p| p[0] == p[1]) {
                let (a, b) = (v as u32, pair[0]);
                return Err(GraphError::DuplicateEdge(a.min(b), a.max(b)));
            }
        }
        let ell_n = weights.iter().sum();
        Ok(Graph { weights, offsets, neighbors, ell_n })
    }

    /// `n` isolated vertices of weight one.
    pub fn empty(n: usize) -> Self {
        Graph::from_edges(vec![1.0; n], &[]).expect("empty graph is valid")
    }

    /// Unit weights; panics on an invalid edge list. Handy for fixtures.
    pub fn unweighted(n: usize, edges: &[(u32, u32)]) -> Self {
        Graph::from_edges(vec![1.0; n], edges).expect("valid edge list")
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, v: u32) -> f64 {
        self.weights[v as usize]
    }

    /// Total weight `ℓ_n`.
    pub fn ell_n(&self) -> f64 {
        self.ell_n
    }

    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.neighbors[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    #[inline]
    pub fn degree(&self, v: u32) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn mean_degree(&self) -> f64 {
        if self.n() == 0 {
            0.0
        } else {
            self.neighbors.len() as f64 / self.n() as f64
        }
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        (a as usize) < self.n() && self.neighbors(a).binary_search(&b).is_ok()
    }

    /// Edges `(i, j)` with `i < j` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n() as u32).flat_map(move |v| {
            self.neighbors(v).iter().filter(move |&&u| u > v).map(move |&u| (v, u))
        })
    }

    /// Re-checks symmetry, sortedness, the absence of loops and multi-edges,
    /// and that `ℓ_n` is the weight sum. Returns the first violation.
    pub fn check_invariants(&self) -> Result<(), String> {
        for v in 0..self.n() as u32 {
            let list = self.neighbors(v);
            if list.windows(2).any(|p| p[0] >= p[1]) {
                return Err(format!("neighbours of {v} not strictly increasing"));
            }
            for &u in list {
                if u == v {
                    return Err(format!("self-loop at {v}"));
                }
                if !self.has_edge(u, v) {
                    return Err(format!("edge {v}->{u} has no reverse"));
                }
            }
        }
        let sum: f64 = self.weights.iter().sum();
        if sum != self.ell_n {
            return Err(format!("ell_n {} differs from weight sum {sum}", self.ell_n));
        }
        Ok(())
    }
}
