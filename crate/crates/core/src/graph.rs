//! Undirected simple graphs and colorings.
//!
//! Vertices are `0..n` internally; every file format and report uses the
//! 1-based labels `1..=n`. The vertex ordering used by the collapse phase is
//! the numeric label order.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// A color in `1..=k`.
pub type Color = u32;

/// Immutable adjacency structure with sorted neighbor lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<u32>>,
    edges: Vec<(u32, u32)>,
    max_degree: u32,
}

impl Graph {
    /// Builds a graph from 0-based edge pairs. Duplicate edges (in either
    /// orientation) are merged; self-loops and out-of-range endpoints are errors.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut normalized = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidEdge { u, v, n });
            }
            normalized.push(if u < v {
                (u as u32, v as u32)
            } else {
                (v as u32, u as u32)
            });
        }
        Ok(Self::from_normalized(n, normalized))
    }

    pub(crate) fn from_normalized(n: usize, mut edges: Vec<(u32, u32)>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let max_degree = adjacency.iter().map(|a| a.len() as u32).max().unwrap_or(0);
        Graph {
            adjacency,
            edges,
            max_degree,
        }
    }

    pub fn edgeless(n: usize) -> Self {
        Self::from_normalized(n, Vec::new())
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges as 0-based pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Neighbors preceding `v` in the vertex ordering.
    pub fn earlier_neighbors(&self, v: usize) -> &[u32] {
        let adj = &self.adjacency[v];
        &adj[..adj.partition_point(|&w| (w as usize) < v)]
    }

    /// Neighbors following `v` in the vertex ordering, ascending.
    pub fn later_neighbors(&self, v: usize) -> &[u32] {
        let adj = &self.adjacency[v];
        &adj[adj.partition_point(|&w| (w as usize) <= v)..]
    }

    /// Δ, the maximum vertex degree; 0 for edgeless graphs.
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Hex digest of the canonical edge list, used to tag reports.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!("n {}\n", self.n()));
        for &(u, v) in &self.edges {
            hasher.update(format!("{} {}\n", u + 1, v + 1));
        }
        hex::encode(&hasher.finalize()[..16])
    }

    /// Relabels vertices: old vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n());
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (perm[u as usize] as u32, perm[v as usize] as u32);
                (a.min(b), a.max(b))
            })
            .collect();
        Self::from_normalized(self.n(), edges)
    }
}

/// Free-function form of [`Graph::max_degree`].
pub fn max_degree(g: &Graph) -> u32 {
    g.max_degree()
}

/// Checks that `k > 3Δ` and `k ≥ 1`.
pub fn validate_instance(g: &Graph, k: u32) -> Result<()> {
    let delta = g.max_degree();
    if k == 0 || u64::from(k) <= 3 * u64::from(delta) {
        return Err(Error::InstanceRejected { k, delta });
    }
    Ok(())
}

/// A total assignment of colors `1..=k` to the vertices, indexed 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coloring(Vec<Color>);

impl Coloring {
    pub fn new(colors: Vec<Color>) -> Self {
        Coloring(colors)
    }

    /// Every vertex gets color 1.
    pub fn constant(n: usize, color: Color) -> Self {
        Coloring(vec![color; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Color] {
        &self.0
    }

    pub fn set(&mut self, v: usize, c: Color) {
        self.0[v] = c;
    }

    pub fn into_inner(self) -> Vec<Color> {
        self.0
    }

    /// Checks length and that every entry lies in `1..=k`.
    pub fn check(&self, g: &Graph, k: u32) -> Result<()> {
        if self.len() != g.n() {
            return Err(Error::ColoringSize {
                expected: g.n(),
                got: self.len(),
            });
        }
        match self.0.iter().position(|&c| c == 0 || c > k) {
            Some(vertex) => Err(Error::ColorOutOfRange {
                vertex,
                color: self.0[vertex],
                k,
            }),
            None => Ok(()),
        }
    }
}

impl Index<usize> for Coloring {
    type Output = Color;

    fn index(&self, v: usize) -> &Color {
        &self.0[v]
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// True iff no edge is monochromatic.
pub fn is_proper(g: &Graph, chi: &Coloring) -> bool {
    g.edges().iter().all(|&(u, v)| chi[u as usize] != chi[v as usize])
}
