//! Weighted undirected graphs with optional loops, plus the constructions
//! used throughout the crate (joins, products, blow-ups, tails, families).
//!
//! Vertex ids are dense and 0-based. Every construction documents the id
//! layout it produces so that reports are reproducible.

mod family;
mod io;
mod ops;

use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub use family::{FamilySpec, VertexRole};
pub use io::{parse_graph, read_graph, write_graph};
pub use ops::{
    attach_tails, blow_up, cartesian_product, complement, direct_product, join, union, BlowUpMode,
    BlowUpPart, PartFill,
};

/// A single undirected edge in canonical form (`u <= v`). Loops have `u == v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Undirected graph on vertices `0..n` with finite nonzero real weights.
///
/// Values are immutable once built; use [`GraphBuilder`] to construct one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    adjacency: Vec<BTreeMap<usize, f64>>,
    labels: Option<Vec<String>>,
}

impl WeightedGraph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        WeightedGraph {
            adjacency: vec![BTreeMap::new(); n],
            labels: None,
        }
    }

    /// Builds a graph from `(u, v, w)` triples.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut b = GraphBuilder::new(n);
        for (u, v, w) in edges {
            b.add_edge(u, v, w)?;
        }
        Ok(b.build())
    }

    /// Unit-weight graph from an edge list.
    pub fn from_unweighted<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::from_edges(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    pub fn order(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    /// Edges in canonical order (sorted by `(u, v)` with `u <= v`).
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, nbrs)| {
            nbrs.range(u..)
                .map(move |(&v, &weight)| Edge { u, v, weight })
        })
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        self.adjacency.get(u)?.get(&v).copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.weight(u, v).is_some()
    }

    /// Loop weight at `u`, zero when there is no loop.
    pub fn loop_weight(&self, u: usize) -> f64 {
        self.weight(u, u).unwrap_or(0.0)
    }

    /// Neighbours of `u` with edge weights, excluding `u` itself.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.adjacency[u]
            .iter()
            .filter(move |(&v, _)| v != u)
            .map(|(&v, &w)| (v, w))
    }

    /// Number of distinct neighbours (loops excluded).
    pub fn valency(&self, u: usize) -> usize {
        self.neighbors(u).count()
    }

    /// `deg(u) = 2 w(u,u) + sum_{j != u} w(u,j)`: loops count twice.
    pub fn degree(&self, u: usize) -> f64 {
        2.0 * self.loop_weight(u) + self.neighbors(u).map(|(_, w)| w).sum::<f64>()
    }

    pub fn degrees(&self) -> Vec<f64> {
        (0..self.order()).map(|u| self.degree(u)).collect()
    }

    pub fn has_loops(&self) -> bool {
        (0..self.order()).any(|u| self.has_edge(u, u))
    }

    pub fn is_simple(&self) -> bool {
        !self.has_loops()
    }

    pub fn is_unweighted(&self) -> bool {
        self.edges().all(|e| e.weight == 1.0)
    }

    pub fn is_positively_weighted(&self) -> bool {
        self.edges().all(|e| e.weight > 0.0)
    }

    /// `Some(d)` when every vertex has the same degree `d`.
    pub fn regular_degree(&self) -> Option<f64> {
        let degs = self.degrees();
        let first = *degs.first()?;
        degs.iter()
            .all(|&d| (d - first).abs() <= 1e-12 * first.abs().max(1.0))
            .then_some(first)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.order();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for (v, _) in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order() {
            return Err(Error::InvalidArgument(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.order()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    pub fn check_vertex(&self, vertex: usize) -> Result<()> {
        if vertex < self.order() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex,
                order: self.order(),
            })
        }
    }

    /// Deterministic 64-bit FNV-1a digest of the order and edge list.
    pub fn digest(&self) -> u64 {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut h = OFFSET;
        let mut eat = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(PRIME);
            }
        };
        eat(self.order() as u64);
        for e in self.edges() {
            eat(e.u as u64);
            eat(e.v as u64);
            eat(e.weight.to_bits());
        }
        h
    }
}

/// Incremental constructor for [`WeightedGraph`].
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    adjacency: Vec<BTreeMap<usize, f64>>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder {
            adjacency: vec![BTreeMap::new(); n],
        }
    }

    /// Starts from an existing graph, keeping its edges.
    pub fn from_graph(g: &WeightedGraph) -> Self {
        GraphBuilder {
            adjacency: g.adjacency.clone(),
        }
    }

    pub fn order(&self) -> usize {
        self.adjacency.len()
    }

    /// Appends `count` isolated vertices and returns the id of the first one.
    pub fn add_vertices(&mut self, count: usize) -> usize {
        let first = self.adjacency.len();
        self.adjacency
            .extend(std::iter::repeat_with(BTreeMap::new).take(count));
        first
    }

    /// Inserts `{u, v}` with weight `w`. Re-inserting an existing edge is an error.
    pub fn add_edge(&mut self, u: usize, v: usize, w: f64) -> Result<&mut Self> {
        let n = self.adjacency.len();
        for x in [u, v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, order: n });
            }
        }
        if !w.is_finite() || w == 0.0 {
            return Err(Error::InvalidWeight(w));
        }
        if self.adjacency[u].contains_key(&v) {
            return Err(Error::DuplicateEdge {
                u: u.min(v),
                v: u.max(v),
            });
        }
        self.adjacency[u].insert(v, w);
        self.adjacency[v].insert(u, w);
        Ok(self)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency
            .get(u)
            .is_some_and(|nbrs| nbrs.contains_key(&v))
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Option<f64> {
        let w = self.adjacency.get_mut(u)?.remove(&v)?;
        self.adjacency[v].remove(&u);
        Some(w)
    }

    pub fn build(self) -> WeightedGraph {
        WeightedGraph {
            adjacency: self.adjacency,
            labels: None,
        }
    }
}
