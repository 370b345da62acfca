//! Graph Hamiltonians.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatrixKind {
    Adjacency,
    Laplacian,
    /// `αD + A`.
    GeneralizedAdjacency(f64),
    /// `D^{-1/2} A D^{-1/2}`.
    NormalizedAdjacency,
    /// `I - D^{-1/2} A D^{-1/2}`.
    NormalizedLaplacian,
}

impl MatrixKind {
    /// Whether `U(t)` of a Cartesian product factors as a Kronecker product
    /// for this kind (adjacency, Laplacian and `αD + A` are all additive over `□`).
    pub fn is_product_additive(self) -> bool {
        !matches!(self, MatrixKind::NormalizedAdjacency | MatrixKind::NormalizedLaplacian)
    }

    pub fn is_normalized(self) -> bool {
        !self.is_product_additive()
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixKind::Adjacency => f.write_str("adjacency"),
            MatrixKind::Laplacian => f.write_str("laplacian"),
            MatrixKind::GeneralizedAdjacency(a) => write!(f, "gen:{a}"),
            MatrixKind::NormalizedAdjacency => f.write_str("norm-adj"),
            MatrixKind::NormalizedLaplacian => f.write_str("norm-lap"),
        }
    }
}

impl Serialize for MatrixKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adjacency" | "A" => Ok(MatrixKind::Adjacency),
            "laplacian" | "L" => Ok(MatrixKind::Laplacian),
            "norm-adj" => Ok(MatrixKind::NormalizedAdjacency),
            "norm-lap" => Ok(MatrixKind::NormalizedLaplacian),
            _ => {
                let alpha = s
                    .strip_prefix("gen:")
                    .and_then(|a| a.parse::<f64>().ok())
                    .filter(|a| a.is_finite())
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown matrix kind `{s}`")))?;
                Ok(MatrixKind::GeneralizedAdjacency(alpha))
            }
        }
    }
}

/// A real symmetric matrix attached to a graph.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub kind: MatrixKind,
    pub matrix: DMatrix<f64>,
    pub graph_hash: u64,
    /// Vertices of degree zero (their `D^{-1/2}` entry is zero under normalized kinds).
    pub zero_degree: Vec<usize>,
}

impl Hamiltonian {
    pub fn order(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Adjacency matrix; loops sit on the diagonal with their weight.
pub fn adjacency(g: &WeightedGraph) -> DMatrix<f64> {
    let n = g.order();
    let mut a = DMatrix::zeros(n, n);
    for e in g.edges() {
        a[(e.u, e.v)] = e.weight;
        a[(e.v, e.u)] = e.weight;
    }
    a
}

pub fn assemble(g: &WeightedGraph, kind: MatrixKind) -> Result<Hamiltonian> {
    let n = g.order();
    let a = adjacency(g);
    let deg = g.degrees();
    let zero_degree: Vec<usize> = (0..n).filter(|&u| deg[u] == 0.0).collect();

    let matrix = match kind {
        MatrixKind::Adjacency => a,
        MatrixKind::Laplacian => DMatrix::from_diagonal(&deg.clone().into()) - a,
        MatrixKind::GeneralizedAdjacency(alpha) => {
            if !alpha.is_finite() {
                return Err(Error::InvalidArgument(format!("alpha must be finite, got {alpha}")));
            }
            DMatrix::from_diagonal(&deg.iter().map(|d| alpha * d).collect::<Vec<_>>().into()) + a
        }
        MatrixKind::NormalizedAdjacency | MatrixKind::NormalizedLaplacian => {
            if let Some(u) = (0..n).find(|&u| deg[u] < 0.0) {
                return Err(Error::NegativeDegree {
                    vertex: u,
                    degree: deg[u],
                });
            }
            let s: Vec<f64> = deg
                .iter()
                .map(|&d| if d == 0.0 { 0.0 } else { 1.0 / d.sqrt() })
                .collect();
            let norm = DMatrix::from_fn(n, n, |i, j| s[i] * a[(i, j)] * s[j]);
            if kind == MatrixKind::NormalizedAdjacency {
                norm
            } else {
                DMatrix::identity(n, n) - norm
            }
        }
    };
    Ok(Hamiltonian {
        kind,
        matrix,
        graph_hash: g.digest(),
        zero_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FamilySpec;

    #[test]
    fn k3_laplacian() {
        let g = FamilySpec::Complete(3).build().unwrap();
        let l = assemble(&g, MatrixKind::Laplacian).unwrap().matrix;
        let want = DMatrix::from_row_slice(3, 3, &[2., -1., -1., -1., 2., -1., -1., -1., 2.]);
        assert_eq!(l, want);
    }

    #[test]
    fn c4_normalized_is_half_adjacency() {
        let g = FamilySpec::Cycle(4).build().unwrap();
        let na = assemble(&g, MatrixKind::NormalizedAdjacency).unwrap().matrix;
        assert!((na - adjacency(&g) / 2.0).amax() < 1e-15);
    }

    #[test]
    fn generalized_zero_is_adjacency() {
        let g = WeightedGraph::from_edges(3, [(0, 1, 2.0), (1, 2, -1.0), (2, 2, 0.5)]).unwrap();
        let m = assemble(&g, MatrixKind::GeneralizedAdjacency(0.0)).unwrap().matrix;
        assert_eq!(m, adjacency(&g));
    }

    #[test]
    fn looped_laplacian_counts_loop_twice() {
        let g = WeightedGraph::from_edges(2, [(0, 1, 1.0), (0, 0, 3.0)]).unwrap();
        let l = assemble(&g, MatrixKind::Laplacian).unwrap().matrix;
        // D_00 = 2*3 + 1 = 7, A_00 = 3
        assert_eq!(l[(0, 0)], 4.0);
        assert_eq!(l[(0, 1)], -1.0);
    }

    #[test]
    fn normalized_rejects_negative_degree_and_zeroes_isolated() {
        let g = WeightedGraph::from_edges(3, [(0, 1, -1.0)]).unwrap();
        assert!(matches!(
            assemble(&g, MatrixKind::NormalizedAdjacency),
            Err(Error::NegativeDegree { .. })
        ));
        let g = WeightedGraph::from_edges(3, [(0, 1, 1.0)]).unwrap();
        let h = assemble(&g, MatrixKind::NormalizedLaplacian).unwrap();
        assert_eq!(h.zero_degree, vec![2]);
        assert_eq!(h.matrix[(2, 2)], 1.0);
    }

    #[test]
    fn kind_parsing() {
        for s in ["adjacency", "laplacian", "gen:0.5", "norm-adj", "norm-lap"] {
            assert_eq!(s.parse::<MatrixKind>().unwrap().to_string(), s);
        }
        assert!("gen:x".parse::<MatrixKind>().is_err());
        assert!("gen:inf".parse::<MatrixKind>().is_err());
    }
}
