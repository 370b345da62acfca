//! Test-only oracles: a Taylor/scaling-and-squaring matrix exponential that
//! never touches the eigensolver, and seeded random graph generators.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use qwsed_core::{GraphBuilder, WeightedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `exp(i t H)` for a real symmetric `H`.
pub fn expm_i(h: &DMatrix<f64>, t: f64) -> DMatrix<Complex64> {
    let n = h.nrows();
    let a = h.map(|x| Complex64::new(0.0, x * t));
    let norm = a.iter().map(|z| z.norm()).fold(0.0, f64::max) * n as f64;
    let mut s = 0;
    while norm / f64::powi(2.0, s) > 0.25 {
        s += 1;
    }
    let a = a / Complex64::new(f64::powi(2.0, s), 0.0);
    let id = DMatrix::<Complex64>::identity(n, n);
    let mut term = id.clone();
    let mut sum = id;
    for k in 1..=24 {
        term = &term * &a / Complex64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdos-Renyi style graph; weights in `[0.5, 2.5)` when `weighted`, with an
/// occasional loop.
pub fn random_graph(r: &mut ChaCha8Rng, n: usize, p: f64, weighted: bool) -> WeightedGraph {
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p) {
                let w = if weighted { r.gen_range(0.5..2.5) } else { 1.0 };
                b.add_edge(u, v, w).unwrap();
            }
        }
        if weighted && r.gen_bool(0.1) {
            b.add_edge(u, u, r.gen_range(0.5..2.5)).unwrap();
        }
    }
    b.build()
}

/// A random positively weighted graph plus `copies` twins of vertex 0, all
/// sharing its neighbourhood, a common loop weight and mutual weight `eta`.
/// Returns the graph and the twin class (vertex 0 first).
pub fn twin_graph(r: &mut ChaCha8Rng, base: usize, copies: usize, weighted: bool) -> (WeightedGraph, Vec<usize>) {
    let x = random_graph(r, base, 0.5, weighted);
    let n = base + copies;
    let mut b = GraphBuilder::new(n);
    for e in x.edges() {
        if e.u != 0 && e.v != 0 {
            b.add_edge(e.u, e.v, e.weight).unwrap();
        }
    }
    let twins: Vec<usize> = std::iter::once(0).chain(base..n).collect();
    let nbrs: Vec<(usize, f64)> = (1..base)
        .filter_map(|v| {
            if r.gen_bool(0.6) {
                Some((v, if weighted { r.gen_range(0.5..2.5) } else { 1.0 }))
            } else {
                None
            }
        })
        .collect();
    let nbrs = if nbrs.is_empty() { vec![(1, 1.0)] } else { nbrs };
    let eta = if r.gen_bool(0.5) { 0.0 } else if weighted { r.gen_range(0.5..2.5) } else { 1.0 };
    let omega = if weighted && r.gen_bool(0.3) { r.gen_range(0.5..2.5) } else { 0.0 };
    for (i, &t) in twins.iter().enumerate() {
        for &(v, w) in &nbrs {
            b.add_edge(t, v, w).unwrap();
        }
        if omega != 0.0 {
            b.add_edge(t, t, omega).unwrap();
        }
        if eta != 0.0 {
            for &s in &twins[i + 1..] {
                b.add_edge(t, s, eta).unwrap();
            }
        }
    }
    (b.build(), twins)
}

pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// The graph matrix built straight from the edge list.
pub fn oracle_matrix(g: &WeightedGraph, kind: qwsed_core::MatrixKind) -> DMatrix<f64> {
    use qwsed_core::MatrixKind::*;
    let n = g.order();
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut deg = vec![0.0; n];
    for e in g.edges() {
        a[(e.u, e.v)] = e.weight;
        a[(e.v, e.u)] = e.weight;
        deg[e.u] += e.weight;
        deg[e.v] += e.weight;
    }
    let d = DMatrix::from_diagonal(&deg.clone().into());
    match kind {
        Adjacency => a,
        Laplacian => d - a,
        GeneralizedAdjacency(alpha) => d * alpha + a,
        NormalizedAdjacency | NormalizedLaplacian => {
            let s: Vec<f64> = deg.iter().map(|&x| if x > 0.0 { x.powf(-0.5) } else { 0.0 }).collect();
            let m = DMatrix::from_fn(n, n, |i, j| s[i] * a[(i, j)] * s[j]);
            if kind == NormalizedAdjacency {
                m
            } else {
                DMatrix::identity(n, n) - m
            }
        }
    }
}

/// `|exp(itH)_{u,u}|` from the oracle.
pub fn oracle_diag(g: &WeightedGraph, kind: qwsed_core::MatrixKind, u: usize, t: f64) -> f64 {
    expm_i(&oracle_matrix(g, kind), t)[(u, u)].norm()
}
