//! Distinct-eigenvalue spectral decomposition `M = Σ_j λ_j E_j` and the
//! queries built on it: eigenvalue supports, (strong) cospectrality, twins and
//! periodicity.

use std::ops::Range;

use nalgebra::{DMatrix, DVector};
use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::matrices::{Hamiltonian, MatrixKind};

/// Relative eigenvalue clustering tolerance (scaled by `max(1, ‖H‖)`).
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;
/// Threshold on `‖E_j e_u‖` for `λ_j ∈ σ_u`.
pub const SUPPORT_TOL: f64 = 1e-10;
/// Entrywise tolerance for cospectrality and sign tests.
pub const COSPECTRAL_TOL: f64 = 1e-9;
/// Largest denominator tried when rescaling eigenvalue ratios.
pub const MAX_DENOMINATOR: i64 = 1000;

/// Eigenvalues and orthonormal eigenvectors (as columns) of a real symmetric matrix.
fn symmetric_eigen(m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    let a = faer::Mat::<f64>::from_fn(n, n, |i, j| m[(i, j)]);
    let eig = a
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{e:?} on a {n}x{n} matrix")))?;
    let (s, u) = (eig.S(), eig.U());
    let values: Vec<f64> = (0..n).map(|i| s[i]).collect();
    if values.iter().any(|x| !x.is_finite()) {
        return Err(Error::Eigensolver("non-finite eigenvalue".into()));
    }
    Ok((values, DMatrix::from_fn(n, n, |i, j| u[(i, j)])))
}

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    blocks: Vec<Range<usize>>,
    /// Orthonormal eigenvectors as columns, grouped by `blocks`.
    vectors: DMatrix<f64>,
    matrix: DMatrix<f64>,
    kind: MatrixKind,
    graph_hash: u64,
    cluster_tol: f64,
}

impl SpectralDecomposition {
    /// Full symmetric eigensolve followed by chain clustering of eigenvalues
    /// closer than `cluster_tol * max(1, ‖H‖)`.
    pub fn new(h: &Hamiltonian, cluster_tol: f64) -> Result<Self> {
        let n = h.order();
        if n == 0 {
            return Err(Error::InvalidArgument("empty graph".into()));
        }
        if !(cluster_tol.is_finite() && cluster_tol >= 0.0) {
            return Err(Error::InvalidArgument(format!("bad cluster tolerance {cluster_tol}")));
        }
        let (values, vecs) = symmetric_eigen(&h.matrix)?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
        let sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        let vectors = DMatrix::from_fn(n, n, |r, c| vecs[(r, order[c])]);

        let norm = sorted.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let tol = cluster_tol * norm.max(1.0);
        let mut blocks = Vec::new();
        let mut start = 0;
        for i in 1..=n {
            if i == n || sorted[i - 1] - sorted[i] > tol {
                blocks.push(start..i);
                start = i;
            }
        }
        let eigenvalues = blocks
            .iter()
            .map(|b| sorted[b.clone()].iter().sum::<f64>() / b.len() as f64)
            .collect();

        Ok(SpectralDecomposition {
            eigenvalues,
            blocks,
            vectors,
            matrix: h.matrix.clone(),
            kind: h.kind,
            graph_hash: h.graph_hash,
            cluster_tol,
        })
    }

    pub fn order(&self) -> usize {
        self.matrix.nrows()
    }

    /// Number of distinct eigenvalues.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Distinct eigenvalues, strictly decreasing.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn graph_hash(&self) -> u64 {
        self.graph_hash
    }

    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    /// Orthonormal eigenvectors, columns grouped by distinct eigenvalue.
    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn block(&self, j: usize) -> Range<usize> {
        self.blocks[j].clone()
    }

    /// Index of the distinct eigenvalue nearest to `x`, if within the clustering tolerance.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let tol = (self.cluster_tol * self.spectral_radius().max(1.0)).max(1e-12);
        let (j, d) = self
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(j, &l)| (j, (l - x).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        (d <= tol.max(1e-9)).then_some(j)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// `E_j = V_j V_jᵀ`.
    pub fn projector(&self, j: usize) -> DMatrix<f64> {
        let v = self.vectors.columns_range(self.block(j));
        v * v.transpose()
    }

    /// `(E_j)_{u,v}`.
    pub fn projector_entry(&self, j: usize, u: usize, v: usize) -> f64 {
        self.block(j)
            .map(|c| self.vectors[(u, c)] * self.vectors[(v, c)])
            .sum()
    }

    /// `E_j e_u`.
    pub fn projector_column(&self, j: usize, u: usize) -> DVector<f64> {
        let v = self.vectors.columns_range(self.block(j));
        v * v.row(u).transpose()
    }

    /// `‖E_j e_u ± E_j e_v‖`, computed from eigenvector rows without cancellation.
    fn pair_norm(&self, j: usize, u: usize, v: usize, sign: f64) -> f64 {
        self.block(j)
            .map(|c| {
                let d = self.vectors[(u, c)] + sign * self.vectors[(v, c)];
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }

    /// `‖E_j e_u‖`.
    pub fn column_norm(&self, j: usize, u: usize) -> f64 {
        self.block(j)
            .map(|c| self.vectors[(u, c)].powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn check_vertex(&self, u: usize) -> Result<()> {
        if u < self.order() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: u,
                order: self.order(),
            })
        }
    }

    /// `σ_u(M)` with weights `(E_j)_{u,u}`.
    pub fn support(&self, u: usize) -> Result<EigenvalueSupport> {
        self.check_vertex(u)?;
        let mut indices = Vec::new();
        let mut eigenvalues = Vec::new();
        let mut weights = Vec::new();
        for j in 0..self.len() {
            let norm = self.column_norm(j, u);
            if norm > SUPPORT_TOL {
                indices.push(j);
                eigenvalues.push(self.eigenvalues[j]);
                weights.push(norm * norm);
            }
        }
        Ok(EigenvalueSupport {
            vertex: u,
            indices,
            eigenvalues,
            weights,
        })
    }

    /// `(E_j)_{u,u} = (E_j)_{v,v}` for every `j`, within [`COSPECTRAL_TOL`].
    pub fn are_cospectral(&self, u: usize, v: usize) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok((0..self.len()).all(|j| {
            (self.projector_entry(j, u, u) - self.projector_entry(j, v, v)).abs() <= COSPECTRAL_TOL
        }))
    }

    /// Classifies each `λ_j ∈ σ_u ∪ σ_v` by `E_j e_u = ±E_j e_v`.
    pub fn strong_cospectral(&self, u: usize, v: usize) -> Result<StrongCospectrality> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::InvalidArgument("strong cospectrality needs u != v".into()));
        }
        let (mut plus, mut minus) = (Vec::new(), Vec::new());
        for j in 0..self.len() {
            if self.column_norm(j, u) <= SUPPORT_TOL && self.column_norm(j, v) <= SUPPORT_TOL {
                continue;
            }
            let diff = self.pair_norm(j, u, v, -1.0);
            let sum = self.pair_norm(j, u, v, 1.0);
            if diff <= COSPECTRAL_TOL {
                plus.push(j);
            } else if sum <= COSPECTRAL_TOL {
                minus.push(j);
            } else {
                return Ok(StrongCospectrality::Not(CospectralityWitness {
                    index: j,
                    eigenvalue: self.eigenvalues[j],
                    plus_residual: diff,
                    minus_residual: sum,
                }));
            }
        }
        Ok(StrongCospectrality::Strong(StrongCospectralPartition {
            pair: (u, v),
            plus,
            minus,
        }))
    }

    /// Checks `M(e_u - e_v) = θ(e_u - e_v)` within 1e-9 for every pair in `t`.
    pub fn verify_twin_eigenvector(&self, t: &TwinSet) -> bool {
        let m = &self.matrix;
        t.vertices.iter().enumerate().all(|(i, &u)| {
            t.vertices[i + 1..].iter().all(|&v| {
                let r = (0..m.nrows())
                    .map(|w| {
                        let x = m[(w, u)] - m[(w, v)];
                        let y = t.theta * (f64::from(w == u) - f64::from(w == v));
                        (x - y).powi(2)
                    })
                    .sum::<f64>()
                    .sqrt();
                r <= 1e-9
            })
        })
    }

    /// Period of `|U(t)_{u,u}|` when the support differences are commensurable.
    ///
    /// Integer differences give `ρ = 2π / gcd`. Otherwise every difference is
    /// expressed as a rational multiple `p_j/q_j` (`q_j <= MAX_DENOMINATOR`) of
    /// the smallest one and `ρ = 2πQ / (δ_min g)`. Candidates are confirmed by
    /// `|U(ρ)_{u,u}| = 1` within 1e-8; anything else is reported undetected.
    pub fn periodicity(&self, u: usize) -> Result<PeriodicityInfo> {
        let s = self.support(u)?;
        let undetected = PeriodicityInfo {
            vertex: u,
            periodic: false,
            period: None,
            method: PeriodMethod::Undetected,
        };
        if s.eigenvalues.len() == 1 {
            // |U(t)_{u,u}| ≡ 1; any period works.
            return Ok(PeriodicityInfo {
                vertex: u,
                periodic: true,
                period: Some(2.0 * std::f64::consts::PI),
                method: PeriodMethod::IntegerSpectrum,
            });
        }
        let top = s.eigenvalues[0];
        let diffs: Vec<f64> = s.eigenvalues[1..].iter().map(|l| top - l).collect();

        let (period, method) = match integer_gcd(&diffs, 1e-9) {
            Some(g) => (2.0 * std::f64::consts::PI / g as f64, PeriodMethod::IntegerSpectrum),
            None => match rescaled_period(&diffs) {
                Some(p) => (p, PeriodMethod::RationalRescaled),
                None => return Ok(undetected),
            },
        };
        if (s.magnitude_at(period) - 1.0).abs() > 1e-8 {
            return Ok(undetected);
        }
        Ok(PeriodicityInfo {
            vertex: u,
            periodic: true,
            period: Some(period),
            method,
        })
    }

    /// Serializable overview of the decomposition.
    pub fn summary(&self) -> SpectrumSummary {
        SpectrumSummary {
            matrix: self.kind,
            eigenvalues: self.eigenvalues.clone(),
            multiplicities: self.multiplicities(),
        }
    }
}

/// Gcd of the rounded values when every value is within `tol` of a nonzero integer.
fn integer_gcd(xs: &[f64], tol: f64) -> Option<i64> {
    let mut g = 0_i64;
    for &x in xs {
        let r = x.round();
        if (x - r).abs() > tol || r == 0.0 || r.abs() > 1e15 {
            return None;
        }
        g = g.gcd(&(r as i64));
    }
    (g > 0).then_some(g)
}

/// Best rational approximation by continued fractions with denominator `<= max_q`.
pub fn rational_approx(x: f64, max_q: i64, tol: f64) -> Option<(i64, i64)> {
    let (mut p0, mut q0, mut p1, mut q1) = (0_i64, 1_i64, 1_i64, 0_i64);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        if a.abs() > 1e12 {
            return None;
        }
        let a = a as i64;
        let (p2, q2) = (a.checked_mul(p1)?.checked_add(p0)?, a.checked_mul(q1)?.checked_add(q0)?);
        if q2 > max_q {
            return None;
        }
        if (x - p2 as f64 / q2 as f64).abs() <= tol {
            return Some((p2, q2));
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = y - a as f64;
        if frac.abs() < 1e-300 {
            return None;
        }
        y = 1.0 / frac;
    }
    None
}

fn rescaled_period(diffs: &[f64]) -> Option<f64> {
    commensurate_coordinates(diffs).map(|(delta, _)| 2.0 * std::f64::consts::PI / delta)
}

/// Writes `diffs ≈ δ·c` with `δ > 0` and a primitive integer vector `c`.
///
/// Each nonzero entry is compared with the smallest nonzero magnitude by a
/// continued fraction with denominator at most [`MAX_DENOMINATOR`]; zeros map
/// to `0`. Returns `None` when some ratio is not recognised as rational or
/// every entry is zero.
pub fn commensurate_coordinates(diffs: &[f64]) -> Option<(f64, Vec<i64>)> {
    let zero = |d: f64| d.abs() <= 1e-12 * diffs.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    let base = diffs
        .iter()
        .filter(|d| !zero(**d))
        .fold(f64::INFINITY, |m, d| m.min(d.abs()));
    if !(base > 0.0 && base.is_finite()) {
        return None;
    }
    let fracs: Vec<(i64, i64)> = diffs
        .iter()
        .map(|&d| {
            if zero(d) {
                return Some((0, 1));
            }
            let r = d / base;
            rational_approx(r, MAX_DENOMINATOR, 1e-9 * r.abs().max(1.0))
        })
        .collect::<Option<_>>()?;
    let q = fracs.iter().fold(1_i64, |l, &(_, q)| l.lcm(&q));
    if q > MAX_DENOMINATOR {
        return None;
    }
    let coords: Vec<i64> = fracs.iter().map(|&(p, qj)| p * (q / qj)).collect();
    let g = coords.iter().fold(0_i64, |g, &c| g.gcd(&c));
    if g == 0 {
        return None;
    }
    Some((base * g as f64 / q as f64, coords.into_iter().map(|c| c / g).collect()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenvalueSupport {
    pub vertex: usize,
    /// Indices into [`SpectralDecomposition::eigenvalues`].
    pub indices: Vec<usize>,
    pub eigenvalues: Vec<f64>,
    /// `(E_j)_{u,u}` for each member.
    pub weights: Vec<f64>,
}

impl EigenvalueSupport {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Position of eigenvalue index `j` in this support.
    pub fn position(&self, j: usize) -> Option<usize> {
        self.indices.iter().position(|&i| i == j)
    }

    pub fn weight_of(&self, j: usize) -> f64 {
        self.position(j).map_or(0.0, |p| self.weights[p])
    }

    /// `|Σ_j w_j e^{itλ_j}|`.
    pub fn magnitude_at(&self, t: f64) -> f64 {
        let (re, im) = self
            .eigenvalues
            .iter()
            .zip(&self.weights)
            .fold((0.0, 0.0), |(re, im), (&l, &w)| {
                let (s, c) = (t * l).sin_cos();
                (re + w * c, im + w * s)
            });
        re.hypot(im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrongCospectralPartition {
    pub pair: (usize, usize),
    /// Indices with `E_j e_u = E_j e_v`.
    pub plus: Vec<usize>,
    /// Indices with `E_j e_u = -E_j e_v`.
    pub minus: Vec<usize>,
}

/// The first eigenvalue violating both sign conditions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CospectralityWitness {
    pub index: usize,
    pub eigenvalue: f64,
    pub plus_residual: f64,
    pub minus_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum StrongCospectrality {
    Strong(StrongCospectralPartition),
    Not(CospectralityWitness),
}

impl StrongCospectrality {
    pub fn partition(&self) -> Option<&StrongCospectralPartition> {
        match self {
            StrongCospectrality::Strong(p) => Some(p),
            StrongCospectrality::Not(_) => None,
        }
    }
}

/// A maximal set of pairwise twins with loop weight `omega` and mutual edge
/// weight `eta`; `e_u - e_v` is a `theta`-eigenvector for `u, v` in the set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwinSet {
    pub vertices: Vec<usize>,
    pub omega: f64,
    pub eta: f64,
    pub theta: f64,
}

impl TwinSet {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, u: usize) -> bool {
        self.vertices.contains(&u)
    }
}

fn are_twins(g: &WeightedGraph, u: usize, v: usize) -> bool {
    if g.loop_weight(u) != g.loop_weight(v) {
        return false;
    }
    let outside = |x: usize| {
        g.neighbors(x)
            .filter(move |&(w, _)| w != u && w != v)
    };
    outside(u).eq(outside(v))
}

/// Twin eigenvalue for a set with loop weight `omega`, mutual weight `eta`,
/// common degree `deg`.
pub fn twin_theta(kind: MatrixKind, deg: f64, omega: f64, eta: f64) -> f64 {
    let normalized = if deg == 0.0 { 0.0 } else { (omega - eta) / deg };
    match kind {
        MatrixKind::Adjacency => omega - eta,
        MatrixKind::GeneralizedAdjacency(alpha) => alpha * deg + omega - eta,
        MatrixKind::Laplacian => deg - omega + eta,
        MatrixKind::NormalizedAdjacency => normalized,
        MatrixKind::NormalizedLaplacian => 1.0 - normalized,
    }
}

/// Partitions vertices into maximal twin classes (singletons omitted), each
/// annotated with `θ` for `kind`. Classes are ordered by smallest member.
pub fn find_twin_sets(g: &WeightedGraph, kind: MatrixKind) -> Vec<TwinSet> {
    // Being twins is an equivalence relation, so comparing against one
    // representative per class is enough.
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for u in 0..g.order() {
        match classes.iter_mut().find(|c| are_twins(g, c[0], u)) {
            Some(c) => c.push(u),
            None => classes.push(vec![u]),
        }
    }
    classes
        .into_iter()
        .filter(|c| c.len() >= 2)
        .map(|vertices| {
            let u = vertices[0];
            let omega = g.loop_weight(u);
            let eta = g.weight(u, vertices[1]).unwrap_or(0.0);
            let theta = twin_theta(kind, g.degree(u), omega, eta);
            TwinSet {
                vertices,
                omega,
                eta,
                theta,
            }
        })
        .collect()
}

/// Twin class containing `u`, if any.
pub fn twin_class_of(g: &WeightedGraph, kind: MatrixKind, u: usize) -> Option<TwinSet> {
    find_twin_sets(g, kind).into_iter().find(|t| t.contains(u))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PeriodMethod {
    IntegerSpectrum,
    RationalRescaled,
    Undetected,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicityInfo {
    pub vertex: usize,
    pub periodic: bool,
    pub period: Option<f64>,
    pub method: PeriodMethod,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSummary {
    pub matrix: MatrixKind,
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<usize>,
}

/// Assembles and decomposes in one step with the default clustering tolerance.
pub fn decompose(g: &WeightedGraph, kind: MatrixKind) -> Result<SpectralDecomposition> {
    SpectralDecomposition::new(&crate::matrices::assemble(g, kind)?, DEFAULT_CLUSTER_TOL)
}
