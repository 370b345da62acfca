//! Transition matrices `U(t) = Σ_j e^{itλ_j} E_j`, closed forms for named
//! families and a grid-plus-refinement minimiser for `|U(t)_{u,u}|`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{FamilySpec, VertexRole};
use crate::matrices::MatrixKind;
use crate::spectral::{commensurate_coordinates, PeriodicityInfo, SpectralDecomposition};

/// A finite exponential sum `F(t) = Σ_k w_k e^{itν_k}` with real weights.
///
/// Diagonal walk entries, sub-sums over eigenvalue subsets, closed forms and
/// Kronecker products of diagonal entries are all of this shape.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalSeries {
    pub terms: Vec<(f64, f64)>,
}

impl DiagonalSeries {
    pub fn new(terms: impl IntoIterator<Item = (f64, f64)>) -> Self {
        DiagonalSeries {
            terms: terms.into_iter().collect(),
        }
    }

    /// `w e^{itν}` plus `w e^{-itν}`, i.e. `2w cos(νt)`.
    pub fn cosine(freq: f64, weight: f64) -> Self {
        DiagonalSeries::new([(freq, weight), (-freq, weight)])
    }

    pub fn plus(mut self, other: DiagonalSeries) -> Self {
        self.terms.extend(other.terms);
        self
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        let (re, im) = self.terms.iter().fold((0.0, 0.0), |(re, im), &(nu, w)| {
            let (s, c) = (t * nu).sin_cos();
            (re + w * c, im + w * s)
        });
        Complex64::new(re, im)
    }

    pub fn magnitude(&self, t: f64) -> f64 {
        self.eval(t).norm()
    }

    pub fn magnitude_sq(&self, t: f64) -> f64 {
        self.eval(t).norm_sqr()
    }

    /// Sum of weights, `F(0)`.
    pub fn total_weight(&self) -> f64 {
        self.terms.iter().map(|t| t.1).sum()
    }

    /// `max ν - min ν`.
    pub fn spread(&self) -> f64 {
        let (lo, hi) = self
            .terms
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(nu, _)| (lo.min(nu), hi.max(nu)));
        if lo.is_finite() {
            hi - lo
        } else {
            0.0
        }
    }

    /// Bound on `|d/dt |F(t)||`: `Σ |w_k| |ν_k - c|` for the weighted centre `c`.
    pub fn lipschitz(&self) -> f64 {
        let total: f64 = self.terms.iter().map(|t| t.1.abs()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let c = self.terms.iter().map(|&(nu, w)| nu * w.abs()).sum::<f64>() / total;
        self.terms.iter().map(|&(nu, w)| w.abs() * (nu - c).abs()).sum()
    }

    /// Series of the pointwise product `F(t) G(t)`, merging equal frequencies.
    pub fn tensor(&self, other: &DiagonalSeries) -> DiagonalSeries {
        let mut terms: Vec<(f64, f64)> = self
            .terms
            .iter()
            .flat_map(|&(a, w)| other.terms.iter().map(move |&(b, x)| (a + b, w * x)))
            .collect();
        terms.sort_by(|a, b| b.0.total_cmp(&a.0));
        let scale = terms.iter().fold(1.0_f64, |m, t| m.max(t.0.abs()));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(terms.len());
        for (nu, w) in terms {
            match merged.last_mut() {
                Some(last) if (last.0 - nu).abs() <= 1e-12 * scale => last.1 += w,
                _ => merged.push((nu, w)),
            }
        }
        DiagonalSeries { terms: merged }
    }

    /// Least `ρ` with `|F(t + ρ)| = |F(t)|`, when the frequencies are
    /// commensurate; confirmed by `|F(ρ)| = |F(0)|` within 1e-8.
    pub fn period(&self) -> Option<f64> {
        let top = self.terms.iter().fold(f64::NEG_INFINITY, |m, t| m.max(t.0));
        let diffs: Vec<f64> = self.terms.iter().map(|t| top - t.0).collect();
        if diffs.iter().all(|d| d.abs() <= 1e-12 * top.abs().max(1.0)) {
            return (!self.terms.is_empty()).then_some(2.0 * PI);
        }
        let (delta, _) = commensurate_coordinates(&diffs)?;
        let rho = 2.0 * PI / delta;
        ((self.magnitude(rho) - self.magnitude(0.0)).abs() <= 1e-8).then_some(rho)
    }

    /// Whether every weight pairs with an equal weight at the negated frequency,
    /// after shifting all frequencies by `shift`; then `e^{-it·shift} F(t)` is real.
    pub fn is_real_after_shift(&self, shift: f64, tol: f64) -> bool {
        self.terms.iter().all(|&(nu, w)| {
            let mirror = 2.0 * shift - nu;
            let matched: f64 = self
                .terms
                .iter()
                .filter(|&&(mu, _)| (mu - mirror).abs() <= tol)
                .map(|t| t.1)
                .sum();
            let here: f64 = self
                .terms
                .iter()
                .filter(|&&(mu, _)| (mu - nu).abs() <= tol)
                .map(|t| t.1)
                .sum();
            (matched - here).abs() <= tol && w.is_finite()
        })
    }
}

/// Read-only walk queries over a finished decomposition.
#[derive(Debug, Clone, Copy)]
pub struct WalkEvaluator<'a> {
    dec: &'a SpectralDecomposition,
}

impl<'a> WalkEvaluator<'a> {
    pub fn new(dec: &'a SpectralDecomposition) -> Self {
        WalkEvaluator { dec }
    }

    pub fn decomposition(&self) -> &'a SpectralDecomposition {
        self.dec
    }

    pub fn order(&self) -> usize {
        self.dec.order()
    }

    /// `U(t)_{u,v}`.
    pub fn transition_entry(&self, t: f64, u: usize, v: usize) -> Complex64 {
        self.dec
            .eigenvalues()
            .iter()
            .enumerate()
            .map(|(j, &l)| Complex64::cis(t * l) * self.dec.projector_entry(j, u, v))
            .sum()
    }

    /// `U(t) e_u`.
    pub fn column(&self, t: f64, u: usize) -> Vec<Complex64> {
        let v = self.dec.vectors();
        let n = self.order();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (j, &l) in self.dec.eigenvalues().iter().enumerate() {
            let phase = Complex64::cis(t * l);
            for c in self.dec.block(j) {
                let coeff = phase * v[(u, c)];
                for (w, o) in out.iter_mut().enumerate() {
                    *o += coeff * v[(w, c)];
                }
            }
        }
        out
    }

    /// The full `U(t)`.
    pub fn transition_matrix(&self, t: f64) -> DMatrix<Complex64> {
        let n = self.order();
        let v = self.dec.vectors();
        let mut phased = DMatrix::<Complex64>::zeros(n, n);
        for (j, &l) in self.dec.eigenvalues().iter().enumerate() {
            let phase = Complex64::cis(t * l);
            for c in self.dec.block(j) {
                for r in 0..n {
                    phased[(r, c)] = phase * v[(r, c)];
                }
            }
        }
        let vc = v.map(|x| Complex64::new(x, 0.0));
        phased * vc.transpose()
    }

    /// `U(t)_{u,u}` as an exponential sum over `σ_u`.
    pub fn diagonal_series(&self, u: usize) -> Result<DiagonalSeries> {
        let s = self.dec.support(u)?;
        Ok(DiagonalSeries::new(s.eigenvalues.into_iter().zip(s.weights)))
    }

    /// `(t, |U(t)_{u,u}|)` over a sorted grid.
    pub fn diagonal_magnitude_series(&self, u: usize, grid: &[f64]) -> Result<Vec<(f64, f64)>> {
        if grid.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidArgument("time grid must be sorted".into()));
        }
        let f = self.diagonal_series(u)?;
        Ok(grid.par_iter().map(|&t| (t, f.magnitude(t))).collect())
    }

    /// `|U(t)_{u,w}| = 1/√n` for every `w`, within `tol`.
    pub fn check_uniform_mixing(&self, u: usize, t: f64, tol: f64) -> MixingCheck {
        let target = 1.0 / (self.order() as f64).sqrt();
        let dev = self
            .column(t, u)
            .iter()
            .fold(0.0_f64, |m, z| m.max((z.norm() - target).abs()));
        MixingCheck {
            t,
            max_deviation: dev,
            mixing: dev <= tol,
        }
    }

    /// Uniform mixing of every row at once.
    pub fn check_uniform_mixing_all(&self, t: f64, tol: f64) -> MixingCheck {
        let target = 1.0 / (self.order() as f64).sqrt();
        let dev = self
            .transition_matrix(t)
            .iter()
            .fold(0.0_f64, |m, z| m.max((z.norm() - target).abs()));
        MixingCheck {
            t,
            max_deviation: dev,
            mixing: dev <= tol,
        }
    }

    /// `α = |U(t)_{u,u}|`, `β = |U(t)_{u,v}|`; proper when `α² + β² = 1`
    /// within `tol` and `β > tol`.
    pub fn check_fractional_revival(&self, u: usize, v: usize, t: f64, tol: f64) -> FractionalRevival {
        let alpha = self.transition_entry(t, u, u).norm();
        let beta = self.transition_entry(t, u, v).norm();
        FractionalRevival {
            t,
            alpha,
            beta,
            proper: (alpha * alpha + beta * beta - 1.0).abs() <= tol && beta > tol,
        }
    }

    /// Perfect state transfer out of `u`, decided at half its minimum period.
    ///
    /// If `|U(τ)_{u,v}| = 1` then `u` is periodic at `2τ`, and `2τ` must be an
    /// odd multiple of the minimum period `ρ`; the column of `U(ρ/2)` therefore
    /// already shows the transfer. Returns `(v, ρ/2, |U(ρ/2)_{u,v}|)`.
    pub fn detect_pst(&self, u: usize, period: &PeriodicityInfo, tol: f64) -> Option<(usize, f64, f64)> {
        let rho = period.period.filter(|_| period.periodic)?;
        let tau = rho / 2.0;
        let col = self.column(tau, u);
        col.iter()
            .enumerate()
            .filter(|&(v, _)| v != u)
            .map(|(v, z)| (v, z.norm()))
            .filter(|&(_, m)| m > 1.0 - tol)
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(v, m)| (v, tau, m))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixingCheck {
    pub t: f64,
    pub max_deviation: f64,
    pub mixing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FractionalRevival {
    pub t: f64,
    pub alpha: f64,
    pub beta: f64,
    pub proper: bool,
}

/// Closed-form `U(t)_{u,u}` for a catalogue entry, as an exponential sum.
///
/// Supported: complete graphs (adjacency); `K_m ∨ X` at a clique vertex and
/// `O_m ∨ X` at an `O_m` vertex (Laplacian, any positively weighted `X`);
/// cones and `O_2 ∨ X` over a regular `X` at an apex (adjacency); stars
/// (adjacency, leaf and centre; Laplacian via the join forms); double stars
/// `S_{k,k}` (adjacency, leaf and internal vertex).
pub fn closed_form(spec: &FamilySpec, kind: MatrixKind, role: VertexRole) -> Result<DiagonalSeries> {
    use FamilySpec as F;
    use MatrixKind::{Adjacency, Laplacian};
    use VertexRole as R;
    let unsupported = || {
        Err(Error::Unsupported(format!(
            "no closed form for {spec} / {kind} / {role}"
        )))
    };
    let base_stats = |b: &FamilySpec| -> Result<(f64, Option<f64>)> {
        let g = b.build()?;
        Ok((g.order() as f64, g.regular_degree()))
    };
    // 1/(N) + (N-1)/N e^{itN}
    let clique_join = |nn: f64| DiagonalSeries::new([(0.0, 1.0 / nn), (nn, (nn - 1.0) / nn)]);
    // 1/(m+n) + (m-1)/m e^{itn} + n/(m(m+n)) e^{it(m+n)}
    let empty_join = |m: f64, n: f64| {
        DiagonalSeries::new([
            (0.0, 1.0 / (m + n)),
            (n, (m - 1.0) / m),
            (m + n, n / (m * (m + n))),
        ])
    };
    // Σ_± c e^{itλ±}/(c + λ±²), λ± = (d ± √(d² + 4c))/2
    let regular_apex = |c: f64, d: f64| {
        let r = (d * d + 4.0 * c).sqrt();
        let (lp, lm) = ((d + r) / 2.0, (d - r) / 2.0);
        DiagonalSeries::new([(lp, c / (c + lp * lp)), (lm, c / (c + lm * lm))])
    };

    match (spec, kind, role) {
        (F::Complete(n), Adjacency, _) => {
            // e^{-it}(n - 1 + e^{itn})/n
            let n = *n as f64;
            Ok(DiagonalSeries::new([(-1.0, (n - 1.0) / n), (n - 1.0, 1.0 / n)]))
        }
        (F::Complete(n), Laplacian, _) => Ok(clique_join(*n as f64)),
        (F::Star(n), Adjacency, R::Leaf) => {
            let n = *n as f64;
            Ok(DiagonalSeries::new([(0.0, 1.0 - 1.0 / n)]).plus(DiagonalSeries::cosine(n.sqrt(), 0.5 / n)))
        }
        (F::Star(n), Adjacency, R::Center | R::Apex) => Ok(DiagonalSeries::cosine((*n as f64).sqrt(), 0.5)),
        (F::Star(n), Laplacian, R::Center | R::Apex) => Ok(clique_join(*n as f64 + 1.0)),
        (F::Star(n), Laplacian, R::Leaf) => Ok(empty_join(*n as f64, 1.0)),
        (F::Cone(b), Laplacian, R::Apex) => Ok(clique_join(base_stats(b)?.0 + 1.0)),
        (F::DoubleCone { connected: true, base }, Laplacian, R::Apex) => {
            Ok(clique_join(base_stats(base)?.0 + 2.0))
        }
        (F::DoubleCone { connected: false, base }, Laplacian, R::Apex) => {
            Ok(empty_join(2.0, base_stats(base)?.0))
        }
        (F::CliqueJoin { m, base }, Laplacian, R::Apex | R::CliquePart) => {
            Ok(clique_join(*m as f64 + base_stats(base)?.0))
        }
        (F::EmptyJoin { m, base }, Laplacian, R::Apex | R::EmptyPart) => {
            Ok(empty_join(*m as f64, base_stats(base)?.0))
        }
        (F::Cone(b), Adjacency, R::Apex) => match base_stats(b)? {
            (n, Some(d)) => Ok(regular_apex(n, d)),
            _ => unsupported(),
        },
        (F::DoubleCone { connected: false, base }, Adjacency, R::Apex) => match base_stats(base)? {
            // 1/2 + Σ_± n e^{itλ±}/(2n + λ±²), λ± = (d ± √(d² + 8n))/2
            (n, Some(d)) => {
                let mut pair = regular_apex(2.0 * n, d);
                pair.terms.iter_mut().for_each(|t| t.1 /= 2.0);
                Ok(DiagonalSeries::new([(0.0, 0.5)]).plus(pair))
            }
            _ => unsupported(),
        },
        (F::EmptyJoin { m: 2, base }, Adjacency, R::Apex | R::EmptyPart) => {
            closed_form(&F::DoubleCone { connected: false, base: base.clone() }, kind, R::Apex)
        }
        (F::DoubleStar { k, l }, Adjacency, R::Leaf | R::Internal) if k == l => {
            let k = *k as f64;
            let r = (4.0 * k + 1.0).sqrt();
            let (l1, l2) = ((1.0 + r) / 2.0, (r - 1.0) / 2.0);
            Ok(if role == R::Leaf {
                DiagonalSeries::new([(0.0, (k - 1.0) / k)])
                    .plus(DiagonalSeries::cosine(l1, 1.0 / (4.0 * k + 1.0 + r)))
                    .plus(DiagonalSeries::cosine(l2, 1.0 / (4.0 * k + 1.0 - r)))
            } else {
                DiagonalSeries::cosine(l1, (1.0 + r).powi(2) / (4.0 * (4.0 * k + 1.0 + r)))
                    .plus(DiagonalSeries::cosine(l2, (1.0 - r).powi(2) / (4.0 * (4.0 * k + 1.0 - r))))
            })
        }
        _ => unsupported(),
    }
}

/// Grid minimisation settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeOptions {
    /// Explicit window `[0, T]`; `None` uses the certified period.
    pub window: Option<f64>,
    /// Window used when no period is certified and none was given.
    pub fallback_window: Option<f64>,
    /// Number of grid intervals; `None` picks `max(4096, ⌈64·T·spread/2π⌉)`.
    pub grid: Option<usize>,
    pub max_grid: usize,
    /// Golden-section tolerance on `t`.
    pub refine_tol: f64,
}

/// Uncertified default window `[0, 200π]`.
pub const DEFAULT_FALLBACK_WINDOW: f64 = 200.0 * PI;

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            window: None,
            fallback_window: None,
            grid: None,
            max_grid: 1 << 22,
            refine_tol: 1e-10,
        }
    }
}

impl MinimizeOptions {
    pub fn with_window(mut self, t: f64) -> Self {
        self.window = Some(t);
        self
    }

    pub fn with_fallback(mut self, t: f64) -> Self {
        self.fallback_window = Some(t);
        self
    }

    pub fn with_grid(mut self, n: usize) -> Self {
        self.grid = Some(n);
        self
    }

    pub fn grid_for(&self, window: f64, spread: f64) -> usize {
        self.grid.unwrap_or_else(|| {
            let scaled = (64.0 * window * spread / (2.0 * PI)).ceil();
            let scaled = if scaled.is_finite() { scaled as usize } else { usize::MAX };
            scaled.max(4096).min(self.max_grid)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinimizationResult {
    pub vertex: usize,
    pub window: f64,
    pub grid: usize,
    pub minimum: f64,
    pub argmin: f64,
    pub refinements: usize,
    pub certified_window: bool,
}

/// Outcome of minimising an exponential sum over `[0, window]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesMinimum {
    pub minimum: f64,
    pub argmin: f64,
    pub refinements: usize,
}

const TIE_TOL: f64 = 1e-12;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

fn golden(f: &DiagonalSeries, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = |t: f64| f.magnitude_sq(t);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (g(c), g(d));
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = g(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Minimises `|F(t)|` over `[0, window]` on `grid` uniform intervals, refining
/// every sampled local minimum that Lipschitz pruning cannot exclude.
///
/// Grid evaluation is parallel; candidate order and tie-breaking (toward the
/// smaller `t` within 1e-12) make the result independent of the thread count.
pub fn minimize_series(f: &DiagonalSeries, window: f64, grid: usize, refine_tol: f64) -> Result<SeriesMinimum> {
    if !(window.is_finite() && window > 0.0) {
        return Err(Error::InvalidArgument(format!("window must be positive, got {window}")));
    }
    if grid < 2 {
        return Err(Error::InvalidArgument("grid needs at least 2 intervals".into()));
    }
    let h = window / grid as f64;
    let at = |i: usize| if i == grid { window } else { i as f64 * h };
    let vals: Vec<f64> = (0..=grid).into_par_iter().map(|i| f.magnitude(at(i))).collect();

    let (mut best_i, mut best_v) = (0, vals[0]);
    for (i, &v) in vals.iter().enumerate() {
        if v < best_v - TIE_TOL {
            best_i = i;
            best_v = v;
        }
    }
    let slack = f.lipschitz() * h;
    let candidates: Vec<usize> = (0..=grid)
        .filter(|&i| {
            let left = i == 0 || vals[i] <= vals[i - 1];
            let right = i == grid || vals[i] <= vals[i + 1];
            (left && right && vals[i] - slack <= best_v) || i == best_i
        })
        .collect();

    let refined: Vec<(f64, f64)> = candidates
        .par_iter()
        .map(|&i| {
            let a = at(i.saturating_sub(1));
            let b = at((i + 1).min(grid));
            let (t, v2) = golden(f, a, b, refine_tol);
            let v = v2.max(0.0).sqrt();
            if v <= vals[i] {
                (t, v)
            } else {
                (at(i), vals[i])
            }
        })
        .collect();

    let mut best = (at(best_i), best_v);
    for &(t, v) in &refined {
        if v < best.1 - TIE_TOL || (v <= best.1 + TIE_TOL && t < best.0) {
            best = (t, v);
        }
    }
    // Settle the reported value at the reported time.
    Ok(SeriesMinimum {
        minimum: f.magnitude(best.0),
        argmin: best.0,
        refinements: refined.len(),
    })
}

/// `min |U(t)_{u,u}|` over the period of `u`, or over an explicit window.
pub fn minimize_diagonal(w: &WalkEvaluator<'_>, u: usize, opts: &MinimizeOptions) -> Result<MinimizationResult> {
    let f = w.diagonal_series(u)?;
    let period = w.decomposition().periodicity(u)?;
    let rho = period.period.filter(|_| period.periodic);
    let (window, certified) = match (opts.window, rho, opts.fallback_window) {
        (Some(t), Some(r), _) => (t, t >= r * (1.0 - 1e-12)),
        (Some(t), None, _) => (t, false),
        (None, Some(r), _) => (r, true),
        (None, None, Some(t)) => (t, false),
        (None, None, None) => return Err(Error::NoCertifiedWindow(u)),
    };
    let grid = opts.grid_for(window, f.spread());
    let m = minimize_series(&f, window, grid, opts.refine_tol)?;
    Ok(MinimizationResult {
        vertex: u,
        window,
        grid,
        minimum: m.minimum,
        argmin: m.argmin,
        refinements: m.refinements,
        certified_window: certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FamilySpec;
    use crate::spectral::decompose;

    fn dec(spec: &str, kind: MatrixKind) -> SpectralDecomposition {
        decompose(&spec.parse::<FamilySpec>().unwrap().build().unwrap(), kind).unwrap()
    }

    #[test]
    fn identity_at_zero_and_k4() {
        let d = dec("complete:4", MatrixKind::Adjacency);
        let w = WalkEvaluator::new(&d);
        assert!((w.transition_entry(0.0, 2, 2) - 1.0).norm() < 1e-12);
        assert!((w.transition_entry(PI / 4.0, 0, 0).norm() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn p3_pst() {
        let d = dec("path:3", MatrixKind::Adjacency);
        let w = WalkEvaluator::new(&d);
        let t = PI / 2f64.sqrt();
        assert!((w.transition_entry(t, 0, 2).norm() - 1.0).abs() < 1e-9);
        let p = d.periodicity(0).unwrap();
        let (v, tau, _) = w.detect_pst(0, &p, 1e-8).unwrap();
        assert_eq!(v, 2);
        assert!((tau - t).abs() < 1e-9);
        let d = dec("path:3", MatrixKind::Laplacian);
        let w = WalkEvaluator::new(&d);
        assert!(w.detect_pst(0, &d.periodicity(0).unwrap(), 1e-8).is_none());
    }

    #[test]
    fn magnitude_series_examples() {
        let d = dec("complete:3", MatrixKind::Adjacency);
        let w = WalkEvaluator::new(&d);
        let s = w.diagonal_magnitude_series(0, &[0.0, PI / 3.0]).unwrap();
        assert!((s[0].1 - 1.0).abs() < 1e-12 && (s[1].1 - 1.0 / 3.0).abs() < 1e-12);
        assert!(w.diagonal_magnitude_series(0, &[1.0, 0.0]).is_err());

        let d = dec("star:9", MatrixKind::Adjacency);
        let w = WalkEvaluator::new(&d);
        let s = w.diagonal_magnitude_series(1, &[PI / 3.0]).unwrap();
        assert!((s[0].1 - 7.0 / 9.0).abs() < 1e-12);

        let d = dec("doublecone:disconnected:cycle:4", MatrixKind::Laplacian);
        let w = WalkEvaluator::new(&d);
        let s = w.diagonal_magnitude_series(0, &[PI / 2.0]).unwrap();
        assert!((s[0].1 - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn closed_forms_match_spectral() {
        let cases = [
            ("complete:6", MatrixKind::Adjacency, VertexRole::Any),
            ("complete:6", MatrixKind::Laplacian, VertexRole::Any),
            ("star:5", MatrixKind::Adjacency, VertexRole::Leaf),
            ("star:5", MatrixKind::Adjacency, VertexRole::Center),
            ("star:5", MatrixKind::Laplacian, VertexRole::Leaf),
            ("star:5", MatrixKind::Laplacian, VertexRole::Center),
            ("cone:cycle:6", MatrixKind::Adjacency, VertexRole::Apex),
            ("cone:path:4", MatrixKind::Laplacian, VertexRole::Apex),
            ("doublecone:disconnected:cycle:5", MatrixKind::Adjacency, VertexRole::Apex),
            ("doublecone:disconnected:path:5", MatrixKind::Laplacian, VertexRole::Apex),
            ("doublecone:connected:path:3", MatrixKind::Laplacian, VertexRole::Apex),
            ("cliquejoin:3:path:4", MatrixKind::Laplacian, VertexRole::CliquePart),
            ("emptyjoin:4:cycle:5", MatrixKind::Laplacian, VertexRole::EmptyPart),
            ("emptyjoin:2:hamming:2,3", MatrixKind::Adjacency, VertexRole::Apex),
            ("doublestar:3,3", MatrixKind::Adjacency, VertexRole::Leaf),
            ("doublestar:3,3", MatrixKind::Adjacency, VertexRole::Internal),
            ("doublestar:2,2", MatrixKind::Adjacency, VertexRole::Internal),
        ];
        for (s, kind, role) in cases {
            let spec: FamilySpec = s.parse().unwrap();
            let cf = closed_form(&spec, kind, role).unwrap();
            let u = spec.role_vertex(role).unwrap();
            let d = decompose(&spec.build().unwrap(), kind).unwrap();
            let w = WalkEvaluator::new(&d);
            for i in 0..200 {
                let t = i as f64 * 0.173;
                let diff = (cf.eval(t) - w.transition_entry(t, u, u)).norm();
                assert!(diff < 1e-9, "{s} {kind} {role} t={t}: {diff}");
            }
        }
        assert!(closed_form(&FamilySpec::Cycle(5), MatrixKind::Adjacency, VertexRole::Any).is_err());
    }

    #[test]
    fn tensor_is_pointwise_product() {
        let a = DiagonalSeries::new([(2.0, 0.25), (-1.0, 0.75)]);
        let b = DiagonalSeries::new([(1.0, 0.5), (0.0, 0.5)]);
        let ab = a.tensor(&b);
        assert_eq!(ab.terms.len(), 4);
        for t in [0.0, 0.3, 1.7, 5.0] {
            assert!((ab.eval(t) - a.eval(t) * b.eval(t)).norm() < 1e-14);
        }
    }

    #[test]
    fn minimize_rooks_and_p3() {
        let d = dec("rook:3,5", MatrixKind::Adjacency);
        let r = minimize_diagonal(&WalkEvaluator::new(&d), 0, &MinimizeOptions::default()).unwrap();
        assert!(r.certified_window);
        assert!((r.minimum - 0.2).abs() < 1e-9, "{r:?}");
        assert!((r.argmin - PI).abs() < 1e-6, "{r:?}");

        let d = dec("rook:3,4", MatrixKind::Adjacency);
        let r = minimize_diagonal(&WalkEvaluator::new(&d), 0, &MinimizeOptions::default()).unwrap();
        assert!((r.minimum - 0.2064).abs() < 1e-3, "{r:?}");
        assert!((r.argmin - 0.9556).abs() < 1e-3, "{r:?}");

        let d = dec("path:3", MatrixKind::Adjacency);
        let r = minimize_diagonal(&WalkEvaluator::new(&d), 0, &MinimizeOptions::default()).unwrap();
        assert!(r.minimum < 1e-8);
        assert!((r.argmin - PI / 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn minimize_requires_window_when_aperiodic() {
        let d = dec("doublestar:3,3", MatrixKind::Adjacency);
        let w = WalkEvaluator::new(&d);
        assert!(matches!(
            minimize_diagonal(&w, 0, &MinimizeOptions::default()),
            Err(Error::NoCertifiedWindow(0))
        ));
        let r = minimize_diagonal(&w, 0, &MinimizeOptions::default().with_fallback(20.0)).unwrap();
        assert!(!r.certified_window);
    }

    #[test]
    fn mixing_and_revival() {
        let d = dec("complete:2", MatrixKind::Adjacency);
        let w = WalkEvaluator::new(&d);
        let fr = w.check_fractional_revival(0, 1, PI / 2.0, 1e-8);
        assert!(fr.proper && fr.alpha < 1e-12 && (fr.beta - 1.0).abs() < 1e-12);
        // K_2 at π/4 mixes uniformly.
        assert!(w.check_uniform_mixing_all(PI / 4.0, 1e-12).mixing);
        let d = dec("complete:3", MatrixKind::Adjacency);
        let w = WalkEvaluator::new(&d);
        assert!(w.check_uniform_mixing_all(2.0 * PI / 9.0, 1e-12).mixing);
    }
}
