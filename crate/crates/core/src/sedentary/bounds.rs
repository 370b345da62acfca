//! Lower bounds on `|U(t)_{u,u}|` from eigenvalue subsets and twin sets.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::certificate::{CertificateKind, Classification, SedentaryCertificate};
use super::lattice::parity_forced_even;
use crate::error::{Error, Result};
use crate::spectral::{commensurate_coordinates, EigenvalueSupport, SpectralDecomposition, TwinSet};
use crate::walk::{minimize_series, DiagonalSeries, MinimizationResult, MinimizeOptions, DEFAULT_FALLBACK_WINDOW};

/// `a` within this of 1/2 is treated as exactly 1/2.
pub const HALF_TOL: f64 = 1e-9;
/// Tolerance on the phase conditions of the equality test.
pub const PHASE_TOL: f64 = 1e-8;

/// Support of `u` together with the positions of `s` inside it and `a`.
fn resolve(d: &SpectralDecomposition, u: usize, s: &[usize]) -> Result<(EigenvalueSupport, Vec<bool>, f64)> {
    let sup = d.support(u)?;
    if s.is_empty() {
        return Err(Error::InvalidArgument("S must be non-empty".into()));
    }
    let mut in_s = vec![false; sup.len()];
    for &j in s {
        let p = sup
            .position(j)
            .ok_or_else(|| Error::InvalidArgument(format!("eigenvalue index {j} is not in the support of {u}")))?;
        if in_s[p] {
            return Err(Error::InvalidArgument(format!("eigenvalue index {j} repeated in S")));
        }
        in_s[p] = true;
    }
    if in_s.iter().all(|&b| b) {
        return Err(Error::InvalidArgument("S must be a proper subset of the support".into()));
    }
    let a = sup.weights.iter().zip(&in_s).filter(|(_, &b)| b).map(|(w, _)| w).sum();
    Ok((sup, in_s, a))
}

fn partial_series(sup: &EigenvalueSupport, in_s: &[bool]) -> DiagonalSeries {
    DiagonalSeries::new(
        sup.eigenvalues
            .iter()
            .zip(&sup.weights)
            .zip(in_s)
            .filter(|(_, &b)| b)
            .map(|((&l, &w), _)| (l, w)),
    )
}

/// `|U(t)_{u,u}| >= |Σ_{j∈S} e^{itλ_j}(E_j)_{u,u}| - (1 - a)`.
///
/// A singleton `S` gives the constant `2a - 1`. Larger subsets minimise the
/// partial sum on a grid (over its period when it has one, else over the
/// configured window) and report `max(0, min F - (1 - a))`, marked
/// non-analytic. Refuses `a < 1/2` and `a = 1/2`, which only gives `C = 0`.
pub fn subset_bound(
    d: &SpectralDecomposition,
    u: usize,
    s: &[usize],
    opts: &MinimizeOptions,
) -> Result<SedentaryCertificate> {
    let (sup, in_s, a) = resolve(d, u, s)?;
    if a < 0.5 - HALF_TOL {
        return Err(Error::CertificateRefused { a, reason: "a < 1/2" });
    }
    if (a - 0.5).abs() <= HALF_TOL {
        return Err(Error::CertificateRefused {
            a,
            reason: "a = 1/2 only gives the trivial bound",
        });
    }
    let eig: Vec<f64> = s.iter().map(|&j| d.eigenvalues()[j]).collect();
    if s.len() == 1 {
        let c = 2.0 * a - 1.0;
        return Ok(SedentaryCertificate::new(CertificateKind::SubsetBound, c)
            .with_subset(s.to_vec(), eig, a)
            .with_claim(Classification::SedentaryAtLeast(c)));
    }

    let f = partial_series(&sup, &in_s);
    let period = f.period();
    let (window, certified) = match (period, opts.window) {
        (Some(p), _) => (p, true),
        (None, Some(t)) => (t, false),
        (None, None) => (opts.fallback_window.unwrap_or(DEFAULT_FALLBACK_WINDOW), false),
    };
    let grid = opts.grid_for(window, f.spread());
    let m = minimize_series(&f, window, grid, opts.refine_tol)?;
    let c = (m.minimum - (1.0 - a)).max(0.0);
    let mut cert = SedentaryCertificate::new(CertificateKind::SubsetBound, c).with_subset(s.to_vec(), eig, a);
    cert.analytic = false;
    cert.evidence = Some(MinimizationResult {
        vertex: u,
        window,
        grid,
        minimum: m.minimum,
        argmin: m.argmin,
        refinements: m.refinements,
        certified_window: certified,
    });
    if certified && c > 0.0 {
        cert.claim = Some(Classification::SedentaryAtLeast(c));
    } else if !certified {
        cert.note = Some("partial sum minimised on an uncertified window".into());
    }
    Ok(cert)
}

/// Outcome of testing the equality conditions at `t1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EqualityCheck {
    pub t1: f64,
    pub holds: bool,
    /// Largest deviation of the phases from their targets.
    pub phase_residual: f64,
    /// `|Σ_{j∈S} e^{it₁λ_j}(E_j)_{u,u}|`.
    pub partial: f64,
    /// `|U(t₁)_{u,u}|`.
    pub magnitude: f64,
    /// `2a - 1`.
    pub expected: f64,
}

/// Checks `e^{it₁(λ₁-λ_j)} = 1` on `S`, `= -1` off `S`, and `F(t₁) >= 1 - a`.
/// When all hold, `|U(t₁)_{u,u}| = 2a - 1` and `u` is periodic at `2t₁`.
pub fn equality_condition(d: &SpectralDecomposition, u: usize, s: &[usize], t1: f64) -> Result<EqualityCheck> {
    let (sup, in_s, a) = resolve(d, u, s)?;
    let reference = sup.eigenvalues[in_s.iter().position(|&b| b).expect("S non-empty")];
    let phase_residual = sup
        .eigenvalues
        .iter()
        .zip(&in_s)
        .map(|(&l, &b)| {
            let target = if b { 1.0 } else { -1.0 };
            (Complex64::from_polar(1.0, t1 * (reference - l)) - target).norm()
        })
        .fold(0.0_f64, f64::max);
    let partial = partial_series(&sup, &in_s).magnitude(t1);
    let magnitude = sup.magnitude_at(t1);
    let holds = phase_residual <= PHASE_TOL && partial >= 1.0 - a - PHASE_TOL;
    Ok(EqualityCheck {
        t1,
        holds,
        phase_residual,
        partial,
        magnitude,
        expected: 2.0 * a - 1.0,
    })
}

/// Smallest `t₁ > 0` meeting the phase conditions for `S`, when the support is
/// commensurate. Writing `λ₁ - λ_j = δc_j` with primitive integers `c`, a time
/// `xπ/δ` works exactly when `x` is odd, every `c_j` on `S` is even and every
/// `c_k` off `S` is odd; so the answer is `π/δ` or nothing.
pub fn equality_time(d: &SpectralDecomposition, u: usize, s: &[usize]) -> Result<Option<f64>> {
    let (sup, in_s, _) = resolve(d, u, s)?;
    let reference = sup.eigenvalues[in_s.iter().position(|&b| b).expect("S non-empty")];
    let diffs: Vec<f64> = sup.eigenvalues.iter().map(|l| reference - l).collect();
    let Some((delta, c)) = commensurate_coordinates(&diffs) else {
        return Ok(None);
    };
    let fits = c
        .iter()
        .zip(&in_s)
        .all(|(&cj, &b)| cj.rem_euclid(2) == if b { 0 } else { 1 });
    Ok(fits.then_some(PI / delta))
}

/// Twin bound `1 - 2/|T|` at `u ∈ T`.
///
/// Uses `S = {θ}`. The bound is tight when the equality conditions hold for
/// `θ` and the weight of `θ` at `u` is exactly `1 - 1/|T|`. Two twins give
/// `C = 0`; the certificate is then informational and claims nothing.
pub fn twin_bound(d: &SpectralDecomposition, t: &TwinSet, u: usize) -> Result<SedentaryCertificate> {
    d.check_vertex(u)?;
    if !t.contains(u) {
        return Err(Error::InvalidArgument(format!("vertex {u} is not in the twin set")));
    }
    if t.len() < 2 {
        return Err(Error::InvalidArgument("a twin set has at least two vertices".into()));
    }
    let size = t.len() as f64;
    let c = 1.0 - 2.0 / size;
    let mut cert = SedentaryCertificate::new(CertificateKind::TwinBound, c);
    let sup = d.support(u)?;
    let j = d.index_of(t.theta).filter(|&j| sup.position(j).is_some());
    if let Some(j) = j {
        cert = cert.with_subset(vec![j], vec![d.eigenvalues()[j]], sup.weight_of(j));
    }
    if t.len() == 2 {
        return Ok(cert.with_note("two twins give C = 0; informational only"));
    }
    cert.claim = Some(Classification::SedentaryAtLeast(c));
    if let (Some(j), Some(a)) = (j, cert.a) {
        if (a - (1.0 - 1.0 / size)).abs() <= HALF_TOL && sup.len() > 1 {
            if let Some(t1) = equality_time(d, u, &[j])? {
                let eq = equality_condition(d, u, &[j], t1)?;
                if eq.holds {
                    cert.claim = Some(Classification::TightlySedentary(c));
                    cert.equality_times = Some(format!("t = j*{t1:.10}, j odd"));
                }
            }
        }
    }
    Ok(cert)
}

/// Whether every integer relation `Σ m_jλ_j + Σ ℓ_jλ_j = 0`, `Σ m_j + Σ ℓ_j = 0`
/// among the support eigenvalues of `u` forces `Σ_{j∈S} m_j` even.
///
/// Needs a commensurate support (integers after rescaling); anything else is
/// refused as unsupported.
pub fn sharpness_parity(d: &SpectralDecomposition, u: usize, s: &[usize]) -> Result<bool> {
    let (sup, in_s, _) = resolve(d, u, s)?;
    let top = sup.eigenvalues[0];
    let diffs: Vec<f64> = sup.eigenvalues.iter().map(|l| top - l).collect();
    let (_, c) = commensurate_coordinates(&diffs).ok_or_else(|| {
        Error::Unsupported(format!("support of vertex {u} is not commensurate; parity needs exact coordinates"))
    })?;
    let coords: Vec<Vec<i64>> = c.into_iter().map(|x| vec![x]).collect();
    sharpness_parity_coords(&coords, &in_s)
}

/// [`sharpness_parity`] for eigenvalues given by integer coordinates over a
/// basis of a `Q`-vector space containing them.
pub fn sharpness_parity_coords(coords: &[Vec<i64>], in_s: &[bool]) -> Result<bool> {
    if coords.len() != in_s.len() {
        return Err(Error::InvalidArgument("one coordinate vector per eigenvalue".into()));
    }
    if coords.iter().any(|c| c.len() != coords[0].len()) {
        return Err(Error::InvalidArgument("coordinate vectors differ in length".into()));
    }
    parity_forced_even(coords, in_s).ok_or_else(|| Error::Unsupported("integer overflow in lattice reduction".into()))
}
