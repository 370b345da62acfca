//! The classification pipeline for a single vertex.

use num_complex::Complex64;
use rayon::prelude::*;

use super::bounds::{
    equality_condition, equality_time, sharpness_parity, subset_bound, twin_bound, HALF_TOL,
};
use super::certificate::{
    CertificateKind, Classification, OracleEvidence, SedentaryCertificate, SedentaryReport, SupportEntry,
};
use super::families::family_closed_for_vertex;
use super::product::{product_compose, ProductFactor};
use crate::error::{Error, Result};
use crate::graph::{FamilySpec, VertexRole, WeightedGraph};
use crate::matrices::{assemble, MatrixKind};
use crate::spectral::{twin_class_of, EigenvalueSupport, SpectralDecomposition, DEFAULT_CLUSTER_TOL};
use crate::walk::{minimize_diagonal, MinimizeOptions, WalkEvaluator, DEFAULT_FALLBACK_WINDOW};

/// Certified minima at or below this are treated as zeros of `U(t)_{u,u}`.
pub const ZERO_TOL: f64 = 1e-7;
/// Agreement between an oracle minimum and an analytic constant.
pub const MATCH_TOL: f64 = 1e-6;
/// Largest support for the exhaustive subset search.
pub const MAX_EXHAUSTIVE_SUPPORT: usize = 20;

#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    pub minimize: MinimizeOptions,
    pub cluster_tol: f64,
    /// `|U(τ)_{u,v}| > 1 - pst_tol` counts as perfect state transfer.
    pub pst_tol: f64,
    /// How the graph was built; enables closed forms and product composition.
    pub family: Option<FamilySpec>,
    /// Name used in the report when no family is given.
    pub graph_name: Option<String>,
    /// Try every proper subset of the support (at most
    /// [`MAX_EXHAUSTIVE_SUPPORT`] eigenvalues) instead of singletons only.
    pub exhaustive_subsets: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            minimize: MinimizeOptions::default().with_fallback(DEFAULT_FALLBACK_WINDOW),
            cluster_tol: DEFAULT_CLUSTER_TOL,
            pst_tol: 1e-8,
            family: None,
            graph_name: None,
            exhaustive_subsets: false,
        }
    }
}

impl ClassifyOptions {
    pub fn with_family(mut self, spec: FamilySpec) -> Self {
        self.family = Some(spec);
        self
    }
}

/// Classifies `u` in `g` under `kind`.
pub fn classify(g: &WeightedGraph, kind: MatrixKind, u: usize, opts: &ClassifyOptions) -> Result<SedentaryReport> {
    g.check_vertex(u)?;
    let d = SpectralDecomposition::new(&assemble(g, kind)?, opts.cluster_tol)?;
    classify_decomposed(g, &d, u, opts)
}

/// Builds the family member, resolves `role` and classifies that vertex.
pub fn classify_family(
    spec: &FamilySpec,
    kind: MatrixKind,
    role: VertexRole,
    opts: &ClassifyOptions,
) -> Result<SedentaryReport> {
    let g = spec.build()?;
    let u = spec.role_vertex(role)?;
    let opts = opts.clone().with_family(spec.clone());
    classify(&g, kind, u, &opts)
}

/// Classifies every vertex of `g`, sharing one decomposition.
pub fn classify_all(g: &WeightedGraph, kind: MatrixKind, opts: &ClassifyOptions) -> Result<Vec<SedentaryReport>> {
    let d = SpectralDecomposition::new(&assemble(g, kind)?, opts.cluster_tol)?;
    (0..g.order()).map(|u| classify_decomposed(g, &d, u, opts)).collect()
}

fn describe_times(t1: f64) -> String {
    format!("t = j*{t1:.10}, j odd")
}

/// Singleton-style certificates for `S`: the bound itself, and when `a`
/// permits, the equality and parity upgrades (or the `a = 1/2` obstruction).
fn subset_certificates(
    d: &SpectralDecomposition,
    u: usize,
    sup: &EigenvalueSupport,
    s: &[usize],
    opts: &ClassifyOptions,
) -> Result<Vec<SedentaryCertificate>> {
    let mut out = Vec::new();
    let a: f64 = s.iter().map(|&j| sup.weight_of(j)).sum();
    let eig: Vec<f64> = s.iter().map(|&j| d.eigenvalues()[j]).collect();
    let half = (a - 0.5).abs() <= HALF_TOL;
    if a < 0.5 - HALF_TOL {
        return Ok(out);
    }
    let t1 = equality_time(d, u, s)?;
    let eq = match t1 {
        Some(t) => Some(equality_condition(d, u, s, t)?).filter(|e| e.holds),
        None => None,
    };
    let parity = match sharpness_parity(d, u, s) {
        Ok(p) => Some(p),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };

    if half {
        if let Some(e) = eq {
            out.push(
                SedentaryCertificate::new(CertificateKind::SubsetBound, 0.0)
                    .with_subset(s.to_vec(), eig.clone(), a)
                    .with_claim(Classification::NotSedentary)
                    .with_times(describe_times(e.t1))
                    .with_note(format!("a = 1/2 and the equality conditions hold: |U(t1)| = {:.2e}", e.magnitude)),
            );
        } else if parity == Some(true) {
            out.push(
                SedentaryCertificate::new(CertificateKind::SharpnessParity, 0.0)
                    .with_subset(s.to_vec(), eig, a)
                    .with_claim(Classification::NotSedentary)
                    .with_note("a = 1/2 and every integer relation has an even S-part: the infimum is 0"),
            );
        }
        return Ok(out);
    }

    let mut cert = subset_bound(d, u, s, &opts.minimize)?;
    if s.len() == 1 {
        if let Some(e) = eq {
            cert.claim = Some(Classification::TightlySedentary(cert.bound));
            cert.equality_times = Some(describe_times(e.t1));
        }
    }
    out.push(cert);
    if parity == Some(true) && eq.is_none() {
        out.push(
            SedentaryCertificate::new(CertificateKind::SharpnessParity, 2.0 * a - 1.0)
                .with_subset(s.to_vec(), eig, a)
                .with_claim(Classification::SharplySedentary(2.0 * a - 1.0))
                .with_note(format!("infimum 2a - 1 = {:.10} is approached", 2.0 * a - 1.0)),
        );
    }
    Ok(out)
}

/// Proper non-empty subsets of the support with `a > 1/2`, by bitmask.
fn exhaustive_subsets(sup: &EigenvalueSupport) -> Result<Vec<Vec<usize>>> {
    let r = sup.len();
    if r > MAX_EXHAUSTIVE_SUPPORT {
        return Err(Error::InvalidArgument(format!(
            "exhaustive subset search is capped at {MAX_EXHAUSTIVE_SUPPORT} eigenvalues, support has {r}"
        )));
    }
    Ok((1u32..(1 << r) - 1)
        .filter(|mask| mask.count_ones() >= 2)
        .filter_map(|mask| {
            let idx: Vec<usize> = (0..r).filter(|i| mask >> i & 1 == 1).collect();
            let a: f64 = idx.iter().map(|&i| sup.weights[i]).sum();
            (a > 0.5 + HALF_TOL).then(|| idx.iter().map(|&i| sup.indices[i]).collect())
        })
        .collect())
}

/// A sign change of the real function `e^{-itc} U(t)_{u,u}` on the grid,
/// when `U(t)_{u,u}` is real up to a global phase.
fn zero_crossing(w: &WalkEvaluator<'_>, u: usize, window: f64, grid: usize) -> Result<Option<(f64, f64)>> {
    let f = w.diagonal_series(u)?;
    let (lo, hi) = f
        .terms
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), t| (lo.min(t.0), hi.max(t.0)));
    let shift = (lo + hi) / 2.0;
    let tol = 1e-9 * hi.abs().max(lo.abs()).max(1.0);
    if !f.is_real_after_shift(shift, tol) {
        return Ok(None);
    }
    let h = window / grid as f64;
    let vals: Vec<f64> = (0..=grid)
        .into_par_iter()
        .map(|i| {
            let t = i as f64 * h;
            (f.eval(t) * Complex64::from_polar(1.0, -shift * t)).re
        })
        .collect();
    let eps = 1e-9;
    let mut last: Option<(usize, f64)> = None;
    for (i, &v) in vals.iter().enumerate() {
        if v.abs() <= eps {
            continue;
        }
        if let Some((j, p)) = last {
            if p.signum() != v.signum() {
                return Ok(Some((j as f64 * h, i as f64 * h)));
            }
        }
        last = Some((i, v));
    }
    Ok(None)
}

/// Row-major coordinates of `u` in a product of graphs with the given orders.
fn product_coordinates(u: usize, orders: &[usize]) -> Vec<usize> {
    let mut rest = u;
    let mut out = vec![0; orders.len()];
    for (slot, &n) in out.iter_mut().zip(orders).rev() {
        *slot = rest % n;
        rest /= n;
    }
    out
}

fn product_report(
    spec: &FamilySpec,
    kind: MatrixKind,
    u: usize,
    opts: &ClassifyOptions,
) -> Result<Option<SedentaryReport>> {
    let Some(factors) = spec.product_factors() else {
        return Ok(None);
    };
    if !kind.is_product_additive() {
        return Ok(None);
    }
    let graphs: Vec<WeightedGraph> = factors.iter().map(FamilySpec::build).collect::<Result<_>>()?;
    let orders: Vec<usize> = graphs.iter().map(WeightedGraph::order).collect();
    let coords = product_coordinates(u, &orders);
    let parts = factors
        .iter()
        .zip(&graphs)
        .zip(&coords)
        .map(|((f, g), &v)| {
            let d = SpectralDecomposition::new(&assemble(g, kind)?, opts.cluster_tol)?;
            let fopts = opts.clone().with_family(f.clone());
            let report = classify_decomposed(g, &d, v, &fopts)?;
            let series = WalkEvaluator::new(&d).diagonal_series(v)?;
            Ok(ProductFactor { report, series })
        })
        .collect::<Result<Vec<_>>>()?;
    product_compose(&parts, &opts.minimize).map(Some)
}

/// [`classify`] over an existing decomposition of `g`.
pub fn classify_decomposed(
    g: &WeightedGraph,
    d: &SpectralDecomposition,
    u: usize,
    opts: &ClassifyOptions,
) -> Result<SedentaryReport> {
    d.check_vertex(u)?;
    let kind = d.kind();
    let w = WalkEvaluator::new(d);
    let name = opts
        .family
        .as_ref()
        .map(ToString::to_string)
        .or_else(|| opts.graph_name.clone())
        .unwrap_or_else(|| format!("graph#{:016x}", d.graph_hash()));
    let mut report = SedentaryReport::new(name, kind, u, d.order());
    let sup = d.support(u)?;
    report.support = sup
        .eigenvalues
        .iter()
        .zip(&sup.weights)
        .map(|(&eigenvalue, &weight)| SupportEntry { eigenvalue, weight })
        .collect();
    let period = d.periodicity(u)?;
    report.period = Some(period.clone());

    // (1) perfect state transfer, decided exactly at half the period.
    if let Some((v, tau, mag)) = w.detect_pst(u, &period, opts.pst_tol) {
        report.certificates.push(
            SedentaryCertificate::new(CertificateKind::NotSedentaryPst, 0.0)
                .with_claim(Classification::NotSedentary)
                .with_times(format!("t = {tau:.10}"))
                .with_note(format!("|U(t)_{{{u},{v}}}| = {mag:.12}")),
        );
    } else if !period.periodic {
        report
            .notes
            .push("no certified period: perfect state transfer not ruled in or out".into());
    }

    // (2) twins.
    let twins = twin_class_of(g, kind, u).filter(|t| d.verify_twin_eigenvector(t));
    if let Some(t) = &twins {
        report.certificates.push(twin_bound(d, t, u)?);
    }

    // (3) singleton subsets: the heaviest eigenvalue, then the twin eigenvalue.
    if sup.len() >= 2 {
        let heaviest = (0..sup.len()).fold(0, |b, i| if sup.weights[i] > sup.weights[b] + 1e-12 { i } else { b });
        let mut singles = vec![sup.indices[heaviest]];
        if let Some(j) = twins
            .as_ref()
            .and_then(|t| d.index_of(t.theta))
            .filter(|&j| sup.position(j).is_some() && j != singles[0])
        {
            singles.push(j);
        }
        for j in singles {
            report.certificates.extend(subset_certificates(d, u, &sup, &[j], opts)?);
        }
        if opts.exhaustive_subsets {
            for s in exhaustive_subsets(&sup)? {
                match subset_bound(d, u, &s, &opts.minimize) {
                    Ok(c) => report.certificates.push(c),
                    Err(Error::CertificateRefused { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }

    // (4) closed forms and (5) products, when the provenance is known.
    if let Some(spec) = &opts.family {
        if let Some(r) = family_closed_for_vertex(spec, kind, g, u)? {
            report.certificates.extend(r.certificates);
        }
        if let Some(r) = product_report(spec, kind, u, opts)? {
            report.certificates.extend(r.certificates);
        }
    }

    // (6) oracle.
    let m = minimize_diagonal(&w, u, &opts.minimize)?;
    let oracle = OracleEvidence::from(m);
    report.oracle = Some(oracle);

    // (7) zero crossing of a real-valued diagonal entry.
    if let Some((a, b)) = zero_crossing(&w, u, m.window, m.grid)? {
        report.certificates.push(
            SedentaryCertificate::new(CertificateKind::NotSedentaryZeroCrossing, 0.0)
                .with_claim(Classification::NotSedentary)
                .with_times(format!("U(t)_{{u,u}} = 0 for some t in [{a:.10}, {b:.10}]"))
                .with_note("U(t)_{u,u} is real up to a global phase and changes sign"),
        );
    }

    report.classification = reconcile(&mut report, &oracle);
    Ok(report)
}

/// Merges certificate claims and oracle evidence into one classification.
fn reconcile(report: &mut SedentaryReport, oracle: &OracleEvidence) -> Classification {
    let claims: Vec<Classification> = report.certificates.iter().filter_map(|c| c.claim).collect();
    let m = oracle.minimum;

    for c in &report.certificates {
        if let Some(k) = c.claim.and_then(|k| k.constant()) {
            if oracle.certified && m < k - MATCH_TOL {
                report.notes.push(format!(
                    "inconsistent: {} claims {k:.9} but the certified minimum is {m:.9}",
                    c.kind
                ));
            }
        }
    }

    if claims.contains(&Classification::NotSedentary) {
        return Classification::NotSedentary;
    }
    if oracle.certified && m <= ZERO_TOL {
        report
            .notes
            .push(format!("certified-window minimum {m:.3e} is zero: U(t)_{{u,u}} vanishes"));
        return Classification::NotSedentary;
    }

    let analytic = |pred: fn(&Classification) -> bool| -> Option<f64> {
        claims
            .iter()
            .filter(|c| pred(c))
            .filter_map(Classification::constant)
            .filter(|&c| c > 0.0)
            .fold(None, |best: Option<f64>, c| Some(best.map_or(c, |b| b.max(c))))
    };

    if oracle.certified {
        // Periodic and nonvanishing: the minimum over one period is attained.
        let matched = claims
            .iter()
            .filter_map(Classification::constant)
            .filter(|&c| c > 0.0 && (c - m).abs() <= MATCH_TOL)
            .fold(None, |best: Option<f64>, c| Some(best.map_or(c, |b| b.max(c))));
        return match matched {
            Some(c) => {
                report.notes.push(format!("oracle minimum {m:.9} matches the analytic constant {c:.9}"));
                Classification::TightlySedentary(c)
            }
            None => Classification::TightlySedentary(m),
        };
    }

    if let Some(c) = analytic(|c| matches!(c, Classification::TightlySedentary(_))) {
        if m >= c - MATCH_TOL {
            return Classification::TightlySedentary(c);
        }
    }
    if let Some(c) = analytic(|c| matches!(c, Classification::SharplySedentary(_))) {
        return Classification::SharplySedentary(c);
    }
    if let Some(c) = analytic(|c| c.is_sedentary()) {
        return Classification::SedentaryAtLeast(c);
    }
    if m <= ZERO_TOL {
        report
            .notes
            .push(format!("observed minimum {m:.3e} on an uncertified window; no proof either way"));
    }
    Classification::Unresolved
}
