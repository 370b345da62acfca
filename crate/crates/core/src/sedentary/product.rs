//! Sedentariness of Cartesian products from their factors.

use super::certificate::{CertificateKind, Classification, OracleEvidence, SedentaryCertificate, SedentaryReport};
use crate::error::{Error, Result};
use crate::walk::{minimize_series, DiagonalSeries, MinimizeOptions, DEFAULT_FALLBACK_WINDOW};

/// Agreement needed between the product minimum and `Π C_j` to call the
/// product bound attained.
pub const ATTAIN_TOL: f64 = 1e-6;

/// A factor `(X_j, u_j)`: its report and its diagonal series `U_{X_j}(t)_{u_j,u_j}`.
#[derive(Debug, Clone)]
pub struct ProductFactor {
    pub report: SedentaryReport,
    pub series: DiagonalSeries,
}

/// Composes factor reports into a report for `(u_1, ..., u_k)` in `□_j X_j`.
///
/// Uses `|U_Z(t)| = Π_j |U_{X_j}(t)|`. A non-sedentary factor makes the
/// product non-sedentary; otherwise the bound is `Π C_j`. When every factor is
/// tight, the product series is minimised and the bound is upgraded to tight
/// if some time attains `Π C_j` within [`ATTAIN_TOL`].
pub fn product_compose(factors: &[ProductFactor], opts: &MinimizeOptions) -> Result<SedentaryReport> {
    let first = factors
        .first()
        .ok_or_else(|| Error::InvalidArgument("a product needs at least one factor".into()))?;
    let kind = first.report.matrix;
    if let Some(f) = factors.iter().find(|f| f.report.matrix != kind) {
        return Err(Error::MixedMatrixKinds(kind.to_string(), f.report.matrix.to_string()));
    }
    if !kind.is_product_additive() {
        return Err(Error::Unsupported(format!(
            "{kind} does not factor over Cartesian products"
        )));
    }

    let graph = factors
        .iter()
        .map(|f| f.report.graph.as_str())
        .collect::<Vec<_>>()
        .join(" x ");
    let (mut vertex, mut order) = (0, 1);
    for f in factors {
        vertex = vertex * f.report.order + f.report.vertex;
        order *= f.report.order;
    }
    let mut report = SedentaryReport::new(graph, kind, vertex, order);

    let mut cert = SedentaryCertificate::new(CertificateKind::ProductComposition, 0.0);
    if let Some(i) = factors
        .iter()
        .position(|f| f.report.classification == Classification::NotSedentary)
    {
        cert.claim = Some(Classification::NotSedentary);
        cert.note = Some(format!("factor {i} is not sedentary"));
        report.classification = Classification::NotSedentary;
        report.certificates.push(cert);
        return Ok(report);
    }
    let constants: Option<Vec<f64>> = factors
        .iter()
        .map(|f| f.report.classification.constant().filter(|&c| c > 0.0))
        .collect();
    let Some(constants) = constants else {
        cert.note = Some("some factor has no positive constant".into());
        report.certificates.push(cert);
        return Ok(report);
    };
    let c: f64 = constants.iter().product();
    cert.bound = c;
    cert.claim = Some(Classification::SedentaryAtLeast(c));
    report.classification = Classification::SedentaryAtLeast(c);

    let series = factors
        .iter()
        .skip(1)
        .fold(first.series.clone(), |acc, f| acc.tensor(&f.series));
    let (window, certified) = match series.period() {
        Some(p) => (p, true),
        None => (opts.fallback_window.unwrap_or(DEFAULT_FALLBACK_WINDOW), false),
    };
    let grid = opts.grid_for(window, series.spread());
    let m = minimize_series(&series, window, grid, opts.refine_tol)?;
    report.oracle = Some(OracleEvidence {
        minimum: m.minimum,
        argmin: m.argmin,
        window,
        grid,
        certified,
    });

    let all_tight = factors
        .iter()
        .all(|f| matches!(f.report.classification, Classification::TightlySedentary(_)));
    if all_tight && (m.minimum - c).abs() <= ATTAIN_TOL {
        cert.claim = Some(Classification::TightlySedentary(c));
        cert.equality_times = Some(format!("common attainment time t1 = {:.10}", m.argmin));
        report.classification = Classification::TightlySedentary(c);
    } else if all_tight {
        cert.note = Some(format!(
            "no common attainment time: product minimum {:.6} exceeds the bound",
            m.minimum
        ));
    }
    report.certificates.push(cert);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FamilySpec;
    use crate::matrices::MatrixKind;
    use crate::sedentary::families::family_closed_classification;
    use crate::walk::closed_form;
    use crate::VertexRole;

    fn factor(spec: &str, kind: MatrixKind, role: &str) -> ProductFactor {
        let spec: FamilySpec = spec.parse().unwrap();
        let role: VertexRole = role.parse().unwrap();
        ProductFactor {
            report: family_closed_classification(&spec, kind, role).unwrap(),
            series: closed_form(&spec, kind, role).unwrap(),
        }
    }

    #[test]
    fn rook_products() {
        let opts = MinimizeOptions::default();
        let r = product_compose(
            &[factor("complete:3", MatrixKind::Adjacency, "0"), factor("complete:5", MatrixKind::Adjacency, "0")],
            &opts,
        )
        .unwrap();
        assert_eq!(r.order, 15);
        assert!(r.classification.approx_eq(&Classification::TightlySedentary(0.2), 1e-12));

        let r = product_compose(
            &[factor("complete:3", MatrixKind::Adjacency, "0"), factor("complete:4", MatrixKind::Adjacency, "0")],
            &opts,
        )
        .unwrap();
        assert!(r.classification.approx_eq(&Classification::SedentaryAtLeast(1.0 / 6.0), 1e-12));
        let o = r.oracle.unwrap();
        assert!(o.certified && (o.minimum - 0.2064).abs() < 1e-3);
    }

    #[test]
    fn star_powers_and_refusals() {
        let opts = MinimizeOptions::default();
        let leaf = factor("star:4", MatrixKind::Adjacency, "leaf");
        let r = product_compose(&[leaf.clone(), leaf.clone()], &opts).unwrap();
        assert!((r.constant().unwrap() - 0.25).abs() < 1e-12);
        assert!(r.oracle.unwrap().minimum >= 0.25 - 1e-9);

        let k2 = factor("complete:2", MatrixKind::Adjacency, "0");
        let r = product_compose(&[leaf.clone(), k2], &opts).unwrap();
        assert_eq!(r.classification, Classification::NotSedentary);

        let lap = factor("star:4", MatrixKind::Laplacian, "center");
        assert!(matches!(product_compose(&[leaf, lap], &opts), Err(Error::MixedMatrixKinds(..))));
    }
}
