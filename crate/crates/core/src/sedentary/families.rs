//! Exact classifications for named families, read off known closed forms.

use num_integer::Integer;

use super::bounds::sharpness_parity_coords;
use super::certificate::{CertificateKind, Classification, SedentaryCertificate, SedentaryReport};
use crate::error::{Error, Result};
use crate::graph::{FamilySpec, VertexRole, WeightedGraph};
use crate::matrices::MatrixKind;

/// A theorem-backed verdict for one vertex position.
#[derive(Debug, Clone, PartialEq)]
struct Verdict {
    claim: Classification,
    bound: f64,
    times: Option<String>,
    note: Option<String>,
}

impl Verdict {
    fn not_sedentary(why: &str) -> Self {
        Verdict {
            claim: Classification::NotSedentary,
            bound: 0.0,
            times: None,
            note: Some(why.into()),
        }
    }

    fn tight(c: f64, times: String) -> Self {
        Verdict {
            claim: Classification::TightlySedentary(c),
            bound: c,
            times: Some(times),
            note: None,
        }
    }

    fn at_least(c: f64, note: &str) -> Self {
        Verdict {
            claim: Classification::SedentaryAtLeast(c),
            bound: c,
            times: None,
            note: Some(note.into()),
        }
    }

    fn noted(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

fn nu2(x: usize) -> u32 {
    x.trailing_zeros()
}

fn isqrt(x: usize) -> Option<usize> {
    let r = (x as f64).sqrt().round() as usize;
    (r * r == x).then_some(r)
}

/// Times `jπ/den` for odd `j`, optionally stretched by `scale`.
fn odd_multiples(den: &str, value: f64, scale: f64) -> String {
    if scale == 1.0 {
        format!("t = j*pi/{den}, j odd (t1 = {value:.10})")
    } else {
        format!("t = j*{:.10}, j odd", value * scale)
    }
}

/// Time stretch turning adjacency times into times for `kind` on a
/// `deg`-regular graph; `None` when the kind is not covered.
fn regular_scale(kind: MatrixKind, deg: f64) -> Option<f64> {
    match kind {
        MatrixKind::Adjacency | MatrixKind::Laplacian | MatrixKind::GeneralizedAdjacency(_) => Some(1.0),
        MatrixKind::NormalizedAdjacency | MatrixKind::NormalizedLaplacian if deg > 0.0 => Some(deg),
        _ => None,
    }
}

fn simple_positive(g: &WeightedGraph) -> bool {
    !g.has_loops() && g.is_positively_weighted()
}

fn rook(parts: &[usize], kind: MatrixKind) -> Option<Verdict> {
    let deg: usize = parts.iter().map(|p| p - 1).sum();
    let scale = regular_scale(kind, deg as f64)?;
    if parts.contains(&2) {
        return Some(Verdict::not_sedentary("a K_2 factor has perfect state transfer"));
    }
    let big: Vec<usize> = parts.iter().copied().filter(|&p| p >= 3).collect();
    if big.is_empty() {
        return Some(Verdict::tight(1.0, "all t".into()).noted("single vertex"));
    }
    let c: f64 = big.iter().map(|&p| 1.0 - 2.0 / p as f64).product();
    let v = nu2(big[0]);
    if big.iter().all(|&p| nu2(p) == v) {
        let pow = 1usize << v;
        let t1 = std::f64::consts::PI / pow as f64;
        Some(Verdict::tight(c, odd_multiples(&pow.to_string(), t1, scale)))
    } else {
        Some(Verdict::at_least(
            c,
            "2-adic valuations of the part sizes differ; the product bound need not be attained",
        ))
    }
}

/// `K_m ∨ X` at a clique vertex, Laplacian, `X` on `n` vertices.
fn clique_join_laplacian(m: usize, n: usize) -> Verdict {
    let s = m + n;
    if s <= 2 {
        return Verdict::not_sedentary("K_2 has perfect state transfer");
    }
    let t1 = std::f64::consts::PI / s as f64;
    Verdict::tight(1.0 - 2.0 / s as f64, odd_multiples(&s.to_string(), t1, 1.0))
}

/// `O_m ∨ X` at an `O_m` vertex, Laplacian, `X` on `n` vertices.
fn empty_join_laplacian(m: usize, n: usize) -> Verdict {
    use std::f64::consts::{PI, SQRT_2};
    let nf = n as f64;
    match m {
        1 => clique_join_laplacian(1, n),
        2 => match n % 4 {
            2 => Verdict::not_sedentary("perfect state transfer between the apexes at t = pi/2"),
            0 => Verdict::tight(2.0 / (nf + 2.0), odd_multiples("2", PI / 2.0, 1.0)),
            _ if n == 1 => Verdict::tight(1.0 / 3.0, odd_multiples("1", PI, 1.0)),
            _ => Verdict::tight(SQRT_2 / (nf + 2.0), odd_multiples("2", PI / 2.0, 1.0)),
        },
        _ => {
            let c = 1.0 - 2.0 / m as f64;
            if nu2(m) == nu2(n) {
                let g = m.gcd(&n);
                Verdict::tight(c, odd_multiples(&g.to_string(), PI / g as f64, 1.0))
            } else {
                Verdict::at_least(c, "twin bound; 2-adic valuations of m and n differ")
            }
        }
    }
}

/// Apex of a cone over a `d`-regular graph on `n` vertices, adjacency.
fn cone_adjacency(n: usize, d: f64) -> Verdict {
    if d == 0.0 {
        return Verdict::not_sedentary("cone over an empty graph: |U(t)| = |cos(sqrt(n) t)| vanishes");
    }
    let disc = d * d + 4.0 * n as f64;
    let t1 = std::f64::consts::PI / disc.sqrt();
    Verdict::tight(d / disc.sqrt(), format!("t = j*pi/sqrt({disc}), j odd (t1 = {t1:.10})")).noted(
        "the minimum of |U|^2 is d^2/(d^2+4n); the constant reported is its square root",
    )
}

/// Apex of `O_2 ∨ X` with `X` simple, unweighted, `d`-regular on `n` vertices.
fn double_cone_adjacency(n: usize, d: usize) -> Verdict {
    use std::f64::consts::{PI, SQRT_2};
    if d == 0 {
        return Verdict::not_sedentary("d = 0: perfect state transfer between the apexes");
    }
    let Some(r) = isqrt(d * d + 8 * n) else {
        return Verdict::not_sedentary("d^2 + 8n is not a square: pretty good state transfer between the apexes");
    };
    let s = (r - d) / 2;
    if nu2(d + s) == nu2(s) {
        return Verdict::not_sedentary("equal 2-adic valuations: perfect state transfer between the apexes");
    }
    let g = d.gcd(&s);
    let (d1, s1) = (d / g, s / g);
    let c = if s1 == 1 {
        1.0 / (d1 as f64 + 2.0)
    } else {
        SQRT_2 / (d1 as f64 + 2.0 * s1 as f64)
    };
    Verdict::tight(c, odd_multiples(&g.to_string(), PI / g as f64, 1.0))
}

fn star(n: usize, kind: MatrixKind, leaf: bool) -> Option<Verdict> {
    use std::f64::consts::PI;
    let nf = n as f64;
    if n == 1 {
        return Some(Verdict::not_sedentary("K_2 has perfect state transfer"));
    }
    Some(match (kind, leaf) {
        (MatrixKind::Adjacency, false) => Verdict::not_sedentary("|U(t)| = |cos(sqrt(n) t)| vanishes"),
        (MatrixKind::Adjacency, true) if n == 2 => {
            Verdict::not_sedentary("P_3: perfect state transfer between the leaves")
        }
        (MatrixKind::Adjacency, true) => Verdict::tight(
            1.0 - 2.0 / nf,
            format!("t = j*pi/sqrt({n}), j odd (t1 = {:.10})", PI / nf.sqrt()),
        ),
        (MatrixKind::Laplacian, false) => clique_join_laplacian(1, n),
        (MatrixKind::Laplacian, true) => empty_join_laplacian(n, 1),
        _ => return None,
    })
}

fn double_star_leaf(k: usize) -> Option<Verdict> {
    use std::f64::consts::PI;
    let kf = k as f64;
    match (k, isqrt(4 * k + 1)) {
        (2, _) => Some(Verdict::tight(0.25, format!("t = j*pi/3, j = 2,4 mod 6 (t1 = {:.10})", 2.0 * PI / 3.0))),
        (k, Some(r)) if k > 2 => {
            // The two cosine frequencies (r ± 1)/2 are consecutive integers, so
            // they cannot both sit at an odd multiple of π: the bound is never attained.
            Some(Verdict::at_least(
                1.0 - 2.0 / kf,
                &format!("twin bound; not attained since frequencies {} and {} cannot both be at phase pi", (r - 1) / 2, r.div_ceil(2)),
            ))
        }
        (k, None) if k >= 3 => {
            // Support {λ_4, λ_2, 0, λ_3, λ_1} in the basis {1/2, sqrt(4k+1)/2}.
            let coords = [vec![1, 1], vec![-1, 1], vec![0, 0], vec![1, -1], vec![-1, -1]];
            let in_s = [false, false, true, false, false];
            sharpness_parity_coords(&coords, &in_s)
                .ok()
                .filter(|&even| even)
                .map(|_| Verdict {
                    claim: Classification::SharplySedentary(1.0 - 2.0 / kf),
                    bound: 1.0 - 2.0 / kf,
                    times: None,
                    note: Some("S = {0}; every integer relation has an even S-part, so the infimum 2a - 1 is approached".into()),
                })
        }
        _ => None,
    }
}

/// Verdict by the structural position of `u` in the family member `g`.
fn verdict(spec: &FamilySpec, kind: MatrixKind, g: &WeightedGraph, u: usize) -> Result<Option<Verdict>> {
    use FamilySpec as F;
    use MatrixKind::Adjacency;
    g.check_vertex(u)?;
    let base_graph = |b: &FamilySpec| b.build();
    Ok(match spec {
        F::Complete(n) => rook(&[*n], kind),
        F::Rook(parts) => rook(parts, kind),
        F::Hamming { k, n } => rook(&vec![*n; *k], kind),
        F::Path(1) => rook(&[1], kind),
        F::Path(2) => rook(&[2], kind),
        F::Path(3) => star(2, kind, u != 1),
        F::Star(n) => star(*n, kind, u != 0),
        F::Cone(b) if u == 0 => {
            let x = base_graph(b)?;
            cone_like(kind, 1, false, &x)
        }
        F::DoubleCone { connected, base } if u < 2 => {
            let x = base_graph(base)?;
            cone_like(kind, 2, !connected, &x)
        }
        F::CliqueJoin { m, base } if u < *m => {
            let x = base_graph(base)?;
            cone_like(kind, *m, false, &x)
        }
        F::EmptyJoin { m, base } if u < *m => {
            let x = base_graph(base)?;
            cone_like(kind, *m, true, &x)
        }
        F::DoubleStar { k, l } if kind == Adjacency && k == l => {
            if u == *k || u == k + 1 {
                Some(Verdict::not_sedentary(
                    "U(t)_{u,u} is real and changes sign on [0, 2pi]; by the intermediate value theorem it vanishes",
                ))
            } else {
                double_star_leaf(*k)
            }
        }
        F::CartesianPower { k, base } if kind.is_product_additive() => {
            let x = base_graph(base)?;
            let n = x.order();
            let mut coords = Vec::with_capacity(*k);
            let mut rest = u;
            for _ in 0..*k {
                coords.push(rest % n);
                rest /= n;
            }
            let mut c = 1.0;
            for &v in &coords {
                match verdict(base, kind, &x, v)? {
                    None => return Ok(None),
                    Some(f) => match f.claim {
                        Classification::NotSedentary => {
                            return Ok(Some(Verdict::not_sedentary("a factor is not sedentary")));
                        }
                        other => c *= other.constant().unwrap_or(0.0),
                    },
                }
            }
            (c > 0.0).then(|| Verdict::at_least(c, "product of the factor constants"))
        }
        _ => None,
    })
}

/// Cone-like joins: `K_m ∨ X` (`empty = false`) or `O_m ∨ X` at a joined vertex.
fn cone_like(kind: MatrixKind, m: usize, empty: bool, x: &WeightedGraph) -> Option<Verdict> {
    let n = x.order();
    match kind {
        MatrixKind::Laplacian if simple_positive(x) => Some(if empty {
            empty_join_laplacian(m, n)
        } else {
            clique_join_laplacian(m, n)
        }),
        MatrixKind::Adjacency if m == 1 && !x.has_loops() => x.regular_degree().map(|d| cone_adjacency(n, d)),
        MatrixKind::Adjacency if m == 2 && empty && x.is_simple() && x.is_unweighted() => x
            .regular_degree()
            .map(|d| double_cone_adjacency(n, d.round() as usize)),
        _ => None,
    }
}

/// Exact classification of the vertex at `role` in a catalogued family.
///
/// Covers complete, rook and Hamming graphs (any kind; normalized kinds with
/// rescaled times), stars, cones, `K_m ∨ X` and `O_m ∨ X` (Laplacian), cones
/// and `O_2 ∨ X` over regular graphs (adjacency), double stars `S_{k,k}`
/// (adjacency) and Cartesian powers of covered bases.
pub fn family_closed_classification(spec: &FamilySpec, kind: MatrixKind, role: VertexRole) -> Result<SedentaryReport> {
    let g = spec.build()?;
    let u = spec.role_vertex(role)?;
    family_closed_for_vertex(spec, kind, &g, u)?
        .ok_or_else(|| Error::Unsupported(format!("no closed-form classification for {spec} / {kind} / {role}")))
}

/// Like [`family_closed_classification`] with an explicit vertex; `Ok(None)`
/// when the position is not catalogued.
pub fn family_closed_for_vertex(
    spec: &FamilySpec,
    kind: MatrixKind,
    g: &WeightedGraph,
    u: usize,
) -> Result<Option<SedentaryReport>> {
    let Some(v) = verdict(spec, kind, g, u)? else {
        return Ok(None);
    };
    let mut cert = SedentaryCertificate::new(CertificateKind::ClosedFormFamily, v.bound).with_claim(v.claim);
    cert.equality_times = v.times;
    cert.note = v.note;
    let mut report = SedentaryReport::new(spec.to_string(), kind, u, g.order());
    report.classification = v.claim;
    report.certificates.push(cert);
    Ok(Some(report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn classify(spec: &str, kind: &str, role: &str) -> Classification {
        family_closed_classification(
            &spec.parse().unwrap(),
            kind.parse().unwrap(),
            role.parse().unwrap(),
        )
        .unwrap()
        .classification
    }

    fn tight(c: f64) -> Classification {
        Classification::TightlySedentary(c)
    }

    fn close(a: Classification, b: Classification) -> bool {
        a.approx_eq(&b, 1e-12)
    }

    #[test]
    fn complete_and_rook() {
        assert!(close(classify("complete:5", "A", "0"), tight(0.6)));
        assert!(close(classify("complete:2", "L", "0"), Classification::NotSedentary));
        assert!(close(classify("rook:3,5", "A", "0"), tight(0.2)));
        assert!(close(
            classify("rook:3,4", "A", "0"),
            Classification::SedentaryAtLeast(1.0 / 6.0)
        ));
        assert!(close(classify("rook:2,5", "A", "0"), Classification::NotSedentary));
        assert!(close(classify("hamming:3,4", "norm-lap", "0"), tight(0.125)));
    }

    #[test]
    fn stars() {
        assert!(close(classify("star:9", "A", "leaf"), tight(7.0 / 9.0)));
        assert!(close(classify("star:9", "A", "center"), Classification::NotSedentary));
        assert!(close(classify("star:9", "L", "center"), tight(0.8)));
        assert!(close(classify("star:5", "L", "leaf"), tight(0.6)));
        assert!(close(classify("star:6", "L", "leaf"), Classification::SedentaryAtLeast(2.0 / 3.0)));
        assert!(close(classify("star:2", "L", "leaf"), tight(1.0 / 3.0)));
        assert!(close(classify("path:3", "A", "0"), Classification::NotSedentary));
    }

    #[test]
    fn joins() {
        assert!(close(classify("cliquejoin:3:path:4", "L", "clique"), tight(1.0 - 2.0 / 7.0)));
        assert!(close(classify("doublecone:disconnected:cycle:4", "L", "apex"), tight(1.0 / 3.0)));
        assert!(close(classify("doublecone:disconnected:cycle:6", "L", "apex"), Classification::NotSedentary));
        assert!(close(classify("doublecone:disconnected:cycle:5", "L", "apex"), tight(SQRT_2 / 7.0)));
        assert!(close(classify("doublecone:disconnected:complete:1", "L", "apex"), tight(1.0 / 3.0)));
        assert!(close(classify("emptyjoin:4:cycle:4", "L", "empty"), tight(0.5)));
        assert!(close(
            classify("emptyjoin:4:cycle:3", "L", "empty"),
            Classification::SedentaryAtLeast(0.5)
        ));
    }

    #[test]
    fn adjacency_cones() {
        let c = classify("cone:cycle:5", "A", "apex");
        assert!(close(c, tight(2.0 / 24f64.sqrt())));
        assert!(close(classify("cone:empty:4", "A", "apex"), Classification::NotSedentary));
        assert!(close(classify("doublecone:disconnected:cycle:4", "A", "apex"), tight(1.0 / 3.0)));
        assert!(close(classify("doublecone:disconnected:cycle:12", "A", "apex"), tight(SQRT_2 / 5.0)));
        // d = 2, n = 5: 4 + 40 = 44 is not a square.
        assert!(close(classify("doublecone:disconnected:cycle:5", "A", "apex"), Classification::NotSedentary));
    }

    #[test]
    fn double_stars() {
        assert!(close(classify("doublestar:2,2", "A", "leaf"), tight(0.25)));
        assert!(close(
            classify("doublestar:6,6", "A", "leaf"),
            Classification::SedentaryAtLeast(1.0 - 2.0 / 6.0)
        ));
        assert!(close(
            classify("doublestar:3,3", "A", "leaf"),
            Classification::SharplySedentary(1.0 / 3.0)
        ));
        assert!(close(classify("doublestar:3,3", "A", "internal"), Classification::NotSedentary));
        assert!(family_closed_classification(
            &"doublestar:3,4".parse().unwrap(),
            MatrixKind::Adjacency,
            VertexRole::Internal
        )
        .is_err());
    }

    #[test]
    fn powers() {
        let c = classify("power:2:star:4", "A", "6");
        assert!(close(c, Classification::SedentaryAtLeast(0.25)));
        assert!(close(classify("power:2:star:4", "A", "5"), Classification::NotSedentary));
    }
}
