mod common;

use common::{oracle_diag, random_graph, rng, twin_graph};
use proptest::prelude::*;
use rand::Rng;
use qwsed_core::graph::{blow_up, BlowUpMode, BlowUpPart};
use qwsed_core::sedentary::{family_closed_classification, product_compose, subset_bound, twin_bound, ProductFactor};
use qwsed_core::spectral::{find_twin_sets, twin_class_of, StrongCospectrality};
use qwsed_core::walk::{closed_form, minimize_diagonal};
use qwsed_core::{
    classify, decompose, Classification, ClassifyOptions, Error, FamilySpec, GraphBuilder, MatrixKind,
    MinimizeOptions, SedentaryReport, VertexRole, WalkEvaluator, WeightedGraph,
};

fn kind_strategy() -> impl Strategy<Value = MatrixKind> {
    prop_oneof![
        Just(MatrixKind::Adjacency),
        Just(MatrixKind::Laplacian),
        (-1.0f64..1.0).prop_map(MatrixKind::GeneralizedAdjacency),
        Just(MatrixKind::NormalizedAdjacency),
        Just(MatrixKind::NormalizedLaplacian),
    ]
}

fn fast_opts() -> ClassifyOptions {
    let mut o = ClassifyOptions::default();
    o.minimize = o.minimize.with_fallback(40.0 * std::f64::consts::PI);
    o
}

/// Every analytic claim in `r` is a lower bound on the oracle minimum, and so
/// is the final constant.
fn check_soundness(r: &SedentaryReport) -> Result<(), TestCaseError> {
    let Some(o) = r.oracle else { return Ok(()) };
    for c in &r.certificates {
        if let Some(k) = c.claim.and_then(|k| k.constant()) {
            if c.analytic {
                prop_assert!(o.minimum >= k - 1e-6, "{:?} claims {k} > m* {}", c.kind, o.minimum);
            }
        }
    }
    if let Some(c) = r.constant() {
        prop_assert!(o.minimum >= c - 1e-6, "classification {} above m* {}", r.classification, o.minimum);
    }
    if let Classification::TightlySedentary(c) = r.classification {
        prop_assert!((o.minimum - c).abs() <= 1e-6);
    }
    Ok(())
}

/// `|U(t)_{u,v}| <= sqrt(1 - C^2)` for `v != u` on a sample of times.
fn check_transfer_cap(g: &WeightedGraph, kind: MatrixKind, r: &SedentaryReport) -> Result<(), TestCaseError> {
    let Some(c) = r.constant().filter(|&c| c > 0.0) else { return Ok(()) };
    let d = decompose(g, kind).unwrap();
    let w = WalkEvaluator::new(&d);
    let cap = (1.0 - c * c).max(0.0).sqrt() + 1e-6;
    for i in 0..60 {
        let t = 0.37 * i as f64;
        for (v, z) in w.column(t, r.vertex).iter().enumerate() {
            if v != r.vertex {
                prop_assert!(z.norm() <= cap, "|U({t})_{{{},{v}}}| = {} > {cap}", r.vertex, z.norm());
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn twin_bound_is_sound(seed: u64, base in 2usize..=8, copies in 2usize..=4, kind in kind_strategy()) {
        let mut r = rng(seed);
        let (g, twins) = twin_graph(&mut r, base, copies, true);
        let t = twin_class_of(&g, kind, 0).unwrap();
        prop_assert!(twins.iter().all(|&v| t.contains(v)));
        let d = decompose(&g, kind).unwrap();
        prop_assert!(d.verify_twin_eigenvector(&t));
        let cert = twin_bound(&d, &t, 0).unwrap();
        let c = 1.0 - 2.0 / t.len() as f64;
        prop_assert!((cert.bound - c).abs() <= 1e-12);
        let w = WalkEvaluator::new(&d);
        let opts = MinimizeOptions::default().with_fallback(40.0 * std::f64::consts::PI);
        for &u in &t.vertices {
            let m = minimize_diagonal(&w, u, &opts).unwrap();
            prop_assert!(m.minimum >= c - 1e-6, "u={u} m*={} C={c}", m.minimum);
        }
    }

    #[test]
    fn strongly_cospectral_pairs_split_weight_in_half(seed: u64, base in 2usize..=10, kind in kind_strategy()) {
        let mut r = rng(seed);
        let (g, twins) = twin_graph(&mut r, base, 1, true);
        let (u, v) = (twins[0], twins[1]);
        let d = decompose(&g, kind).unwrap();
        prop_assume!(twin_class_of(&g, kind, u).unwrap().len() == 2);
        let part = match d.strong_cospectral(u, v).unwrap() {
            StrongCospectrality::Strong(p) => p,
            // A larger theta-eigenspace can break strong cospectrality of twins.
            StrongCospectrality::Not(_) => return Ok(()),
        };
        prop_assert!(d.are_cospectral(u, v).unwrap());
        let sup = d.support(u).unwrap();
        for s in [&part.plus, &part.minus] {
            let a: f64 = s.iter().map(|&j| sup.weight_of(j)).sum();
            prop_assert!((a - 0.5).abs() <= 1e-9, "a = {a}");
            match subset_bound(&d, u, s, &MinimizeOptions::default()) {
                Err(Error::CertificateRefused { a, .. }) => prop_assert!((a - 0.5).abs() <= 1e-9),
                other => return Err(TestCaseError::fail(format!("expected refusal, got {other:?}"))),
            }
        }
    }

    #[test]
    fn random_strong_cospectrality_implies_cospectrality(seed: u64, n in 2usize..=12, kind in kind_strategy()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.5, false);
        let d = decompose(&g, kind).unwrap();
        for u in 0..n {
            for v in u + 1..n {
                if let StrongCospectrality::Strong(p) = d.strong_cospectral(u, v).unwrap() {
                    prop_assert!(d.are_cospectral(u, v).unwrap());
                    let sup = d.support(u).unwrap();
                    let a: f64 = p.plus.iter().map(|&j| sup.weight_of(j)).sum();
                    prop_assert!((a - 0.5).abs() <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn cospectral_vertices_share_a_classification(seed: u64, base in 2usize..=7, copies in 1usize..=3, kind in kind_strategy()) {
        let mut r = rng(seed);
        let weighted = r.gen_bool(0.5);
        let (g, twins) = twin_graph(&mut r, base, copies, weighted);
        let d = decompose(&g, kind).unwrap();
        prop_assert!(d.are_cospectral(twins[0], twins[1]).unwrap());
        let opts = fast_opts();
        let a = classify(&g, kind, twins[0], &opts).unwrap();
        let b = classify(&g, kind, twins[1], &opts).unwrap();
        prop_assert!(a.classification.approx_eq(&b.classification, 1e-6), "{} vs {}", a.classification, b.classification);
    }

    #[test]
    fn classification_is_sound(seed: u64, base in 2usize..=8, copies in 1usize..=4, kind in kind_strategy()) {
        let mut r = rng(seed);
        let weighted = r.gen_bool(0.5);
        let (g, twins) = twin_graph(&mut r, base, copies, weighted);
        let opts = fast_opts();
        for u in [twins[0], 1] {
            let rep = classify(&g, kind, u, &opts).unwrap();
            check_soundness(&rep)?;
            check_transfer_cap(&g, kind, &rep)?;
        }
    }

    #[test]
    fn product_bound_never_exceeds_oracle(
        a in prop_oneof![(3usize..=7).prop_map(|n| format!("complete:{n}")), (3usize..=9).prop_map(|n| format!("star:{n}"))],
        b in prop_oneof![(3usize..=7).prop_map(|n| format!("complete:{n}")), (3usize..=9).prop_map(|n| format!("star:{n}"))],
    ) {
        let factor = |s: &str| {
            let spec: FamilySpec = s.parse().unwrap();
            let role = if s.starts_with("star") { VertexRole::Leaf } else { VertexRole::Vertex(0) };
            ProductFactor {
                report: family_closed_classification(&spec, MatrixKind::Adjacency, role).unwrap(),
                series: closed_form(&spec, MatrixKind::Adjacency, role).unwrap(),
            }
        };
        let rep = product_compose(&[factor(&a), factor(&b)], &MinimizeOptions::default()).unwrap();
        let c = rep.constant().unwrap();
        let o = rep.oracle.unwrap();
        prop_assert!(c <= o.minimum + 1e-9, "{a} x {b}: C={c} m*={}", o.minimum);
        // Independent check at the reported argmin.
        let fa: FamilySpec = a.parse().unwrap();
        let fb: FamilySpec = b.parse().unwrap();
        let (ga, gb) = (fa.build().unwrap(), fb.build().unwrap());
        let ua = if a.starts_with("star") { 1 } else { 0 };
        let ub = if b.starts_with("star") { 1 } else { 0 };
        let direct = oracle_diag(&ga, MatrixKind::Adjacency, ua, o.argmin) * oracle_diag(&gb, MatrixKind::Adjacency, ub, o.argmin);
        prop_assert!((direct - o.minimum).abs() <= 1e-8);
    }

    #[test]
    fn blown_up_twins_merge_into_one_class(seed: u64, n in 2usize..=7, ka in 1usize..=3, kb in 1usize..=3, adjacent: bool) {
        let mut r = rng(seed);
        let x = random_graph(&mut r, n, 0.5, false);
        // Add a twin n of vertex 0, adjacent to it when `adjacent`.
        let mut b = GraphBuilder::from_graph(&x);
        let t = b.add_vertices(1);
        for (v, w) in x.neighbors(0).collect::<Vec<_>>() {
            b.add_edge(t, v, w).unwrap();
        }
        if adjacent {
            b.add_edge(0, t, 1.0).unwrap();
        }
        let x = b.build();
        let fill = |k| if adjacent { BlowUpPart::complete(k) } else { BlowUpPart::empty(k) };
        let mut parts = vec![BlowUpPart::empty(1); n + 1];
        parts[0] = fill(ka);
        parts[n] = fill(kb);
        let y = blow_up(&x, BlowUpMode::Vertex, &parts).unwrap();
        // Part 0 is at the front, the twin's part at the back.
        let expected: Vec<usize> = (0..ka).chain(y.order() - kb..y.order()).collect();
        let classes = find_twin_sets(&y, MatrixKind::Adjacency);
        let class = classes.iter().find(|c| c.contains(0)).unwrap();
        prop_assert!(expected.iter().all(|&v| class.contains(v)), "{:?} not within {:?}", expected, class.vertices);
    }
}

#[test]
fn catalogue_claims_are_sound() {
    let cases: &[(&str, MatrixKind, &str)] = &[
        ("complete:5", MatrixKind::Adjacency, "0"),
        ("complete:2", MatrixKind::Adjacency, "0"),
        ("rook:3,5", MatrixKind::Adjacency, "0"),
        ("rook:4,4", MatrixKind::Adjacency, "0"),
        ("rook:3,4", MatrixKind::Adjacency, "0"),
        ("hamming:3,3", MatrixKind::Adjacency, "0"),
        ("star:4", MatrixKind::Adjacency, "leaf"),
        ("star:9", MatrixKind::Laplacian, "center"),
        ("star:5", MatrixKind::Laplacian, "leaf"),
        ("cliquejoin:2:cycle:5", MatrixKind::Laplacian, "clique"),
        ("emptyjoin:2:cycle:8", MatrixKind::Laplacian, "empty"),
        ("emptyjoin:2:cycle:7", MatrixKind::Laplacian, "empty"),
        ("emptyjoin:3:cycle:4", MatrixKind::Laplacian, "empty"),
        ("cone:cycle:6", MatrixKind::Adjacency, "apex"),
        ("doublecone:disconnected:cycle:4", MatrixKind::Adjacency, "apex"),
        ("doublestar:2,2", MatrixKind::Adjacency, "leaf"),
        ("doublestar:3,3", MatrixKind::Adjacency, "leaf"),
        ("doublestar:6,6", MatrixKind::Adjacency, "leaf"),
        ("power:2:star:4", MatrixKind::Adjacency, "6"),
    ];
    for &(spec, kind, role) in cases {
        let fam: FamilySpec = spec.parse().unwrap();
        let role: VertexRole = role.parse().unwrap();
        let closed = family_closed_classification(&fam, kind, role).unwrap();
        let g = fam.build().unwrap();
        let u = fam.role_vertex(role).unwrap();
        let d = decompose(&g, kind).unwrap();
        let opts = MinimizeOptions::default().with_fallback(200.0 * std::f64::consts::PI);
        let m = minimize_diagonal(&WalkEvaluator::new(&d), u, &opts).unwrap();
        match closed.classification {
            Classification::NotSedentary => assert!(m.minimum <= 1e-7, "{spec}: m* = {}", m.minimum),
            c => {
                let k = c.constant().unwrap();
                assert!(m.minimum >= k - 1e-6, "{spec}: {c} vs m* {}", m.minimum);
                if matches!(c, Classification::TightlySedentary(_)) {
                    assert!((m.minimum - k).abs() <= 1e-6, "{spec}: {c} vs m* {}", m.minimum);
                }
            }
        }
        let full = classify(&g, kind, u, &ClassifyOptions::default().with_family(fam.clone())).unwrap();
        assert_eq!(full.classification.is_sedentary(), closed.classification.is_sedentary(), "{spec}");
    }
}

#[test]
fn strongly_cospectral_examples_refuse_the_half_subset() {
    for (spec, kind, u, v) in [
        ("path:3", MatrixKind::Adjacency, 0, 2),
        ("cycle:4", MatrixKind::Adjacency, 0, 2),
        ("cycle:6", MatrixKind::Laplacian, 1, 4),
        ("path:5", MatrixKind::Adjacency, 1, 3),
    ] {
        let g = spec.parse::<FamilySpec>().unwrap().build().unwrap();
        let d = decompose(&g, kind).unwrap();
        let p = match d.strong_cospectral(u, v).unwrap() {
            StrongCospectrality::Strong(p) => p,
            other => panic!("{spec}: {other:?}"),
        };
        assert!(d.are_cospectral(u, v).unwrap());
        let sup = d.support(u).unwrap();
        for s in [&p.plus, &p.minus] {
            let a: f64 = s.iter().map(|&j| sup.weight_of(j)).sum();
            assert!((a - 0.5).abs() <= 1e-9, "{spec}: a = {a}");
            assert!(matches!(
                subset_bound(&d, u, s, &MinimizeOptions::default()),
                Err(Error::CertificateRefused { .. })
            ));
        }
    }
}
