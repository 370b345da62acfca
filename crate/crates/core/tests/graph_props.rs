mod common;

use common::{random_graph, rng};
use proptest::prelude::*;
use qwsed_core::graph::{blow_up, cartesian_product, complement, join, BlowUpMode, BlowUpPart};
use qwsed_core::matrices::assemble;
use qwsed_core::{FamilySpec, MatrixKind};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn product_order_and_degrees(seed: u64, nx in 1usize..=5, ny in 1usize..=5) {
        let mut r = rng(seed);
        let x = random_graph(&mut r, nx, 0.5, false);
        let y = random_graph(&mut r, ny, 0.5, false);
        let z = cartesian_product(&x, &y);
        prop_assert_eq!(z.order(), nx * ny);
        for u in 0..nx {
            for v in 0..ny {
                prop_assert_eq!(z.degree(u * ny + v), x.degree(u) + y.degree(v));
            }
        }
    }

    #[test]
    fn complement_is_an_involution(seed: u64, n in 1usize..=12) {
        let mut r = rng(seed);
        let x = random_graph(&mut r, n, 0.5, false);
        prop_assert_eq!(complement(&complement(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn join_adds_the_other_side(seed: u64, nx in 1usize..=6, ny in 1usize..=6) {
        let mut r = rng(seed);
        let x = random_graph(&mut r, nx, 0.5, false);
        let y = random_graph(&mut r, ny, 0.5, false);
        let z = join(&x, &y);
        for u in 0..nx {
            prop_assert_eq!(z.degree(u), x.degree(u) + ny as f64);
        }
        for v in 0..ny {
            prop_assert_eq!(z.degree(nx + v), y.degree(v) + nx as f64);
        }
    }

    #[test]
    fn unit_blow_up_is_identity(seed: u64, n in 1usize..=10, complete: bool) {
        let mut r = rng(seed);
        let x = random_graph(&mut r, n, 0.5, false);
        let part = if complete { BlowUpPart::complete(1) } else { BlowUpPart::empty(1) };
        prop_assert_eq!(blow_up(&x, BlowUpMode::Vertex, &vec![part; n]).unwrap(), x);
    }

    #[test]
    fn loopless_laplacian_rows_vanish(seed: u64, n in 1usize..=12) {
        let mut r = rng(seed);
        let x = random_graph(&mut r, n, 0.5, true);
        let loopless = qwsed_core::WeightedGraph::from_edges(
            n,
            x.edges().filter(|e| e.u != e.v).map(|e| (e.u, e.v, e.weight)),
        )
        .unwrap();
        let l = assemble(&loopless, MatrixKind::Laplacian).unwrap().matrix;
        for row in l.row_iter() {
            prop_assert!(row.sum().abs() <= 1e-12);
        }
    }

    #[test]
    fn generalized_zero_is_adjacency(seed: u64, n in 1usize..=12) {
        let mut r = rng(seed);
        let x = random_graph(&mut r, n, 0.5, true);
        let a = assemble(&x, MatrixKind::Adjacency).unwrap().matrix;
        let g = assemble(&x, MatrixKind::GeneralizedAdjacency(0.0)).unwrap().matrix;
        prop_assert_eq!(a, g);
    }

    #[test]
    fn rook_of_one_part_is_complete(n in 1usize..=15) {
        let rook: FamilySpec = format!("rook:{n}").parse().unwrap();
        let k: FamilySpec = format!("complete:{n}").parse().unwrap();
        prop_assert_eq!(rook.build().unwrap(), k.build().unwrap());
    }

    #[test]
    fn family_specs_round_trip(n in 4usize..=9, k in 1usize..=4) {
        for s in [
            format!("lollipop:{n},{k}"),
            format!("rook:{n},{k}"),
            format!("power:{k}:star:{n}"),
            format!("doublecone:disconnected:cycle:{n}"),
            format!("emptyjoin:{k}:complete:{n}"),
        ] {
            let spec: FamilySpec = s.parse().unwrap();
            prop_assert_eq!(spec.to_string(), s);
        }
    }
}

#[test]
fn catalogue_examples() {
    let h = "hamming:2,3".parse::<FamilySpec>().unwrap().build().unwrap();
    assert_eq!(h.order(), 9);
    assert_eq!(h.regular_degree(), Some(4.0));

    let s = "doublestar:2,2".parse::<FamilySpec>().unwrap().build().unwrap();
    assert_eq!((s.order(), s.edge_count()), (6, 5));
    assert!(s.is_connected());

    let t = "threshold:3,2,4,1".parse::<FamilySpec>().unwrap().build().unwrap();
    assert_eq!(t.order(), 10);
    // ((O_3 ∨ K_2) ∪ O_4) ∨ K_1: 3·2 + 1 edges, then 9 to the last vertex.
    assert_eq!(t.edge_count(), 16);
    assert_eq!(t.degree(9), 9.0);
}
