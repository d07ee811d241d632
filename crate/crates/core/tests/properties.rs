use num_traits::Zero;
use proptest::prelude::*;

use tits_arrangement::arrangement::{cells_in_window, projective_face_counts, vertices_in_window, ChartKind};
use tits_arrangement::families::{self, SeedQuadruple};
use tits_arrangement::io;
use tits_arrangement::proj::{collinear, concurrent, incident};
use tits_arrangement::{Arrangement, Chart, Conic, HLine, HPoint, Projectivity, Window};

fn triple() -> impl Strategy<Value = [i64; 3]> {
    [-20i64..=20, -20i64..=20, -20i64..=20].prop_filter("nonzero", |v| v.iter().any(|x| *x != 0))
}

fn hpoint() -> impl Strategy<Value = HPoint> {
    triple().prop_map(|v| HPoint::new(v[0], v[1], v[2]).unwrap())
}

fn hline() -> impl Strategy<Value = HLine> {
    triple().prop_map(|v| HLine::new(v[0], v[1], v[2]).unwrap())
}

fn projectivity() -> impl Strategy<Value = Projectivity> {
    prop::array::uniform3(prop::array::uniform3(-4i64..=4)).prop_filter_map("singular", |m| Projectivity::from_ints(m).ok())
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn scaling_gives_the_same_point(v in triple(), k in 1i64..50, neg in any::<bool>()) {
        let k = if neg { -k } else { k };
        prop_assert_eq!(HPoint::new(v[0], v[1], v[2]).unwrap(), HPoint::new(v[0] * k, v[1] * k, v[2] * k).unwrap());
    }

    #[test]
    fn join_contains_both_points(p in hpoint(), q in hpoint()) {
        prop_assume!(p != q);
        let l = p.join(&q).unwrap();
        prop_assert!(incident(&p, &l) && incident(&q, &l));
        let m = l.meet(&HLine::new(1, 2, 3).unwrap());
        if let Ok(m) = m {
            prop_assert!(collinear(&p, &q, &m));
        }
    }

    #[test]
    fn projectivities_preserve_incidence(p in hpoint(), l in hline(), t in projectivity()) {
        prop_assert_eq!(incident(&p, &l), incident(&t.apply_point(&p), &t.apply_line(&l)));
    }

    #[test]
    fn inverse_composes_to_identity(t in projectivity(), p in hpoint()) {
        prop_assert_eq!(t.compose(&t.inverse()), Projectivity::identity());
        prop_assert_eq!(t.inverse().apply_point(&t.apply_point(&p)), p);
    }

    #[test]
    fn concurrency_is_dual_to_collinearity(a in hline(), b in hline(), c in hline()) {
        prop_assert_eq!(concurrent(&a, &b, &c), collinear(&a.dual(), &b.dual(), &c.dual()));
    }

    #[test]
    fn conic_through_five_contains_them(t in projectivity()) {
        // Images of five points of a circle under t.
        let pts = [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (3, 4, 5), (5, -12, 13)]
            .map(|(x, y, z)| t.apply_point(&HPoint::new(x, y, z).unwrap()));
        let c = Conic::through_five(&pts).unwrap();
        prop_assert!(pts.iter().all(|p| c.contains(p)));
        prop_assert!(c.is_nondegenerate());
    }

    #[test]
    fn shifted_seeds_agree(t in projectivity(), k in -8i64..8) {
        let seed = SeedQuadruple::canonical().transformed(&t).unwrap();
        let points = families::lemma5_points(&seed, k.min(0) - 1, k.max(0) + 4).unwrap();
        let mut moved = seed.clone();
        for _ in 0..k.max(0) { moved = moved.shifted_forward().unwrap(); }
        for _ in k.min(0)..0 { moved = moved.shifted_backward().unwrap(); }
        prop_assert_eq!(&moved.points()[0], &points[&k]);
        prop_assert_eq!(families::lemma5_forward(&moved).unwrap(), points[&(k + 4)].clone());
    }

    #[test]
    fn vertex_weights_match_projective_counts(lines in prop::collection::btree_set(hline(), 2..7)) {
        let lines: Vec<HLine> = lines.into_iter().filter(|l| *l != HLine::new(1, 1, 97).unwrap()).collect();
        let arr = Arrangement::new(lines.clone(), HLine::new(1, 1, 97).unwrap()).unwrap();
        let counts = projective_face_counts(&lines);
        let all = arr.all_vertices();
        prop_assert_eq!(all.len(), counts.vertices);
        prop_assert_eq!(all.iter().map(|(_, w)| w).sum::<usize>(), counts.edges);
    }

    #[test]
    fn cells_partition_the_window(lines in prop::collection::btree_set(hline(), 1..6), u0 in -5i64..5, w0 in -5i64..5, du in 1i64..6, dw in 1i64..6) {
        let z = HLine::new(0, 0, 1).unwrap();
        let lines: Vec<HLine> = lines.into_iter().filter(|l| *l != z).collect();
        let arr = Arrangement::new(lines, z).unwrap();
        let w = Window::from_ints(u0, u0 + du, w0, w0 + dw).unwrap();
        let chart = Chart::new(&ChartKind::BoundaryAtInfinity, &arr);
        let cells = cells_in_window(&arr, &chart, &w).unwrap();
        let total = cells.iter().fold(num_rational::BigRational::zero(), |acc, c| acc + c.area());
        prop_assert_eq!(total, w.area());
        for v in vertices_in_window(&arr, &chart, &w).unwrap() {
            prop_assert!(w.contains(&v.u, &v.w));
            prop_assert_eq!(v.weight, arr.weight(&v.point));
        }
    }

    #[test]
    fn arrangement_json_round_trips(lines in prop::collection::btree_set(hline(), 0..8)) {
        let b = HLine::new(3, -7, 11).unwrap();
        let lines: Vec<HLine> = lines.into_iter().filter(|l| *l != b).collect();
        let arr = Arrangement::new(lines, b).unwrap();
        let text = io::arrangement_to_json(&arr, None);
        let back = io::parse_arrangement(&text, true).unwrap();
        prop_assert_eq!(back.arrangement.lines(), arr.lines());
        prop_assert_eq!(back.arrangement.boundary(), arr.boundary());
        prop_assert_eq!(io::arrangement_to_json(&back.arrangement, None), text);
    }
}
