//! Metric and checker invariants as properties.

use std::f64::consts::PI;

use coarsehyp::boundary::{explicit_boundary_map, holder_fit, u_membership, BoundaryTruncation};
use coarsehyp::checkers::{check_coarsely_n_to_1, check_visual, fit_product_lower_bound, lsl_mu, LinearCeiling};
use coarsehyp::cone::{build_cone, CompactModel, TupleScan};
use coarsehyp::metric::{check_basepoint_shift, estimate_delta, gromov_product, PairSample, PointRef, PointTable, QuadrupleSample, SpaceModel};
use coarsehyp::plane::{self, HyperbolicPlane, PolarPoint};
use coarsehyp::suites::explicit_sample;
use coarsehyp::tree::{self, word_distance, FreeGroupTree, Word};
use proptest::prelude::*;

fn polar() -> impl Strategy<Value = PolarPoint> {
    (0.0..8.0f64, -10.0..10.0f64).prop_map(|(r, phi)| PolarPoint { r, phi })
}

/// Random reduced words, including the root. The first digit picks one of
/// four letters, later digits one of the three that do not cancel.
fn word(max: usize) -> impl Strategy<Value = Word> {
    prop_oneof![
        Just(Word::root()),
        (0u8..4, prop::collection::vec(0u8..3, 0..max)).prop_map(|(first, rest)| {
            let mut d = vec![first];
            d.extend(rest);
            Word::new(d).expect("digits in range")
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn plane_metric_axioms(p in polar(), q in polar(), s in polar()) {
        let d = plane::distance;
        prop_assert!(d(&p, &p).abs() < 1e-6);
        prop_assert!((d(&p, &q) - d(&q, &p)).abs() < 1e-9);
        prop_assert!(d(&p, &s) <= d(&p, &q) + d(&q, &s) + 1e-6);
    }

    #[test]
    fn plane_rotation_invariance(p in polar(), q in polar(), t in -PI..PI) {
        let rot = |x: &PolarPoint| PolarPoint { r: x.r, phi: x.phi + t };
        let (a, b) = (plane::distance(&p, &q), plane::distance(&rot(&p), &rot(&q)));
        prop_assert!((a - b).abs() <= 1e-7 * (1.0 + a), "{a} vs {b}");
    }

    #[test]
    fn plane_product_matches_definition(p in polar(), q in polar()) {
        let direct = gromov_product(&HyperbolicPlane, &p, &q, &PolarPoint::BASEPOINT);
        prop_assert!((plane::product_at_basepoint(&p, &q) - direct).abs() < 1e-7);
        prop_assert!(direct >= -1e-9 && direct <= p.r.min(q.r) + 1e-9);
    }

    #[test]
    fn tree_distance_is_prefix_metric(u in word(6), v in word(6), w in word(6)) {
        let lcp = u.common_prefix_len(&v);
        prop_assert_eq!(word_distance(&u, &v) as usize, u.len() + v.len() - 2 * lcp);
        prop_assert!(word_distance(&u, &w) <= word_distance(&u, &v) + word_distance(&v, &w));
        let prod = gromov_product(&FreeGroupTree, &u, &v, &Word::root());
        prop_assert_eq!(prod, lcp as f64);
    }

    #[test]
    fn lsl_mu_is_nonincreasing(l1 in 0.5..3.0f64, l2 in 0.5..3.0f64) {
        let f = explicit_sample(4).unwrap();
        let (lo, hi) = if l1 <= l2 { (l1, l2) } else { (l2, l1) };
        let a = lsl_mu(&f, &PairSample::Exhaustive, lo).unwrap().0;
        let b = lsl_mu(&f, &PairSample::Exhaustive, hi).unwrap().0;
        prop_assert!(b <= a + 1e-12);
    }

    #[test]
    fn u_sets_shrink_as_r_grows(p in 0usize..108, r1 in 0.0..4.0f64, r2 in 0.0..4.0f64) {
        let t = BoundaryTruncation::tree(4).unwrap();
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        for q in 0..t.len() {
            if u_membership(&t, p, hi, q).unwrap() {
                prop_assert!(u_membership(&t, p, lo, q).unwrap());
            }
        }
        prop_assert!(u_membership(&t, p, hi, p).unwrap());
    }

    #[test]
    fn basepoint_shift_holds_in_the_plane(seed in 0u64..1000) {
        let pts = HyperbolicPlane.sample_ball(4.0, 40, seed);
        let table = PointTable::from_points(&HyperbolicPlane, pts);
        let v = check_basepoint_shift(&table, &PairSample::Exhaustive, PointRef(0), PointRef(1)).unwrap();
        prop_assert!(v.pass);
        // The shift is in fact bounded by d(a, b) itself.
        let dab = table.distance(PointRef(0), PointRef(1)).unwrap();
        prop_assert!(v.worst_slack >= dab - 1e-9, "slack {} < d(a,b) = {dab}", v.worst_slack);
    }

    #[test]
    fn seeded_delta_never_exceeds_exhaustive(seed in 0u64..1000) {
        let g = build_cone(&CompactModel::Interval, 3).unwrap();
        let table = PointTable::enumerate(&g, 3);
        let full = estimate_delta(&table, QuadrupleSample::Exhaustive).unwrap().delta_hat;
        let part = estimate_delta(&table, QuadrupleSample::Seeded { seed, count: 500 }).unwrap().delta_hat;
        prop_assert!(part <= full);
    }
}

#[test]
fn visual_modulus_is_monotone() {
    let f = explicit_sample(5).unwrap();
    let grid: Vec<f64> = (0..=5).map(f64::from).collect();
    let vm = check_visual(&f, &PairSample::Exhaustive, &grid, LinearCeiling::default()).unwrap();
    assert!(vm.table.windows(2).all(|w| w[0].1 <= w[1].1), "{:?}", vm.table);
}

#[test]
fn product_bound_and_holder_grow_with_the_exponent() {
    let grid = [0.25, 0.5, 0.75, 1.0];
    let f = explicit_sample(5).unwrap();
    let pb = fit_product_lower_bound(&f, &PairSample::Exhaustive, &grid).unwrap();
    assert!(pb.frontier.windows(2).all(|w| w[0].1 <= w[1].1));
    let (s, t, m) = explicit_boundary_map(5, 2).unwrap();
    let h = holder_fit(&s, &t, &m, &grid).unwrap();
    assert!(h.frontier.windows(2).all(|w| w[0].1 <= w[1].1));
}

#[test]
fn separation_scale_is_monotone_in_r() {
    let f = explicit_sample(5).unwrap();
    let grid: Vec<f64> = (1..=8).map(f64::from).collect();
    for n in 1..=3 {
        let t = check_coarsely_n_to_1(&f, n, &grid, TupleScan::Exhaustive, LinearCeiling::default()).unwrap();
        assert!(t.rows.windows(2).all(|w| w[0].s <= w[1].s), "n={n}");
    }
}

#[test]
fn tree_geodesics_realize_distances() {
    for u in tree::ball(3) {
        for v in tree::ball(3) {
            let path = FreeGroupTree.geodesic(&u, &v, 1.0).unwrap();
            assert_eq!(path.len() as u32, word_distance(&u, &v) + 1);
            assert!(path.windows(2).all(|w| word_distance(&w[0], &w[1]) == 1));
        }
    }
}
