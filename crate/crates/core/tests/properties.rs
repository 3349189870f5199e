use hermitia::analysis::{constancy_test, hsc, sample_hsc};
use hermitia::curvature::{curvature_d, symmetrize, CurvatureDFamily};
use hermitia::lie_hermitian::{self as lh, file};
use hermitia::models::{hopf_curvature_d, hopf_curvature_d_assembled, HopfPoint};
use hermitia::ConnectionParams;
use num_complex::Complex64;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = ConnectionParams> {
    (-4.0..4.0f64, -3.0..3.0f64).prop_filter_map("outside the domain", |(r, s)| ConnectionParams::new(r, s).ok())
}

fn algebra() -> impl Strategy<Value = lh::StructureConstants> {
    (2usize..=4, any::<u64>()).prop_flat_map(|(n, seed)| (1..n).prop_map(move |m| lh::random_two_step(n, m, seed).unwrap()))
}

fn vector(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| Complex64::new(a, b)), n)
        .prop_filter("zero vector", |v| v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn curvature_is_hermitian(sc in algebra(), p in params()) {
        let rd = curvature_d(&sc, p).unwrap();
        prop_assert!(rd.hermitian_defect() <= 1e-10 * (1.0 + rd.max_abs()));
    }

    #[test]
    fn family_agrees_with_direct(sc in algebra(), p in params()) {
        let fam = CurvatureDFamily::new(&sc).unwrap();
        prop_assert!(fam.at(p).max_diff(&curvature_d(&sc, p).unwrap()) <= 1e-10);
    }

    #[test]
    fn hsc_is_scale_invariant((sc, x) in algebra().prop_flat_map(|sc| { let n = sc.n(); (Just(sc), vector(n)) }),
                              p in params(), re in 0.1..10.0f64, im in -10.0..10.0f64) {
        let rd = curvature_d(&sc, p).unwrap();
        let lambda = Complex64::new(re, im);
        let y: Vec<Complex64> = x.iter().map(|z| z * lambda).collect();
        let (a, b) = (hsc(&rd, &x).unwrap(), hsc(&rd, &y).unwrap());
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
    }

    #[test]
    fn hsc_only_sees_the_symmetrization((sc, x) in algebra().prop_flat_map(|sc| { let n = sc.n(); (Just(sc), vector(n)) }), p in params()) {
        let rd = curvature_d(&sc, p).unwrap();
        let a = hsc(&rd, &x).unwrap();
        prop_assert!((a - hsc(&symmetrize(&rd), &x).unwrap()).abs() <= 1e-9 * (1.0 + a.abs()));
    }

    #[test]
    fn constant_verdict_matches_samples(sc in algebra(), p in params(), seed in any::<u64>()) {
        let rd = curvature_d(&sc, p).unwrap();
        let v = constancy_test(&symmetrize(&rd), 1e-9);
        if v.constant {
            for h in sample_hsc(&rd, 16, seed) {
                prop_assert!((h - v.c).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn frame_change_preserves_validity_and_verdict(sc in algebra(), seed in any::<u64>(), p in params()) {
        let u = lh::random_unitary(sc.n(), seed);
        let moved = lh::change_frame(&sc, &u, 1e-9).unwrap();
        prop_assert!(lh::validate(&moved, 1e-9).ok);
        let a = constancy_test(&symmetrize(&curvature_d(&sc, p).unwrap()), 1e-9);
        let b = constancy_test(&symmetrize(&curvature_d(&moved, p).unwrap()), 1e-9);
        prop_assert_eq!(a.constant, b.constant);
        // the tensor itself transforms covariantly
        let rotated = curvature_d(&sc, p).unwrap().change_frame(&u);
        prop_assert!(rotated.max_diff(&curvature_d(&moved, p).unwrap()) <= 1e-9);
    }

    #[test]
    fn file_round_trip(sc in algebra()) {
        let back = file::parse(&file::to_text(&sc, Some("x"))).unwrap();
        prop_assert_eq!(back, sc);
    }

    #[test]
    fn hopf_closed_form_matches_assembly(z in vector(3), p in params()) {
        let pt = HopfPoint::new(z).unwrap();
        prop_assert!(hopf_curvature_d(&pt, p).max_diff(&hopf_curvature_d_assembled(&pt, p)) <= 1e-10);
    }
}
