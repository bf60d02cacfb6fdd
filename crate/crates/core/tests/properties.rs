use proptest::prelude::*;

use orlicz_besov::geometry::{measure_ball_intersection, Domain};
use orlicz_besov::quadrature::QuadratureSpec;
use orlicz_besov::verify::{assign_splits, fitted_constant, fmt_g9, Bound};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fitted_constants_widen_with_more_trials(
        ratios in prop::collection::vec(1e-3f64..1e3, 2..60),
        extra in prop::collection::vec(1e-3f64..1e3, 0..40),
        seed in 0u64..1000,
    ) {
        let mut all = ratios.clone();
        all.extend(&extra);
        let up_few = fitted_constant(&ratios, Bound::Upper, seed);
        let up_all = fitted_constant(&all, Bound::Upper, seed);
        prop_assert!(up_all >= up_few);
        let lo_few = fitted_constant(&ratios, Bound::Lower, seed);
        let lo_all = fitted_constant(&all, Bound::Lower, seed);
        prop_assert!(lo_all <= lo_few);
    }

    #[test]
    fn splits_extend_by_prefix(n in 1usize..300, m in 0usize..100, seed in any::<u64>()) {
        let short = assign_splits(n, seed);
        let long = assign_splits(n + m, seed);
        // the guard that forces one training row only touches row 0
        prop_assert_eq!(&short[1..], &long[1..n]);
    }

    #[test]
    fn g9_round_trips_to_nine_digits(x in -1e12f64..1e12) {
        let back: f64 = fmt_g9(x).parse().unwrap();
        prop_assert!((back - x).abs() <= 1e-8 * x.abs().max(1e-300));
    }

    #[test]
    fn ball_measure_within_trivial_bounds(cx in -1.5f64..1.5, cy in -1.5f64..1.5, r in 0.01f64..3.0) {
        let d = Domain::unit_ball();
        let spec = QuadratureSpec::default().with_seed(5);
        let spec = QuadratureSpec { n_measure: 1024, ..spec };
        let m = measure_ball_intersection(&d, [cx, cy], r, &spec).unwrap().value;
        // every sample lies in the square around B(c, r) clipped to the bounding box of Ω
        let w = ((cx + r).min(1.0) - (cx - r).max(-1.0)).max(0.0);
        let h = ((cy + r).min(1.0) - (cy - r).max(-1.0)).max(0.0);
        prop_assert!(m >= 0.0);
        prop_assert!(m <= w * h * (1.0 + 1e-12));
    }
}
