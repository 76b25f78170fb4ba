use std::f64::consts::TAU;

use dehnfill::certificates::{
    certify, certify_with_bounds, combine_normalized_lengths, filling_bounds, schlafli_dv,
    SchlafliStep, THRESHOLD,
};
use dehnfill::envelope::{standard_envelope, Branch};
use dehnfill::packing::{area_floor, min_tube_radius};
use dehnfill::weitzenboeck::{standard_form_coeffs, symbol_matrix_ls};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn combined_decision_matches_list(lhats in prop::collection::vec(2.0f64..60.0, 1..5)) {
        let combined = combine_normalized_lengths(&lhats).unwrap();
        let by_list = certify(&lhats).unwrap().certified;
        let by_combined = certify(&[combined]).unwrap().certified;
        // rounding of Σ1/L̂ᵢ² can only matter right at the threshold
        if (combined - THRESHOLD).abs() > 1e-12 {
            prop_assert_eq!(by_list, by_combined);
            prop_assert_eq!(by_list, combined > THRESHOLD);
        }
    }

    #[test]
    fn certified_bounds_are_ordered_and_capped(lhat in 7.5833f64..400.0) {
        let cert = certify_with_bounds(standard_envelope(), &[lhat]).unwrap();
        prop_assert!(cert.certified);
        let v = cert.volume_drop.unwrap();
        let a = cert.visual_area.unwrap();
        prop_assert!(0.0 <= v.lo && v.lo <= v.hi);
        prop_assert!(0.0 < a.lo && a.lo <= a.hi);
        prop_assert!(a.hi <= area_floor(min_tube_radius()).unwrap() + 1e-9);
        prop_assert_eq!(cert.core_length_hi.unwrap(), a.hi / TAU);
        prop_assert_eq!(cert.tube_radius_floor, Some(min_tube_radius()));
    }

    #[test]
    fn bounds_shrink_with_length(l in 7.6f64..300.0, dl in 0.5f64..50.0) {
        let env = standard_envelope();
        let near = filling_bounds(env, l).unwrap();
        let far = filling_bounds(env, l + dl).unwrap();
        prop_assert!(far.volume_drop.hi < near.volume_drop.hi);
        prop_assert!(far.visual_area.hi < near.visual_area.hi);
        prop_assert!(far.core_length_hi < near.core_length_hi);
    }

    #[test]
    fn inversion_round_trips(t in 0.0f64..1.0) {
        let env = standard_envelope();
        for branch in [Branch::Upper, Branch::Lower] {
            let x = t * env.max_invertible(branch);
            let z = env.invert(branch, x).unwrap();
            prop_assert!((env.profile(branch, z).unwrap() - x).abs() <= 1e-10);
        }
    }

    #[test]
    fn schlafli_is_linear(area in 0.01f64..5.0, alpha in 0.01f64..7.0, da in -1.0f64..1.0) {
        let one = schlafli_dv(SchlafliStep { visual_area: area, alpha, d_alpha: da }).unwrap();
        let two = schlafli_dv(SchlafliStep { visual_area: area, alpha, d_alpha: 2.0 * da }).unwrap();
        prop_assert!((two - 2.0 * one).abs() <= 1e-15 * one.abs().max(1.0));
        prop_assert!(one * da <= 0.0);
    }

    #[test]
    fn symbol_determinant_lower_bound(
        k in (1.0 / 3f64.sqrt())..=3f64.sqrt(),
        a in -10.0f64..10.0,
        b in -10.0f64..10.0,
    ) {
        prop_assume!(a != 0.0 || b != 0.0);
        let (_, det) = symbol_matrix_ls(k, (a, b));
        let n2 = a * a + b * b;
        prop_assert!(det > 0.0);
        prop_assert!(det >= (k * k).min(1.0 / (k * k)) * n2 * n2 * (1.0 - 1e-12));
    }

    #[test]
    fn standard_form_ratio_range(r in 0.1f64..5.0) {
        let s = standard_form_coeffs(r).unwrap();
        prop_assert!(s.x_ratio_bounds.0 < s.x_ratio_bounds.1);
        prop_assert!(s.a < 0.0 && s.c > 0.0);
    }
}
