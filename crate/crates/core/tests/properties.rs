use cocal_core::io::{from_json, to_json, LieAlgebraRecord};
use cocal_core::lie::LieAlgebra;
use cocal_core::random::{conjugate, invertible, random_form, random_model_matrix, rng};
use cocal_core::report::{decide_matrix, Tolerances};
use cocal_core::{invariant_factors, Scalar, Variance};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wedge_is_graded_commutative(seed in any::<u64>(), p in 0usize..=4, q in 0usize..=3) {
        let mut r = rng(seed);
        let a = random_form(&mut r, 7, p, Variance::Form, 0.4);
        let b = random_form(&mut r, 7, q, Variance::Form, 0.4);
        let ba = b.wedge(&a);
        let expected = if p * q % 2 == 0 { ba } else { ba.neg() };
        prop_assert_eq!(a.wedge(&b), expected);
    }

    #[test]
    fn wedge_is_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_form(&mut r, 7, 1, Variance::Form, 0.6);
        let b = random_form(&mut r, 7, 2, Variance::Form, 0.4);
        let c = random_form(&mut r, 7, 2, Variance::Form, 0.4);
        prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
    }

    #[test]
    fn pushforward_respects_the_wedge(seed in any::<u64>(), p in 1usize..=3) {
        let mut r = rng(seed);
        let m = invertible(&mut r, 7, 2);
        let a = random_form(&mut r, 7, p, Variance::Form, 0.4);
        let b = random_form(&mut r, 7, 2, Variance::Form, 0.4);
        prop_assert_eq!(a.wedge(&b).pushforward(&m), a.pushforward(&m).wedge(&b.pushforward(&m)));
    }

    #[test]
    fn differential_squares_to_zero(seed in any::<u64>(), k in 0usize..=5) {
        let mut r = rng(seed);
        let (model, f) = random_model_matrix(&mut r);
        let g = LieAlgebra::from_matrix(&f, model.field).unwrap();
        let rho = random_form(&mut r, 7, k, Variance::Form, 0.5);
        prop_assert!(g.ce_differential(&g.ce_differential(&rho)).is_zero());
    }

    #[test]
    fn scalars_round_trip_through_text(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50) {
        let x = &Scalar::from_i64(a) / &Scalar::from_i64(b) + &Scalar::gaussian(0, c) / &Scalar::from_i64(d);
        let back: Scalar = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conjugation_keeps_invariant_factors_and_decisions(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (model, f) = random_model_matrix(&mut r);
        let h = conjugate(&mut r, &f);
        prop_assert_eq!(invariant_factors(&f), invariant_factors(&h));
        let tol = Tolerances::default();
        let a = decide_matrix(&f, model.field, tol, String::new()).unwrap();
        let b = decide_matrix(&h, model.field, tol, String::new()).unwrap();
        prop_assert_eq!(a.decisions, b.decisions);
    }

    #[test]
    fn algebra_records_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (model, f) = random_model_matrix(&mut r);
        let g = LieAlgebra::from_matrix(&f, model.field).unwrap();
        let rec = LieAlgebraRecord::from_algebra(&g);
        let back: LieAlgebraRecord = from_json(&to_json(&rec).unwrap()).unwrap();
        prop_assert_eq!(&back, &rec);
        prop_assert!(back.to_algebra().unwrap().validate().is_ok());
        prop_assert_eq!(back.to_algebra().unwrap().field(), model.field);
    }
}
