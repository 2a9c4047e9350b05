use curved_koszul::curved_coalgebra::{check_curved_axioms, check_ideal_maximality, extract_alpha, koszul_dual_coalgebra};
use curved_koszul::symplectic_poisson::{build_a, build_a_koszul_dual, SymplecticAlgebraSpec};

#[test]
fn generic_dual_matches_symmetric_model() {
    for (n, d, w) in [(2, 1, 4), (3, 1, 3), (2, 2, 3)] {
        let spec = SymplecticAlgebraSpec::new(n, d);
        let a = build_a(spec);
        let generic = koszul_dual_coalgebra(&a, w).unwrap();
        let model = build_a_koszul_dual(spec, w);
        println!("({n},{d}) {:?}", generic.stratum_dims());
        assert_eq!(generic.stratum_dims(), model.stratum_dims(), "({n},{d})");
        let report = check_curved_axioms(&generic);
        assert!(report.passed(), "{:?}", report.violations);
    }
}

#[test]
fn alpha_of_symplectic_algebra() {
    let a = build_a(SymplecticAlgebraSpec::new(2, 2));
    let alpha = extract_alpha(&a).unwrap();
    assert!(alpha.alpha1.iter().all(|m| m.is_empty()));
    assert_eq!(alpha.alpha0.iter().filter(|c| **c != curved_koszul::qlinalg::q(0)).count(), 2);
    check_ideal_maximality(&a).unwrap();
}

mod every_shape {
    use curved_koszul::curved_coalgebra::{check_curved_axioms, koszul_dual_coalgebra};
    use curved_koszul::symplectic_poisson::{build_a, SymplecticAlgebraSpec};
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        /// Any bracket degree, including n ≤ 0, yields a curved coalgebra.
        #[test]
        fn dual_is_curved_for_any_bracket_degree(n in -2i64..=4, d in 1usize..=2) {
            let c = koszul_dual_coalgebra(&build_a(SymplecticAlgebraSpec::new(n, d)), 3).unwrap();
            let r = check_curved_axioms(&c);
            prop_assert!(r.passed(), "({}, {}): {:?}", n, d, r.violations.first());
        }
    }
}
