use curved_koszul::bar_cobar::bar::bar;
use curved_koszul::bar_cobar::twisting::{
    arity_one_twisting, bar_morphism, check_bar_morphism, check_twisting_morphism, cobar_roundtrip,
};
use curved_koszul::bar_cobar::{cobar, quasi_iso_check, BarCobarError, FilteredComplex};
use curved_koszul::curved_coalgebra::{check_curved_axioms, koszul_dual_realized};
use curved_koszul::graded::{monomial, MonoComb};
use curved_koszul::qlinalg::{q, Scalar};
use curved_koszul::symplectic_poisson::{build_a, koszulity_data, PolyAlgebra, SymplecticAlgebraSpec};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PAIRS: [(i64, usize); 3] = [(2, 1), (3, 1), (2, 2)];

fn no_differential(_: &MonoComb) -> MonoComb {
    MonoComb::new()
}

fn linear(pairs: &[(usize, Scalar)]) -> MonoComb {
    let mut out = MonoComb::new();
    for (v, x) in pairs {
        if !x.is_zero() {
            out.insert(vec![*v], x.clone());
        }
    }
    out
}

#[test]
fn bar_construction_is_curved_to_weight_four() {
    for (n, d) in PAIRS {
        let b = bar(&PolyAlgebra::new(SymplecticAlgebraSpec::new(n, d)), 4).unwrap();
        let report = check_curved_axioms(&b.coalgebra);
        assert!(report.passed(), "({n},{d}): {:?}", report.violations.first());
        assert!(b.coalgebra.curvature.iter().any(|x| !x.is_zero()));
    }
}

#[test]
fn perturbed_bar_curvature_is_rejected() {
    let mut b = bar(&PolyAlgebra::new(SymplecticAlgebraSpec::new(2, 1)), 3).unwrap();
    let i = b.coalgebra.curvature.iter().position(|x| !x.is_zero()).unwrap();
    b.coalgebra.curvature[i] = -b.coalgebra.curvature[i].clone();
    assert!(!check_curved_axioms(&b.coalgebra).passed());
}

#[test]
fn bar_curvature_sits_on_bracket_to_unit_pairs() {
    let spec = SymplecticAlgebraSpec::new(2, 1);
    let b = bar(&PolyAlgebra::new(spec), 2).unwrap();
    let c = &b.coalgebra;
    for i in 0..c.dim() {
        let leaves: Vec<_> = b.realization.trees[b.realization.basis_vectors[i].entries()[0].0]
            .iter()
            .filter_map(|s| match s {
                curved_koszul::operad_core::Sym::Leaf(l) => Some(b.abar[*l as usize].clone()),
                _ => None,
            })
            .collect();
        let pairs_x_xi = leaves.len() == 2 && leaves.iter().all(|m| m.len() == 1) && leaves[0] != leaves[1];
        if !c.curvature[i].is_zero() {
            assert!(pairs_x_xi, "curvature on {leaves:?}");
        }
    }
    assert_eq!(c.curvature.iter().filter(|x| !x.is_zero()).count(), 1);
}

#[test]
fn bar_of_commutative_reduction_is_flat() {
    let b = bar(&PolyAlgebra::quadratic(SymplecticAlgebraSpec::new(2, 1)), 3).unwrap();
    assert!(b.coalgebra.curvature.iter().all(Zero::is_zero));
    assert!(check_curved_axioms(&b.coalgebra).passed());
}

#[test]
fn varkappa_is_a_twisting_morphism() {
    for (n, d) in PAIRS {
        let spec = SymplecticAlgebraSpec::new(n, d);
        let alg = PolyAlgebra::new(spec);
        let (c, real) = koszul_dual_realized(&build_a(spec), 4).unwrap();
        let beta = arity_one_twisting(&c, &real, &|v| monomial(vec![v]));
        assert!(check_twisting_morphism(&c, &alg, &no_differential, &beta).unwrap().passed());
        let zero = vec![MonoComb::new(); c.dim()];
        assert!(!check_twisting_morphism(&c, &alg, &no_differential, &zero).unwrap().passed());
    }
}

#[test]
fn zero_is_twisting_without_curvature() {
    let spec = SymplecticAlgebraSpec::new(2, 1);
    let (mut c, _) = koszul_dual_realized(&build_a(spec), 3).unwrap();
    c.curvature.iter_mut().for_each(|x| *x = q(0));
    let zero = vec![MonoComb::new(); c.dim()];
    assert!(check_twisting_morphism(&c, &PolyAlgebra::quadratic(spec), &no_differential, &zero).unwrap().passed());
}

#[test]
fn adjunction_recovers_varkappa() {
    for (n, d) in PAIRS {
        let spec = SymplecticAlgebraSpec::new(n, d);
        let alg = PolyAlgebra::new(spec);
        let (c, real) = koszul_dual_realized(&build_a(spec), 3).unwrap();
        let beta = arity_one_twisting(&c, &real, &|v| monomial(vec![v]));
        let om = cobar(&c, n, 3).unwrap();
        assert!(cobar_roundtrip(&om, &alg, &beta));
        let b = bar(&alg, 3).unwrap();
        let g = bar_morphism(&c, &real, &b, &beta).unwrap();
        let report = check_bar_morphism(&c, &b, &g, &beta);
        assert!(report.passed(), "({n},{d}): {report:?}");
    }
}

/// `x ↦ Mx`, `ξ ↦ M^{−T}ξ` preserves `{x_i, ξ_j} = δ_ij`; any other scaling does not.
fn symplectic_sample(rng: &mut ChaCha8Rng, keep_pairing: bool) -> impl Fn(usize) -> MonoComb {
    let m: Vec<Scalar> = loop {
        let m: Vec<Scalar> = (0..4).map(|_| q(rng.gen_range(-3..=3))).collect();
        if m[0].clone() * &m[3] - m[1].clone() * &m[2] != q(0) {
            break m;
        }
    };
    let det = m[0].clone() * &m[3] - m[1].clone() * &m[2];
    // M^{−T} for M = [[m0, m1], [m2, m3]].
    let mut n = vec![&m[3] / &det, -&m[2] / &det, -&m[1] / &det, &m[0] / &det];
    if !keep_pairing {
        n.iter_mut().for_each(|x| *x = &*x * q(2));
    }
    move |v: usize| {
        if v < 2 {
            linear(&[(0, m[v].clone()), (1, m[2 + v].clone())])
        } else {
            let k = v - 2;
            linear(&[(2, n[k].clone()), (3, n[2 + k].clone())])
        }
    }
}

#[test]
fn sampled_twisting_morphisms_round_trip() {
    let spec = SymplecticAlgebraSpec::new(2, 2);
    let alg = PolyAlgebra::new(spec);
    let (c, real) = koszul_dual_realized(&build_a(spec), 3).unwrap();
    let om = cobar(&c, 2, 3).unwrap();
    let b = bar(&alg, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut accepted = 0;
    for sample in 0..24 {
        let keep = sample % 4 != 3;
        let beta = arity_one_twisting(&c, &real, &symplectic_sample(&mut rng, keep));
        let mc = check_twisting_morphism(&c, &alg, &no_differential, &beta).unwrap().passed();
        assert_eq!(mc, keep, "sample {sample}");
        assert!(cobar_roundtrip(&om, &alg, &beta));
        let g = bar_morphism(&c, &real, &b, &beta).unwrap();
        let report = check_bar_morphism(&c, &b, &g, &beta);
        assert!(report.recovers_beta);
        // Both bijections see the same equation.
        assert_eq!(report.passed(), mc, "sample {sample}: {report:?}");
        accepted += usize::from(mc);
    }
    assert!(accepted >= 18);
}

#[test]
fn twisting_morphisms_give_chain_maps() {
    let spec = SymplecticAlgebraSpec::new(2, 2);
    let alg = PolyAlgebra::new(spec);
    let (c, real) = koszul_dual_realized(&build_a(spec), 3).unwrap();
    let om = cobar(&c, 2, 3).unwrap();
    let basis = alg.monomials_upto(3);
    let target = FilteredComplex::zero_differential(
        basis.iter().map(Vec::len).collect(),
        basis.iter().map(|m| alg.degree(m)).collect(),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for keep in [true, false] {
        let beta = arity_one_twisting(&c, &real, &symplectic_sample(&mut rng, keep));
        let f: Vec<_> =
            om.extend_morphism(&alg, &|z| beta[z].clone()).iter().map(|m| alg.to_vector(&basis, m)).collect();
        let result = quasi_iso_check(&f, &om.complex, &target, 3);
        assert_eq!(result.is_ok(), keep);
        if let Ok(report) = result {
            assert!(report.passed());
        }
    }
}

#[test]
fn sign_flipped_d2_breaks_the_resolution() {
    let data = koszulity_data(SymplecticAlgebraSpec::new(2, 1), 3, true).unwrap();
    let om = &data.cobar;
    let flipped: Vec<_> = (0..om.d0.len()).map(|i| om.d0[i].add(&om.d1[i]).add(&om.d2[i])).collect();
    let complex = om.complex.with_differential(flipped);
    let err = quasi_iso_check(&data.map, &complex, &data.target, 3).map(|_| ()).map_err(BarCobarError::from);
    assert!(matches!(err, Err(BarCobarError::NotAChainMap { .. })));
}

#[test]
fn identity_is_a_quasi_isomorphism() {
    let data = koszulity_data(SymplecticAlgebraSpec::new(3, 1), 3, true).unwrap();
    let cx = &data.cobar.complex;
    let id: Vec<_> = (0..cx.dim()).map(curved_koszul::qlinalg::SparseVec::unit).collect();
    let report = quasi_iso_check(&id, cx, cx, 3).unwrap();
    assert!(report.passed());
    assert!(report.to_csv().starts_with("weight,degree,dim_source,dim_target,induced_rank,pass"));
}
