use std::collections::BTreeMap;

use curved_koszul::enveloping::lemma::{check_clie_morphism, envelope_complex};
use curved_koszul::enveloping::sampling::{random_clie_qiso, random_nilpotent, with_acyclic_pair, lemma_suite};
use curved_koszul::enveloping::{
    clie_qiso_preservation_test, derived_enveloping_check, enveloping_stratum, rewriting_is_confluent, CLieAlgebra,
    EnvelopingError, EnvelopingInput, PoissonEnvelope,
};
use curved_koszul::graded::{is_odd, monomial, sym_words, MonoComb};
use curved_koszul::qlinalg::{sign_scalar, Scalar, SparseVec};
use curved_koszul::symplectic_poisson::{PolyAlgebra, SymplecticAlgebraSpec};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Weight-`k` graded-symmetric monomials on `even` even and `odd` odd letters.
fn sym_count(even: usize, odd: usize, k: usize) -> usize {
    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
    (0..=k.min(odd))
        .map(|j| binom(odd, j) * if even == 0 { usize::from(k == j) } else { binom(even + k - j - 1, k - j) })
        .sum()
}

fn parity_counts(degrees: &[i64]) -> (usize, usize) {
    let odd = degrees.iter().filter(|d| is_odd(**d)).count();
    (degrees.len() - odd, odd)
}

#[test]
fn derived_envelope_matches_underived_for_two_one() {
    let r = derived_enveloping_check(SymplecticAlgebraSpec::new(2, 1), 4).unwrap();
    assert!(r.passed(), "{}", r.to_csv());
    let unit_row = r.rows.iter().find(|row| row.weight == 0 && row.degree == 0).unwrap();
    assert_eq!((unit_row.dim_source, unit_row.dim_target), (1, 1));
    // Frozen: total dimension per weight bound of A ⊗ S(ΣV).
    let totals: Vec<usize> =
        (0..=4).map(|w| r.rows.iter().filter(|row| row.weight == w).map(|row| row.dim_target).sum()).collect();
    assert_eq!(totals, vec![1, 5, 13, 25, 41]);
}

#[test]
fn derived_envelope_matches_underived_in_other_shapes() {
    for (n, d, w) in [(3, 1, 3), (2, 2, 2), (1, 1, 3)] {
        let r = derived_enveloping_check(SymplecticAlgebraSpec::new(n, d), w).unwrap();
        assert!(r.passed(), "(n, D) = ({n}, {d})\n{}", r.to_csv());
    }
}

#[test]
fn ucom_envelope_is_the_algebra_and_com_drops_the_unit() {
    let alg = PolyAlgebra::quadratic(SymplecticAlgebraSpec::new(2, 1));
    let ucom = enveloping_stratum("ucom", &EnvelopingInput::Commutative(&alg), 4).unwrap();
    let com = enveloping_stratum("com", &EnvelopingInput::Commutative(&alg), 4).unwrap();
    assert_eq!(ucom.dim(), alg.monomials_upto(4).len());
    assert_eq!(com.dim() + 1, ucom.dim());
    assert!(ucom.unit.is_some() && com.unit.is_none());
    assert!(ucom.check_associative() && ucom.check_unital() && com.check_associative());
}

#[test]
fn unknown_operad_tag_is_rejected() {
    let alg = PolyAlgebra::new(SymplecticAlgebraSpec::new(2, 1));
    let err = enveloping_stratum("ass", &EnvelopingInput::Poisson(&alg), 2).unwrap_err();
    assert!(matches!(err, EnvelopingError::UnsupportedOperadTag(_)));
    let err = enveloping_stratum("lie", &EnvelopingInput::Poisson(&alg), 2).unwrap_err();
    assert!(matches!(err, EnvelopingError::UnsupportedOperadTag(_)));
}

#[test]
fn abelian_lie_envelope_is_symmetric_algebra() {
    let degrees = vec![0, 0, 1, 2, 3];
    let lie = CLieAlgebra::abelian(degrees.clone(), None);
    let u = enveloping_stratum("lie", &EnvelopingInput::Lie(&lie), 4).unwrap();
    let (e, o) = parity_counts(&degrees);
    let expected: Vec<usize> = (0..=4).map(|k| sym_count(e, o, k)).collect();
    assert_eq!(u.dims_by_weight(), expected);
    assert!(u.check_associative() && u.check_unital());
}

#[test]
fn clie_envelope_kills_the_unit() {
    // Abelian on two even letters plus a central unit.
    let lie = CLieAlgebra::abelian(vec![0, 1, 0], Some(2));
    let u = enveloping_stratum("lie", &EnvelopingInput::Lie(&lie), 3).unwrap();
    let uc = enveloping_stratum("clie", &EnvelopingInput::Lie(&lie), 3).unwrap();
    let expected: Vec<usize> = (0..=3).map(|k| sym_count(1, 1, k)).collect();
    assert_eq!(uc.dims_by_weight(), expected);
    assert_eq!(u.dims_by_weight(), (0..=3).map(|k| sym_count(2, 1, k)).collect::<Vec<_>>());
    assert!(uc.check_associative() && uc.check_unital());
}

#[test]
fn poisson_envelope_dims_match_a_tensor_symmetric() {
    for (n, d) in [(2, 1), (3, 1), (1, 1), (2, 2)] {
        let spec = SymplecticAlgebraSpec::new(n, d);
        let alg = PolyAlgebra::new(spec);
        let w = if d == 2 { 3 } else { 4 };
        let u = enveloping_stratum("upois_n", &EnvelopingInput::Poisson(&alg), w).unwrap();
        let (ea, oa) = parity_counts(&spec.generator_degrees());
        let xdeg: Vec<i64> = spec.generator_degrees().iter().map(|x| x + n - 1).collect();
        let (ex, ox) = parity_counts(&xdeg);
        let expected: Vec<usize> =
            (0..=w).map(|k| (0..=k).map(|j| sym_count(ea, oa, j) * sym_count(ex, ox, k - j)).sum()).collect();
        assert_eq!(u.dims_by_weight(), expected, "(n, D) = ({n}, {d})");
        assert!(u.check_associative(), "(n, D) = ({n}, {d})");
        assert!(u.check_unital());
    }
}

fn env_from(alg_elem: &MonoComb) -> BTreeMap<(Vec<usize>, Vec<usize>), Scalar> {
    PoissonEnvelope::from_algebra(alg_elem)
}

fn x_of_comb(env: &PoissonEnvelope, f: &MonoComb) -> BTreeMap<(Vec<usize>, Vec<usize>), Scalar> {
    let mut out = BTreeMap::new();
    for (m, c) in f {
        for (k, y) in env.x_of(m) {
            *out.entry(k).or_insert_with(Scalar::zero) += c * y;
        }
    }
    out.retain(|_, x: &mut Scalar| !x.is_zero());
    out
}

fn sub(a: &BTreeMap<(Vec<usize>, Vec<usize>), Scalar>, b: &BTreeMap<(Vec<usize>, Vec<usize>), Scalar>, s: &Scalar) -> BTreeMap<(Vec<usize>, Vec<usize>), Scalar> {
    let mut out = a.clone();
    for (k, y) in b {
        *out.entry(k.clone()).or_insert_with(Scalar::zero) -= s * y;
    }
    out.retain(|_, x| !x.is_zero());
    out
}

#[test]
fn poisson_envelope_satisfies_the_presentation() {
    for n in [1, 2, 3] {
        let spec = SymplecticAlgebraSpec::new(n, 1);
        let alg = PolyAlgebra::new(spec);
        let env = PoissonEnvelope::new(alg.clone());
        assert!(env.x_of(&[]).is_empty(), "X_𝟙 = 0");
        let monos: Vec<Vec<usize>> = (0..=2).flat_map(|k| sym_words(&alg.degrees, k)).collect();
        for f in &monos {
            for g in &monos {
                let (df, dg) = (alg.degree(f), alg.degree(g));
                let (xf, xg) = (x_of_comb(&env, &monomial(f.clone())), x_of_comb(&env, &monomial(g.clone())));
                let (ef, eg) = (env_from(&monomial(f.clone())), env_from(&monomial(g.clone())));
                let (dxf, dxg) = (df + n - 1, dg + n - 1);
                // X_f·g − (−1)^{|X_f||g|} g·X_f = {f, g}.
                let lhs = sub(&env.mul(&xf, &eg), &env.mul(&eg, &xf), &sign_scalar(is_odd(dxf * dg)));
                assert_eq!(lhs, env_from(&alg.bracket(&monomial(f.clone()), &monomial(g.clone()))), "n={n} f={f:?} g={g:?}");
                // X_{fg} = (−1)^{(n−1)|f|} f·X_g + (−1)^{|f||g| + (n−1)|g|} g·X_f.
                let fg = alg.mul(&monomial(f.clone()), &monomial(g.clone()));
                let fxg: BTreeMap<_, _> =
                    env.mul(&ef, &xg).into_iter().map(|(k, x)| (k, x * sign_scalar(is_odd((n - 1) * df)))).collect();
                let rhs = sub(&fxg, &env.mul(&eg, &xf), &-sign_scalar(is_odd(df * dg + (n - 1) * dg)));
                assert_eq!(x_of_comb(&env, &fg), rhs, "n={n} f={f:?} g={g:?}");
                // X_{{f,g}} = (−1)^{(n−1)(|f|+1)}(X_f X_g − (−1)^{|X_f||X_g|} X_g X_f).
                let br = alg.bracket(&monomial(f.clone()), &monomial(g.clone()));
                let comm = sub(&env.mul(&xf, &xg), &env.mul(&xg, &xf), &sign_scalar(is_odd(dxf * dxg)));
                let s = sign_scalar(is_odd((n - 1) * (df + 1)));
                let scaled: BTreeMap<_, _> = comm.into_iter().map(|(k, x)| (k, x * &s)).collect();
                assert_eq!(x_of_comb(&env, &br), scaled, "n={n} f={f:?} g={g:?}");
            }
        }
    }
}

#[test]
fn lemma_quasi_isomorphisms_induce_quasi_isomorphisms_of_envelopes() {
    let mut rng = ChaCha8Rng::seed_from_u64(48);
    for case in 0..50 {
        let (g, h, f) = random_clie_qiso(&mut rng);
        g.validate().unwrap();
        check_clie_morphism(&g, &h, &f).unwrap();
        let report = clie_qiso_preservation_test(&g, &h, &f, 3).unwrap();
        assert!(report.passed(), "case {case}\n{}", report.to_csv());
    }
}

#[test]
fn identity_induces_identity_on_envelopes() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g = random_nilpotent(&mut rng);
    let f: Vec<SparseVec> = (0..g.dim()).map(SparseVec::unit).collect();
    assert!(clie_qiso_preservation_test(&g, &g, &f, 3).unwrap().passed());
}

#[test]
fn boundary_unit_is_rejected_at_the_hypothesis() {
    let g = CLieAlgebra::abelian(vec![0], Some(0));
    let mut h = CLieAlgebra::abelian(vec![0, 1], Some(0));
    h.differential[1] = SparseVec::unit(0);
    h.validate().unwrap();
    let err = clie_qiso_preservation_test(&g, &h, &[SparseVec::unit(0)], 3).unwrap_err();
    assert!(matches!(err, EnvelopingError::HypothesisViolated(_)));
}

#[test]
fn non_quasi_isomorphisms_are_reported() {
    let g = CLieAlgebra::abelian(vec![0, 0], Some(1));
    let h = CLieAlgebra::abelian(vec![0, 0, 0], Some(2));
    let f = vec![SparseVec::unit(0), SparseVec::unit(2)];
    let err = clie_qiso_preservation_test(&g, &h, &f, 2).unwrap_err();
    assert!(matches!(err, EnvelopingError::NotAQuasiIsomorphism));
}

#[test]
fn rewriting_is_confluent_on_random_words() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let g = random_nilpotent(&mut rng);
        let letters = g.dim();
        let words: Vec<Vec<usize>> =
            (0..30).map(|_| (0..rng.gen_range(2..=4)).map(|_| rng.gen_range(0..letters)).collect()).collect();
        assert!(rewriting_is_confluent(&g, false, &words));
        assert!(rewriting_is_confluent(&g, true, &words));
    }
}

#[test]
fn envelope_differential_is_a_derivation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = random_nilpotent(&mut rng);
    let h = with_acyclic_pair(&g, 1);
    let u = enveloping_stratum("clie", &EnvelopingInput::Lie(&h), 3).unwrap();
    assert!(u.check_derivation());
    assert!(envelope_complex(&h, true, 3).complex.check_square_zero().is_ok());
}

#[test]
fn seeded_suite_rejects_every_boundary_control() {
    let r = lemma_suite(3, 10, 3);
    assert!(r.all_passed(), "{:?}", r.failures);
    assert_eq!(r.controls_rejected, 10);
}
