use std::collections::BTreeMap;

use curved_koszul::curved_coalgebra::check_curved_axioms;
use curved_koszul::symplectic_poisson::{
    build_a_koszul_dual, koszulity_data, verify_koszulity, SymplecticAlgebraSpec,
};

const PAIRS: [(i64, usize); 3] = [(2, 1), (3, 1), (2, 2)];

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Monomials of `S(V)` of weight at most `w`, by degree, counted from
/// `x`-exponents (polynomial) and `ξ`-exponents (exterior when `ξ` is odd).
fn cumulative_counts(n: i64, d: usize, w: usize) -> BTreeMap<i64, usize> {
    let xi_odd = (1 - n).rem_euclid(2) == 1;
    let mut out = BTreeMap::new();
    for k in 0..=w {
        for j in 0..=k {
            let xs = if d == 0 { usize::from(k == j) } else { binomial(d + (k - j) - 1, k - j) };
            let xis = if xi_odd { binomial(d, j) } else { binomial(d + j - 1, j) };
            let c = xs * xis;
            if c > 0 {
                *out.entry((1 - n) * j as i64).or_insert(0) += c;
            }
        }
    }
    out
}

#[test]
fn dual_coalgebra_satisfies_curved_axioms_to_weight_five() {
    for (n, d) in PAIRS {
        let dual = build_a_koszul_dual(SymplecticAlgebraSpec::new(n, d), 5);
        let report = check_curved_axioms(&dual);
        assert!(report.passed(), "({n},{d}): {:?}", report.violations);
        assert_eq!(report.checked, dual.dim());
    }
}

#[test]
fn dual_coalgebra_curvature_pairs_partners() {
    let spec = SymplecticAlgebraSpec::new(2, 2);
    let dual = build_a_koszul_dual(spec, 2);
    let nonzero: Vec<&str> = (0..dual.dim())
        .filter(|&i| dual.curvature[i] != curved_koszul::qlinalg::q(0))
        .map(|i| dual.labels[i].as_str())
        .collect();
    assert_eq!(nonzero.len(), 2);
    assert!(dual.curvature.iter().all(|c| *c == curved_koszul::qlinalg::q(0) || *c == curved_koszul::qlinalg::q(-1)));
}

#[test]
fn cobar_squares_to_zero_summand_by_summand() {
    for (n, d) in PAIRS {
        let data = koszulity_data(SymplecticAlgebraSpec::new(n, d), 5, true).unwrap();
        let report = data.cobar.check_summands();
        assert!(report.passed(), "({n},{d}): {:?}", report.components);
        assert!(data.cobar.complex.check_square_zero().is_ok());
    }
}

#[test]
fn curvature_summand_is_active() {
    // Without d₀ the cobar differential would not hit the unit at all.
    let data = koszulity_data(SymplecticAlgebraSpec::new(2, 1), 2, true).unwrap();
    assert!(data.cobar.d0.iter().any(|v| !v.is_zero()));
    assert!(data.cobar.d2.iter().any(|v| !v.is_zero()));
}

#[test]
fn cobar_resolves_symplectic_algebra_to_weight_five() {
    for (n, d) in PAIRS {
        let report = verify_koszulity(SymplecticAlgebraSpec::new(n, d), 5).unwrap();
        assert!(report.passed(), "({n},{d})");
        for w in 0..=5 {
            let oracle = cumulative_counts(n, d, w);
            for row in report.curved.rows.iter().filter(|r| r.weight == w) {
                let expected = oracle.get(&row.degree).copied().unwrap_or(0);
                assert_eq!(row.dim_source, expected, "({n},{d}) weight {w} degree {}", row.degree);
                assert_eq!(row.induced_rank, expected);
            }
            let total: usize = report.curved.rows.iter().filter(|r| r.weight == w).map(|r| r.dim_source).sum();
            assert_eq!(total, oracle.values().sum::<usize>(), "({n},{d}) weight {w}");
        }
    }
}

#[test]
fn frozen_betti_totals_for_a21() {
    let report = verify_koszulity(SymplecticAlgebraSpec::new(2, 1), 5).unwrap();
    let totals: Vec<usize> =
        (0..=5).map(|w| report.curved.rows.iter().filter(|r| r.weight == w).map(|r| r.dim_source).sum()).collect();
    assert_eq!(totals, vec![1, 3, 5, 7, 9, 11]);
}
