//! One PASS/FAIL line per acceptance criterion, with wall time against its budget.
//!
//! Runs without the libtest harness so that the lines are printed as they are
//! decided. The process fails on any failure that is not documented in
//! `DOCUMENTED_FAILURES`, and on any documented failure whose witness changes.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use curved_koszul::bar_cobar::bar::bar;
use curved_koszul::bar_cobar::twisting::{
    arity_one_twisting, bar_morphism, check_bar_morphism, check_twisting_morphism, cobar_roundtrip,
};
use curved_koszul::bar_cobar::cobar;
use curved_koszul::curved_coalgebra::{check_curved_axioms, koszul_dual_realized};
use curved_koszul::enveloping::derived_enveloping_check;
use curved_koszul::enveloping::sampling::lemma_suite;
use curved_koszul::facthom::{
    de_rham_identify, derived_vs_underived_check, facthom_homology, unital_ce_complex, FacthomError, PDModel,
};
use curved_koszul::graded::{is_odd, monomial, MonoComb};
use curved_koszul::koszul_dual::{check_maurer_cartan_kappa, koszul_complex_strand};
use curved_koszul::operad_core::{com, lie_n, operad_stratum, pois_n};
use curved_koszul::qlinalg::{q, Scalar};
use curved_koszul::symplectic_poisson::{
    build_a, build_a_koszul_dual, koszulity_data, verify_koszulity, PolyAlgebra, SymplecticAlgebraSpec,
};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PAIRS: [(i64, usize); 3] = [(2, 1), (3, 1), (2, 2)];

/// Criteria known to fail, each with the witnesses its failure must contain.
const DOCUMENTED_FAILURES: &[(usize, &[&str])] = &[(9, &["S5 at n = 2: d² ≠ 0", "S7 at n = 2: d² ≠ 0"])];

struct Verdict {
    pass: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Verdict {
    Verdict { pass: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Verdict {
    Verdict { pass: false, detail: detail.into() }
}

fn model(name: &str) -> PDModel {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models").join(format!("{name}.json"));
    PDModel::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Set partitions of `k` points, each block of size `s` carrying `block(s)` choices.
fn partition_count(k: usize, block: impl Fn(usize) -> usize) -> usize {
    let mut f = vec![0; k + 1];
    f[0] = 1;
    for m in 1..=k {
        f[m] = (1..=m).map(|s| binom(m - 1, s - 1) * block(s) * f[m - s]).sum();
    }
    f[k]
}

/// Weight-`k` graded-symmetric monomials on `even` even and `odd` odd letters.
fn sym_count(even: usize, odd: usize, k: usize) -> usize {
    (0..=k.min(odd)).map(|j| binom(odd, j) * if even == 0 { usize::from(k == j) } else { binom(even + k - j - 1, k - j) }).sum()
}

/// Monomials of `A_{n;D}` of weight `≤ w`, by degree.
fn algebra_counts(n: i64, d: usize, w: usize) -> BTreeMap<i64, usize> {
    let xi_odd = is_odd(1 - n);
    let mut out = BTreeMap::new();
    for k in 0..=w {
        for j in 0..=k {
            let xs = binom(d + (k - j) - 1, k - j);
            let xis = if xi_odd { binom(d, j) } else { binom(d + j - 1, j) };
            if xs * xis > 0 {
                *out.entry((1 - n) * j as i64).or_insert(0) += xs * xis;
            }
        }
    }
    out
}

fn operad_dimensions() -> Verdict {
    let mut checked = 0;
    for k in 1..=5 {
        // Pois = Com ∘ Lie: a Lie word on each block of a set partition.
        let lie = factorial(k - 1);
        let pois = partition_count(k, |s| factorial(s - 1));
        if operad_stratum(&lie_n(1), k, 6).unwrap().dim() != lie {
            return fail(format!("Lie({k}) ≠ {lie}"));
        }
        for n in [1, 2, 3] {
            let dim = operad_stratum(&pois_n(n), k, 6).unwrap().dim();
            if dim != pois || pois != factorial(k) {
                return fail(format!("Pois_{n}({k}) = {dim}, oracle {pois}"));
            }
            checked += 1;
        }
    }
    pass(format!("Lie(k) = (k−1)!, Pois_n(k) = k! for k ≤ 5, n ∈ {{1,2,3}} ({checked} strata)"))
}

fn operadic_koszul_sanity() -> Verdict {
    for p in [com(), lie_n(1), pois_n(2)] {
        if let Err(e) = check_maurer_cartan_kappa(&p) {
            return fail(format!("{}: {e}", p.name));
        }
        for k in 2..=4 {
            let strand = koszul_complex_strand(&p, k).unwrap();
            if strand.squares_to_zero().is_err() {
                return fail(format!("{} arity {k}: d² ≠ 0", p.name));
            }
            let h = strand.homology().unwrap();
            if h.iter().any(|&x| x != 0) {
                return fail(format!("{} arity {k}: homology {h:?}", p.name));
            }
        }
    }
    pass("κ⋆κ = 0 and strands acyclic in arities 2..4 for Com, Lie, Pois_2")
}

fn curved_axioms() -> Verdict {
    let mut checked = 0;
    for (n, d) in PAIRS {
        let spec = SymplecticAlgebraSpec::new(n, d);
        let dual = check_curved_axioms(&build_a_koszul_dual(spec, 5));
        let b = bar(&PolyAlgebra::new(spec), 4).unwrap();
        let bar_report = check_curved_axioms(&b.coalgebra);
        for (what, r) in [("dual", &dual), ("bar", &bar_report)] {
            if let Some(v) = r.violations.first() {
                return fail(format!("({n},{d}) {what}: {} on {} (weight {}): {}", v.identity, v.label, v.weight, v.residue));
            }
        }
        checked += dual.checked + bar_report.checked;
    }
    pass(format!("A¡ to weight 5 and B_κA to weight 4, {checked} basis elements"))
}

fn cobar_square_zero() -> Verdict {
    let mut size = 0;
    for (n, d) in PAIRS {
        let data = koszulity_data(SymplecticAlgebraSpec::new(n, d), 5, true).unwrap();
        let report = data.cobar.check_summands();
        if !report.passed() {
            return fail(format!("({n},{d}): {:?}", report.components));
        }
        if let Err(w) = data.cobar.complex.check_square_zero() {
            return fail(format!("({n},{d}) basis {} weight {}: {}", w.basis_index, w.weight, w.residue));
        }
        size += data.cobar.complex.differential.len();
    }
    pass(format!("five weight components vanish to weight 5 ({size} basis elements)"))
}

fn koszulity() -> Verdict {
    for (n, d) in PAIRS {
        let report = verify_koszulity(SymplecticAlgebraSpec::new(n, d), 5).unwrap();
        if !report.passed() {
            return fail(format!("({n},{d}):\n{}", report.curved.to_csv()));
        }
        for w in 0..=5 {
            let oracle = algebra_counts(n, d, w);
            for row in report.curved.rows.iter().filter(|r| r.weight == w) {
                let expected = oracle.get(&row.degree).copied().unwrap_or(0);
                if row.dim_source != expected || row.induced_rank != expected {
                    return fail(format!("({n},{d}) weight {w} degree {}: H = {}, A = {expected}", row.degree, row.dim_source));
                }
            }
        }
    }
    pass("H(Ω_κA¡) ≅ A_{n;D} by monomial count, f_ϰ of full rank, weights ≤ 5")
}

fn linear(pairs: &[(usize, Scalar)]) -> MonoComb {
    pairs.iter().filter(|(_, x)| !x.is_zero()).map(|(v, x)| (vec![*v], x.clone())).collect()
}

/// `x ↦ Mx`, `ξ ↦ M^{−T}ξ` on two symplectic pairs, optionally spoiled by a factor 2.
fn symplectic_sample(rng: &mut ChaCha8Rng, keep_pairing: bool) -> impl Fn(usize) -> MonoComb {
    let m: Vec<Scalar> = loop {
        let m: Vec<Scalar> = (0..4).map(|_| q(rng.gen_range(-3..=3))).collect();
        if !(m[0].clone() * &m[3] - m[1].clone() * &m[2]).is_zero() {
            break m;
        }
    };
    let det = m[0].clone() * &m[3] - m[1].clone() * &m[2];
    let mut inv_t = vec![&m[3] / &det, -&m[2] / &det, -&m[1] / &det, &m[0] / &det];
    if !keep_pairing {
        inv_t.iter_mut().for_each(|x| *x = &*x * q(2));
    }
    move |v: usize| {
        if v < 2 {
            linear(&[(0, m[v].clone()), (1, m[2 + v].clone())])
        } else {
            linear(&[(2, inv_t[v - 2].clone()), (3, inv_t[v].clone())])
        }
    }
}

fn twisting_and_adjunction() -> Verdict {
    let none = |_: &MonoComb| MonoComb::new();
    for (n, d) in PAIRS {
        let spec = SymplecticAlgebraSpec::new(n, d);
        let alg = PolyAlgebra::new(spec);
        let (c, real) = koszul_dual_realized(&build_a(spec), 3).unwrap();
        let varkappa = arity_one_twisting(&c, &real, &|v| monomial(vec![v]));
        if !check_twisting_morphism(&c, &alg, &none, &varkappa).unwrap().passed() {
            return fail(format!("({n},{d}): ϰ is not twisting"));
        }
        let b = bar(&alg, 3).unwrap();
        let report = check_bar_morphism(&c, &b, &bar_morphism(&c, &real, &b, &varkappa).unwrap(), &varkappa);
        if !cobar_roundtrip(&cobar(&c, n, 3).unwrap(), &alg, &varkappa) || !report.passed() {
            return fail(format!("({n},{d}): adjunction does not recover ϰ"));
        }
    }
    let spec = SymplecticAlgebraSpec::new(2, 2);
    let alg = PolyAlgebra::new(spec);
    let (c, real) = koszul_dual_realized(&build_a(spec), 3).unwrap();
    let om = cobar(&c, 2, 3).unwrap();
    let b = bar(&alg, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(48);
    let (mut solutions, mut rejected) = (0, 0);
    for sample in 0..32 {
        let keep = sample % 4 != 3;
        let beta = arity_one_twisting(&c, &real, &symplectic_sample(&mut rng, keep));
        let mc = check_twisting_morphism(&c, &alg, &none, &beta).unwrap().passed();
        let report = check_bar_morphism(&c, &b, &bar_morphism(&c, &real, &b, &beta).unwrap(), &beta);
        if mc != keep || !cobar_roundtrip(&om, &alg, &beta) || !report.recovers_beta || report.passed() != mc {
            return fail(format!("sample {sample}: MC {mc}, expected {keep}"));
        }
        if mc {
            solutions += 1;
        } else {
            rejected += 1;
        }
    }
    if solutions < 20 {
        return fail(format!("only {solutions} sampled solutions"));
    }
    pass(format!("ϰ twisting for all pairs; β recovered on ϰ and {solutions} sampled solutions; {rejected} non-solutions rejected"))
}

fn derived_envelope() -> Verdict {
    let r = derived_enveloping_check(SymplecticAlgebraSpec::new(2, 1), 4).unwrap();
    if !r.passed() {
        return fail(r.to_csv());
    }
    // A_{2;1} has x even and ξ odd; in S(ΣV) the parities swap.
    for w in 0..=4 {
        let expected: usize = (0..=w).flat_map(|k| (0..=k).map(move |i| sym_count(1, 1, i) * sym_count(1, 1, k - i))).sum();
        let got: usize = r.rows.iter().filter(|row| row.weight == w).map(|row| row.dim_source).sum();
        if got != expected {
            return fail(format!("weight ≤ {w}: Betti total {got}, A ⊗ S(ΣV) has {expected}"));
        }
    }
    pass("Betti table of U(Ω_κA¡) equals A ⊗ S(ΣV) per weight ≤ 4 for (2,1)")
}

fn lemma_property_suite() -> Verdict {
    let r = lemma_suite(48, 50, 3);
    if !r.all_passed() || r.controls_rejected != r.controls {
        return fail(format!("{} of {} passed, {} of {} controls rejected: {:?}", r.passed, r.cases, r.controls_rejected, r.controls, r.failures.first()));
    }
    pass(format!("{} of {} random quasi-isomorphisms, {} boundary-unit controls rejected", r.passed, r.cases, r.controls_rejected))
}

fn factorization_homology() -> Verdict {
    let spec = SymplecticAlgebraSpec::new(2, 1);
    let mut lines = Vec::new();
    let mut ok = true;
    for name in ["s4", "s5", "s7"] {
        let label = name.to_uppercase();
        match facthom_homology(&model(name), spec, 8) {
            Ok(r) if r.total == 1 && r.representative_certified => {
                lines.push(format!("{label} at n = 2: total 1, certified to Euler weight {}", r.certified_euler.unwrap()))
            }
            Ok(r) => {
                ok = false;
                lines.push(format!("{label} at n = 2: total {}", r.total));
            }
            Err(FacthomError::DifferentialSquareNonzero(w)) => {
                ok = false;
                lines.push(format!("{label} at n = 2: d² ≠ 0 {w}"));
            }
            Err(e) => {
                ok = false;
                lines.push(format!("{label} at n = 2: {e}"));
            }
        }
    }
    let ce = unital_ce_complex(&model("s4"), spec, 8).unwrap();
    let dr = de_rham_identify(&ce).unwrap();
    match dr.check_homotopy(8).and_then(|count| dr.check_chain_map(&ce).map(|_| count)) {
        Ok(count) => lines.push(format!("hd + dh = (p+q)·id on {count} forms")),
        Err(e) => {
            ok = false;
            lines.push(format!("de Rham: {e}"));
        }
    }
    // With the manifold dimension equal to n the grading is consistent for every sphere.
    for (name, n) in [("s4", 4), ("s5", 5), ("s7", 7)] {
        let r = facthom_homology(&model(name), SymplecticAlgebraSpec::new(n, 1), 8).unwrap();
        lines.push(format!("{} at n = {n}: total {}", name.to_uppercase(), r.total));
    }
    Verdict { pass: ok, detail: lines.join("; ") }
}

fn derived_comparison() -> Verdict {
    match derived_vs_underived_check(&model("s4"), SymplecticAlgebraSpec::new(2, 1), 4, 4) {
        Ok(r) if r.passed() => {
            pass(format!("chain map and quasi-isomorphism on {} strata ({} → {} words)", r.betti.rows.len(), r.source_dim, r.target_dim))
        }
        Ok(r) => fail(r.betti.to_csv()),
        Err(e) => fail(e.to_string()),
    }
}

fn main() {
    type Check = fn() -> Verdict;
    let criteria: [(usize, &str, u64, Check); 10] = [
        (1, "operad dimensions", 60, operad_dimensions),
        (2, "operadic Koszul sanity", 60, operadic_koszul_sanity),
        (3, "curved coalgebra axioms", 120, curved_axioms),
        (4, "cobar differential squares to zero", 300, cobar_square_zero),
        (5, "Koszulity at truncation", 600, koszulity),
        (6, "Maurer-Cartan and adjunction", 60, twisting_and_adjunction),
        (7, "derived enveloping algebra", 300, derived_envelope),
        (8, "quasi-isomorphism property suite", 120, lemma_property_suite),
        (9, "factorization homology is one-dimensional", 300, factorization_homology),
        (10, "derived versus underived projection", 600, derived_comparison),
    ];
    let mut unexpected = Vec::new();
    for (id, name, budget, check) in criteria {
        let start = Instant::now();
        let mut verdict = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            fail(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        if elapsed > Duration::from_secs(budget) {
            verdict.pass = false;
            verdict.detail.push_str(&format!("; over the {budget}s budget"));
        }
        let status = if verdict.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2}: {status} {name} [{:.1}s / {budget}s] {}", elapsed.as_secs_f64(), verdict.detail);
        if !verdict.pass {
            let documented = DOCUMENTED_FAILURES.iter().any(|(c, ws)| *c == id && ws.iter().all(|w| verdict.detail.contains(w)));
            if documented {
                println!("              documented: the grading is inconsistent when dim M − n is odd; see the README");
            } else {
                unexpected.push(id);
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("undocumented failures: {unexpected:?}");
        std::process::exit(1);
    }
}
