//! Random cLie quasi-isomorphisms with non-boundary units, for property runs.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::lemma::clie_qiso_preservation_test;
use super::pbw::CLieAlgebra;
use super::EnvelopingError;
use crate::bar_cobar::complex::apply;
use crate::graded::is_odd;
use crate::qlinalg::{q, Scalar, SparseVec};

/// `V₁ ⊕ V₂ ⊕ 𝕜𝟙` with `[V₁, V₁] ⊆ V₂` random and everything else central.
pub fn random_nilpotent(rng: &mut impl Rng) -> CLieAlgebra {
    let n1 = rng.gen_range(1..=3);
    let n2 = rng.gen_range(0..=2);
    let mut degrees: Vec<i64> = (0..n1).map(|_| rng.gen_range(0..=1)).collect();
    degrees.extend((0..n2).map(|_| rng.gen_range(0..=2)));
    degrees.push(0);
    let unit = degrees.len() - 1;
    let mut brackets = BTreeMap::new();
    for i in 0..n1 {
        for j in i..n1 {
            if i == j && !is_odd(degrees[i]) {
                continue;
            }
            let target = degrees[i] + degrees[j];
            let v = SparseVec::from_pairs(
                (n1..degrees.len())
                    .filter(|&k| degrees[k] == target)
                    .map(|k| (k, q(rng.gen_range(-2..=2))))
                    .filter(|(_, x)| !x.is_zero()),
            );
            if !v.is_zero() {
                brackets.insert((i, j), v);
            }
        }
    }
    let dim = degrees.len();
    CLieAlgebra { degrees, brackets, differential: vec![SparseVec::new(); dim], unit: Some(unit) }
}

/// Appends a central acyclic pair `a ↦ b` with `|a| = k + 1`.
pub fn with_acyclic_pair(g: &CLieAlgebra, k: i64) -> CLieAlgebra {
    let mut h = g.clone();
    let b = h.dim() + 1;
    h.degrees.extend([k + 1, k]);
    h.differential.push(SparseVec::unit(b));
    h.differential.push(SparseVec::new());
    h
}

/// Rewrites `h` in the basis `e'_p = e_p + c e_q` (same degree) and carries `f` along.
pub fn shear(h: &CLieAlgebra, f: &[SparseVec], p: usize, qi: usize, c: &Scalar) -> (CLieAlgebra, Vec<SparseVec>) {
    let dim = h.dim();
    let to_old: Vec<SparseVec> =
        (0..dim).map(|i| if i == p { SparseVec::unit(p).axpy(c, &SparseVec::unit(qi)) } else { SparseVec::unit(i) }).collect();
    // e_p = e'_p − c e'_q, the others unchanged.
    let to_new: Vec<SparseVec> =
        (0..dim).map(|i| if i == p { SparseVec::unit(p).axpy(&-c.clone(), &SparseVec::unit(qi)) } else { SparseVec::unit(i) }).collect();
    let mut brackets = BTreeMap::new();
    for i in 0..dim {
        for j in i..dim {
            let b = apply(&to_new, &h.bracket_vec(&to_old[i], &to_old[j]));
            if !b.is_zero() {
                brackets.insert((i, j), b);
            }
        }
    }
    let differential = (0..dim).map(|i| apply(&to_new, &h.apply_d(&to_old[i]))).collect();
    let nh = CLieAlgebra { degrees: h.degrees.clone(), brackets, differential, unit: h.unit };
    (nh, f.iter().map(|v| apply(&to_new, v)).collect())
}

/// `f : 𝔤 → 𝔥` where `𝔥` is `𝔤` plus an acyclic pair, seen through random shears.
pub fn random_clie_qiso(rng: &mut impl Rng) -> (CLieAlgebra, CLieAlgebra, Vec<SparseVec>) {
    let g = random_nilpotent(rng);
    let k = rng.gen_range(0..=2);
    let mut h = with_acyclic_pair(&g, k);
    let mut f: Vec<SparseVec> = (0..g.dim()).map(SparseVec::unit).collect();
    for _ in 0..3 {
        let p = rng.gen_range(0..h.dim());
        let qi = rng.gen_range(0..h.dim());
        if p == qi || Some(p) == h.unit || Some(qi) == h.unit || h.degrees[p] != h.degrees[qi] {
            continue;
        }
        let c = q(rng.gen_range(1..=3));
        (h, f) = shear(&h, &f, p, qi, &c);
    }
    (g, h, f)
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaSuiteReport {
    pub seed: u64,
    pub cases: usize,
    pub passed: usize,
    /// Boundary-unit controls rejected at the hypothesis check.
    pub controls_rejected: usize,
    pub controls: usize,
    pub failures: Vec<String>,
}

impl LemmaSuiteReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.cases && self.controls_rejected == self.controls
    }
}

/// Runs `cases` random quasi-isomorphisms and as many boundary-unit controls.
pub fn lemma_suite(seed: u64, cases: usize, max_len: usize) -> LemmaSuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = LemmaSuiteReport { seed, cases, passed: 0, controls_rejected: 0, controls: cases, failures: Vec::new() };
    for case in 0..cases {
        let (g, h, f) = random_clie_qiso(&mut rng);
        match clie_qiso_preservation_test(&g, &h, &f, max_len) {
            Ok(r) if r.passed() => report.passed += 1,
            Ok(r) => report.failures.push(format!("case {case}: {}", r.to_csv())),
            Err(e) => report.failures.push(format!("case {case}: {e}")),
        }
        // Control: make the unit of 𝔥 a boundary through a fresh odd letter.
        let mut bad = h.clone();
        let u = bad.unit.expect("sampled algebras are unital");
        bad.degrees.push(1);
        bad.differential.push(SparseVec::unit(u));
        if matches!(clie_qiso_preservation_test(&g, &bad, &f, max_len), Err(EnvelopingError::HypothesisViolated(_))) {
            report.controls_rejected += 1;
        } else {
            report.failures.push(format!("control {case} was not rejected"));
        }
    }
    report
}
