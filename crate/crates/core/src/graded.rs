//! Graded generators, strata, suspension and the Koszul sign rule.

use serde::{Deserialize, Serialize};

use num_traits::{One, Zero};

use crate::qlinalg::{sign_scalar, Scalar};

#[inline]
pub fn is_odd(d: i64) -> bool {
    d.rem_euclid(2) == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedGenerator {
    pub id: String,
    pub degree: i64,
}

impl GradedGenerator {
    pub fn new(id: impl Into<String>, degree: i64) -> Self {
        GradedGenerator { id: id.into(), degree }
    }
}

/// A finite based graded piece labeled by weight and arity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub weight: i64,
    pub arity: i64,
    pub basis: Vec<GradedGenerator>,
}

impl Stratum {
    pub fn new(weight: i64, arity: i64, basis: Vec<GradedGenerator>) -> Self {
        Stratum { weight, arity, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.basis.iter().map(|g| g.degree).collect()
    }

    /// Number of basis elements in each degree, sorted by degree.
    pub fn degree_profile(&self) -> Vec<(i64, usize)> {
        let mut m = std::collections::BTreeMap::new();
        for g in &self.basis {
            *m.entry(g.degree).or_insert(0usize) += 1;
        }
        m.into_iter().collect()
    }
}

/// Shifts every basis degree by `k`.
pub fn suspend(s: &Stratum, k: i64) -> Stratum {
    Stratum {
        weight: s.weight,
        arity: s.arity,
        basis: s
            .basis
            .iter()
            .map(|g| GradedGenerator { id: g.id.clone(), degree: g.degree + k })
            .collect(),
    }
}

/// Parity of the Koszul sign for moving element `i` to position `perm[i]`.
///
/// Each inverted pair of elements with degrees `p`, `q` contributes `(-1)^{pq}`.
pub fn koszul_parity(perm: &[usize], degrees: &[i64]) -> bool {
    assert_eq!(perm.len(), degrees.len(), "permutation and degree list differ in length");
    let mut neg = false;
    for i in 0..perm.len() {
        if !is_odd(degrees[i]) {
            continue;
        }
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] && is_odd(degrees[j]) {
                neg = !neg;
            }
        }
    }
    neg
}

pub fn koszul_sign(perm: &[usize], degrees: &[i64]) -> Scalar {
    sign_scalar(koszul_parity(perm, degrees))
}

/// Parity of the sign from reordering a sequence of homogeneous items so that
/// the item at old position `order[k]` ends up at new position `k`.
pub fn reorder_parity(order: &[usize], degrees: &[i64]) -> bool {
    let mut perm = vec![0; order.len()];
    for (k, &old) in order.iter().enumerate() {
        perm[old] = k;
    }
    koszul_parity(&perm, degrees)
}

/// Canonical graded-symmetric word: generator indices in non-decreasing order
/// together with the sign picked up while sorting.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymWord {
    pub gens: Vec<usize>,
    pub negative: bool,
}

impl SymWord {
    pub fn sign(&self) -> Scalar {
        sign_scalar(self.negative)
    }
}

/// Sorts a word of generator indices. Returns `None` when an odd generator repeats.
pub fn sym_canonicalize(word: &[usize], degrees: &[i64]) -> Option<SymWord> {
    let mut order: Vec<usize> = (0..word.len()).collect();
    order.sort_by_key(|&i| word[i]);
    let gens: Vec<usize> = order.iter().map(|&i| word[i]).collect();
    for w in gens.windows(2) {
        if w[0] == w[1] && is_odd(degrees[w[0]]) {
            return None;
        }
    }
    let degs: Vec<i64> = word.iter().map(|&g| degrees[g]).collect();
    Some(SymWord { gens, negative: reorder_parity(&order, &degs) })
}

/// All canonical symmetric words of length `len` in generators `0..degrees.len()`.
pub fn sym_words(degrees: &[i64], len: usize) -> Vec<Vec<usize>> {
    fn rec(degrees: &[i64], start: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for g in start..degrees.len() {
            if cur.last() == Some(&g) && is_odd(degrees[g]) {
                continue;
            }
            cur.push(g);
            rec(degrees, g, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(degrees, 0, len, &mut Vec::new(), &mut out);
    out
}

/// Ordered splittings of a canonical word into two nonempty subwords.
///
/// Each entry is `(left, right, negative)` where `negative` is the Koszul sign
/// of the unshuffle. Repeated generators yield repeated entries, as the
/// splitting ranges over positions.
pub fn unshuffles(word: &[usize], degrees: &[i64]) -> Vec<(Vec<usize>, Vec<usize>, bool)> {
    let k = word.len();
    let degs: Vec<i64> = word.iter().map(|&g| degrees[g]).collect();
    let mut out = Vec::new();
    for mask in 1u32..((1u32 << k) - 1) {
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut order = Vec::with_capacity(k);
        for i in 0..k {
            if mask & (1 << i) != 0 {
                left.push(word[i]);
                order.push(i);
            }
        }
        for i in 0..k {
            if mask & (1 << i) == 0 {
                right.push(word[i]);
                order.push(i);
            }
        }
        out.push((left, right, reorder_parity(&order, &degs)));
    }
    out
}

/// Total degree of a word.
pub fn word_degree(word: &[usize], degrees: &[i64]) -> i64 {
    word.iter().map(|&g| degrees[g]).sum()
}

/// Linear combination of canonical graded-symmetric monomials.
pub type MonoComb = std::collections::BTreeMap<Vec<usize>, Scalar>;

pub fn comb_add(into: &mut MonoComb, m: Vec<usize>, c: Scalar) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match into.entry(m) {
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
        Entry::Vacant(v) => {
            v.insert(c);
        }
    }
}

pub fn comb_axpy(into: &mut MonoComb, c: &Scalar, x: &MonoComb) {
    for (m, v) in x {
        comb_add(into, m.clone(), c * v);
    }
}

pub fn comb_scale(x: &MonoComb, c: &Scalar) -> MonoComb {
    let mut out = MonoComb::new();
    comb_axpy(&mut out, c, x);
    out
}

pub fn monomial(m: Vec<usize>) -> MonoComb {
    std::iter::once((m, Scalar::one())).collect()
}

/// Product of two monomials in the free graded-commutative algebra.
pub fn mono_mul(a: &[usize], b: &[usize], degrees: &[i64]) -> Option<SymWord> {
    let word: Vec<usize> = a.iter().chain(b).copied().collect();
    sym_canonicalize(&word, degrees)
}

pub fn comb_mul(a: &MonoComb, b: &MonoComb, degrees: &[i64]) -> MonoComb {
    let mut out = MonoComb::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            if let Some(w) = mono_mul(ma, mb, degrees) {
                let p = ca * cb;
                comb_add(&mut out, w.gens, if w.negative { -p } else { p });
            }
        }
    }
    out
}

/// Extends a bracket on generators to graded-symmetric monomials by the
/// Leibniz rule of a degree `n − 1` Poisson bracket:
///
/// `{c, ab} = {c,a}b + (−1)^{(n−1+|c|)|a|} a{c,b}` and
/// `{a, b} = (−1)^{n + |a||b|} {b, a}`.
pub fn leibniz_bracket(
    m1: &[usize],
    m2: &[usize],
    degrees: &[i64],
    n: i64,
    gen_bracket: &mut dyn FnMut(usize, usize) -> MonoComb,
) -> MonoComb {
    let mut out = MonoComb::new();
    if m1.is_empty() || m2.is_empty() {
        return out;
    }
    let deg = |m: &[usize]| word_degree(m, degrees);
    if m1.len() == 1 {
        let a = m1[0];
        let mut prefix_deg = 0;
        for j in 0..m2.len() {
            let neg = is_odd(n - 1 + degrees[a]) && is_odd(prefix_deg);
            let inner = gen_bracket(a, m2[j]);
            let left = comb_scale(&monomial(m2[..j].to_vec()), &sign_scalar(neg));
            let t = comb_mul(&comb_mul(&left, &inner, degrees), &monomial(m2[j + 1..].to_vec()), degrees);
            comb_axpy(&mut out, &Scalar::one(), &t);
            prefix_deg += degrees[m2[j]];
        }
        return out;
    }
    // m1 = a · rest: swap to {m2, m1} and use the Leibniz rule in the second slot.
    let a = [m1[0]];
    let rest = &m1[1..];
    let sym = |x: &[usize], y: &[usize]| sign_scalar(is_odd(n + deg(x) * deg(y)));
    let m2a = comb_scale(&leibniz_bracket(&a, m2, degrees, n, gen_bracket), &sym(&a, m2));
    let m2rest = comb_scale(&leibniz_bracket(rest, m2, degrees, n, gen_bracket), &sym(rest, m2));
    let mut inner = comb_mul(&m2a, &monomial(rest.to_vec()), degrees);
    let s = sign_scalar(is_odd((n - 1 + deg(m2)) * deg(&a)));
    comb_axpy(&mut inner, &s, &comb_mul(&monomial(a.to_vec()), &m2rest, degrees));
    comb_axpy(&mut out, &sym(m2, m1), &inner);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::q;

    #[test]
    fn sign_examples() {
        assert_eq!(koszul_sign(&[0, 1, 2], &[1, 1, 1]), q(1));
        assert_eq!(koszul_sign(&[1, 0], &[1, 1]), q(-1));
        // The 3-cycle sending 1 -> 2 -> 3 -> 1.
        assert_eq!(koszul_sign(&[1, 2, 0], &[1, 1, 0]), q(1));
    }

    #[test]
    fn canonicalize_examples() {
        // generator 0 = x (degree 0), generator 1 = xi (degree -1)
        let degs = [0, -1];
        let w = sym_canonicalize(&[1, 0], &degs).unwrap();
        assert_eq!(w.gens, vec![0, 1]);
        assert!(!w.negative);
        assert!(sym_canonicalize(&[1, 1], &degs).is_none());
        let w = sym_canonicalize(&[0, 1], &degs).unwrap();
        assert_eq!((w.gens, w.negative), (vec![0, 1], false));
        // two odd generators anticommute
        let w = sym_canonicalize(&[1, 0], &[1, 1]).unwrap();
        assert!(w.negative);
    }

    #[test]
    fn suspension_roundtrip() {
        let s = Stratum::new(1, 1, vec![GradedGenerator::new("x", 0)]);
        assert_eq!(suspend(&s, 0), s);
        assert_eq!(suspend(&s, 1).basis[0].degree, 1);
        assert_eq!(suspend(&suspend(&s, 3), -3), s);
    }

    #[test]
    fn word_counts() {
        // two even, one odd generator
        let degs = [0, 2, 1];
        assert_eq!(sym_words(&degs, 2).len(), 5);
        assert_eq!(unshuffles(&[0, 1, 2], &degs).len(), 6);
    }
}
