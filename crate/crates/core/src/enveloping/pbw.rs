//! Finite-dimensional dg Lie algebras with a central unit, and PBW normal
//! forms in their enveloping algebras.

use std::collections::{BTreeMap, HashMap};



use super::EnvelopingError;
use crate::graded::{comb_add, comb_axpy, is_odd, MonoComb};
use crate::qlinalg::{qf, sign_scalar, Scalar, SparseVec};

/// Linear combinations of words in the symbols `X_i` (same shape as
/// commutative monomial combinations, but words are ordered).
pub type WordComb = MonoComb;

/// A dg Lie algebra on a homogeneous basis, with an optional distinguished
/// central cycle `𝟙` (a cLie algebra when present).
#[derive(Clone, Debug)]
pub struct CLieAlgebra {
    pub degrees: Vec<i64>,
    /// `brackets[(i, j)] = [e_i, e_j]` for `i ≤ j`; the rest follows by symmetry.
    pub brackets: BTreeMap<(usize, usize), SparseVec>,
    pub differential: Vec<SparseVec>,
    pub unit: Option<usize>,
}

impl CLieAlgebra {
    pub fn abelian(degrees: Vec<i64>, unit: Option<usize>) -> Self {
        let n = degrees.len();
        CLieAlgebra { degrees, brackets: BTreeMap::new(), differential: vec![SparseVec::new(); n], unit }
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn bracket(&self, i: usize, j: usize) -> SparseVec {
        if i <= j {
            self.brackets.get(&(i, j)).cloned().unwrap_or_default()
        } else {
            // [e_i, e_j] = −(−1)^{|i||j|}[e_j, e_i].
            let s = sign_scalar(!(is_odd(self.degrees[i]) && is_odd(self.degrees[j])));
            self.bracket(j, i).scale(&s)
        }
    }

    pub fn bracket_vec(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, x) in a.entries() {
            for (j, y) in b.entries() {
                out = out.axpy(&(x * y), &self.bracket(*i, *j));
            }
        }
        out
    }

    pub fn apply_d(&self, a: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, x) in a.entries() {
            out = out.axpy(x, &self.differential[*i]);
        }
        out
    }

    /// Antisymmetry on the diagonal, Jacobi, `d² = 0`, `d` a derivation, the
    /// unit central and closed, and homogeneity of all structure maps.
    pub fn validate(&self) -> Result<(), EnvelopingError> {
        let n = self.dim();
        let deg = |v: &SparseVec, expect: i64| v.entries().iter().all(|(k, _)| self.degrees[*k] == expect);
        for i in 0..n {
            if !deg(&self.differential[i], self.degrees[i] - 1) {
                return Err(EnvelopingError::InvalidLie(format!("d(e_{i}) is not homogeneous of degree −1")));
            }
            if !self.apply_d(&self.differential[i]).is_zero() {
                return Err(EnvelopingError::InvalidLie(format!("d² ≠ 0 on e_{i}")));
            }
            for j in 0..n {
                let b = self.bracket(i, j);
                if !deg(&b, self.degrees[i] + self.degrees[j]) {
                    return Err(EnvelopingError::InvalidLie(format!("[e_{i}, e_{j}] is not homogeneous")));
                }
                if i == j && !is_odd(self.degrees[i]) && !b.is_zero() {
                    return Err(EnvelopingError::InvalidLie(format!("[e_{i}, e_{i}] ≠ 0 for even e_{i}")));
                }
                // d[a, b] = [da, b] + (−1)^{|a|}[a, db].
                let lhs = self.apply_d(&b);
                let rhs = self
                    .bracket_vec(&self.differential[i], &SparseVec::unit(j))
                    .add(&self.bracket_vec(&SparseVec::unit(i), &self.differential[j]).scale(&sign_scalar(is_odd(self.degrees[i]))));
                if lhs != rhs {
                    return Err(EnvelopingError::InvalidLie(format!("d is not a derivation on (e_{i}, e_{j})")));
                }
                for k in 0..n {
                    // [a,[b,c]] = [[a,b],c] + (−1)^{|a||b|}[b,[a,c]].
                    let (a, bb, c) = (SparseVec::unit(i), SparseVec::unit(j), SparseVec::unit(k));
                    let l = self.bracket_vec(&a, &self.bracket_vec(&bb, &c));
                    let r1 = self.bracket_vec(&self.bracket_vec(&a, &bb), &c);
                    let s = sign_scalar(is_odd(self.degrees[i]) && is_odd(self.degrees[j]));
                    let r2 = self.bracket_vec(&bb, &self.bracket_vec(&a, &c)).scale(&s);
                    if l != r1.add(&r2) {
                        return Err(EnvelopingError::InvalidLie(format!("Jacobi fails on (e_{i}, e_{j}, e_{k})")));
                    }
                }
            }
        }
        if let Some(u) = self.unit {
            if !self.differential[u].is_zero() || (0..n).any(|j| !self.bracket(u, j).is_zero()) {
                return Err(EnvelopingError::InvalidLie("the unit is not a central cycle".into()));
            }
        }
        Ok(())
    }
}

/// PBW rewriting in `U(𝔤)`, or in `U(𝔤)/(X_𝟙)` when `kill_unit` is set.
///
/// A word is normal when its letters are non-decreasing, odd letters do not
/// repeat, and (if killed) the unit does not occur.
pub struct Pbw<'a> {
    pub lie: &'a CLieAlgebra,
    pub kill_unit: bool,
    cache: HashMap<Vec<usize>, WordComb>,
}

impl<'a> Pbw<'a> {
    pub fn new(lie: &'a CLieAlgebra, kill_unit: bool) -> Self {
        Pbw { lie, kill_unit, cache: HashMap::new() }
    }

    fn killed(&self, i: usize) -> bool {
        self.kill_unit && self.lie.unit == Some(i)
    }

    pub fn degree(&self, w: &[usize]) -> i64 {
        w.iter().map(|&i| self.lie.degrees[i]).sum()
    }

    /// First position `p` where the pair `(w[p], w[p+1])` must be rewritten.
    fn redex(&self, w: &[usize], leftmost: bool) -> Option<usize> {
        let bad = |p: usize| w[p] > w[p + 1] || (w[p] == w[p + 1] && is_odd(self.lie.degrees[w[p]]));
        if leftmost {
            (0..w.len().saturating_sub(1)).find(|&p| bad(p))
        } else {
            (0..w.len().saturating_sub(1)).rev().find(|&p| bad(p))
        }
    }

    /// One rewriting step at `p`.
    fn rewrite_at(&self, w: &[usize], p: usize) -> WordComb {
        let (i, j) = (w[p], w[p + 1]);
        let mut out = WordComb::new();
        let splice = |mid: &[usize]| -> Vec<usize> { [&w[..p], mid, &w[p + 2..]].concat() };
        if i == j {
            // X_i X_i = ½ X_{[i,i]} for odd i.
            for (k, c) in self.lie.bracket(i, i).entries() {
                comb_add(&mut out, splice(&[*k]), c * qf(1, 2));
            }
        } else {
            // X_i X_j = (−1)^{|i||j|} X_j X_i + X_{[i,j]}.
            let s = sign_scalar(is_odd(self.lie.degrees[i]) && is_odd(self.lie.degrees[j]));
            comb_add(&mut out, splice(&[j, i]), s);
            for (k, c) in self.lie.bracket(i, j).entries() {
                comb_add(&mut out, splice(&[*k]), c.clone());
            }
        }
        out
    }

    pub fn normal_form(&mut self, w: &[usize]) -> WordComb {
        if w.iter().any(|&i| self.killed(i)) {
            return WordComb::new();
        }
        if let Some(r) = self.cache.get(w) {
            return r.clone();
        }
        let out = match self.redex(w, true) {
            None => std::iter::once((w.to_vec(), Scalar::from_integer(1.into()))).collect(),
            Some(p) => {
                let mut acc = WordComb::new();
                for (nw, c) in self.rewrite_at(w, p) {
                    let nf = self.normal_form(&nw);
                    comb_axpy(&mut acc, &c, &nf);
                }
                acc
            }
        };
        self.cache.insert(w.to_vec(), out.clone());
        out
    }

    /// Normal form by always rewriting the rightmost redex, without caching.
    pub fn normal_form_rightmost(&self, w: &[usize]) -> WordComb {
        if w.iter().any(|&i| self.killed(i)) {
            return WordComb::new();
        }
        match self.redex(w, false) {
            None => std::iter::once((w.to_vec(), Scalar::from_integer(1.into()))).collect(),
            Some(p) => {
                let mut acc = WordComb::new();
                for (nw, c) in self.rewrite_at(w, p) {
                    comb_axpy(&mut acc, &c, &self.normal_form_rightmost(&nw));
                }
                acc
            }
        }
    }

    pub fn normalize(&mut self, x: &WordComb) -> WordComb {
        let mut out = WordComb::new();
        for (w, c) in x {
            let nf = self.normal_form(w);
            comb_axpy(&mut out, c, &nf);
        }
        out
    }

    pub fn mul(&mut self, a: &WordComb, b: &WordComb) -> WordComb {
        let mut out = WordComb::new();
        for (u, x) in a {
            for (v, y) in b {
                let nf = self.normal_form(&[u.as_slice(), v.as_slice()].concat());
                comb_axpy(&mut out, &(x * y), &nf);
            }
        }
        out
    }

    /// Normal words of length at most `max_len`, shortest first.
    pub fn normal_words(&self, max_len: usize) -> Vec<Vec<usize>> {
        let n = self.lie.dim();
        let mut out = vec![Vec::new()];
        let mut frontier = vec![Vec::<usize>::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                let start = w.last().copied().unwrap_or(0);
                for i in start..n {
                    if self.killed(i) || (w.last() == Some(&i) && is_odd(self.lie.degrees[i])) {
                        continue;
                    }
                    let mut nw = w.clone();
                    nw.push(i);
                    next.push(nw);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}
