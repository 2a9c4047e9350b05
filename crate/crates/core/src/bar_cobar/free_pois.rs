//! Free Poisson `n`-algebras realized as `S(Σ^{1−n} L(Z))`, with `L(Z)` the
//! free Lie superalgebra on generators `Z` of given degrees and weights.
//!
//! Lie strata are computed by elimination over bracket trees: antisymmetry is
//! built into canonical trees and Jacobi instances are eliminated. Everything
//! of total weight above the bound is discarded, which is a quotient by an ideal.

use std::collections::HashMap;

use num_traits::One;

use crate::graded::{comb_add, comb_axpy, comb_mul, is_odd, leibniz_bracket, monomial, sym_canonicalize, MonoComb};
use crate::operad_core::{
    free_weighted_trees_upto, lie_n, relation_instances, Grading, LinComb, QuotientStratum, Sym, Tree,
};
use crate::qlinalg::{sign_scalar, Scalar, SparseVec};

/// Free Lie superalgebra with a degree-zero bracket, truncated by weight.
#[derive(Clone, Debug)]
pub struct FreeLie {
    pub gen_degrees: Vec<i64>,
    pub gen_weights: Vec<usize>,
    pub max_weight: usize,
    grading: Grading,
    strata: Vec<QuotientStratum>,
    offsets: Vec<usize>,
    basis: Vec<(usize, usize)>,
}

impl FreeLie {
    pub fn new(gen_degrees: Vec<i64>, gen_weights: Vec<usize>, max_weight: usize) -> Self {
        let lie = lie_n(1);
        let g_op = lie.grading();
        let grading = g_op.with_leaves(gen_degrees.clone());
        let rels = lie.relation_basis();
        let by_weight = free_weighted_trees_upto(&grading, &gen_weights, max_weight);
        let mut strata = Vec::with_capacity(max_weight + 1);
        let mut offsets = Vec::with_capacity(max_weight + 2);
        let mut basis = Vec::new();
        for (w, trees) in by_weight.into_iter().enumerate() {
            let inst = relation_instances(&g_op, &grading, &trees, &rels);
            let s = QuotientStratum::new(grading.clone(), trees, &inst);
            offsets.push(basis.len());
            basis.extend((0..s.dim()).map(|k| (w, k)));
            strata.push(s);
        }
        offsets.push(basis.len());
        FreeLie { gen_degrees, gen_weights, max_weight, grading, strata, offsets, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn weight(&self, i: usize) -> usize {
        self.basis[i].0
    }

    pub fn degree(&self, i: usize) -> i64 {
        let (w, k) = self.basis[i];
        self.strata[w].basis_degree(k)
    }

    pub fn tree(&self, i: usize) -> &Tree {
        let (w, k) = self.basis[i];
        self.strata[w].basis_tree(k)
    }

    /// Global index of the generator `z`.
    pub fn generator_index(&self, z: usize) -> usize {
        let w = self.gen_weights[z];
        let t: Tree = vec![Sym::Leaf(z as u16)];
        let local = self.strata[w].normal_form(&std::iter::once((t, Scalar::one())).collect());
        debug_assert_eq!(local.nnz(), 1);
        self.offsets[w] + local.entries()[0].0
    }

    /// Normal form of a combination of canonical trees of one weight.
    pub fn normal_form(&self, w: usize, c: &LinComb) -> SparseVec {
        if w > self.max_weight || c.is_empty() {
            return SparseVec::new();
        }
        let off = self.offsets[w];
        self.strata[w].normal_form(c).remap(|k| Some(k + off))
    }

    /// `[b_i, b_j]` in global coordinates; zero beyond the weight bound.
    pub fn bracket(&self, i: usize, j: usize) -> SparseVec {
        let w = self.weight(i) + self.weight(j);
        if w > self.max_weight {
            return SparseVec::new();
        }
        let mut t = vec![Sym::Op(0)];
        t.extend_from_slice(self.tree(i));
        t.extend_from_slice(self.tree(j));
        let mut c = LinComb::new();
        self.grading.push(&mut c, &t, Scalar::one());
        self.normal_form(w, &c)
    }

    /// The two top-level factors of a basis tree, as Lie elements.
    pub fn split(&self, i: usize) -> Option<(SparseVec, SparseVec)> {
        let t = self.tree(i);
        if !matches!(t[0], Sym::Op(_)) {
            return None;
        }
        let (l, r, _) = crate::operad_core::children(t, 0);
        Some((self.tree_element(&t[l..r]), self.tree_element(&t[r..])))
    }

    /// A canonical tree as a Lie element.
    pub fn tree_element(&self, t: &[Sym]) -> SparseVec {
        let w: usize = t
            .iter()
            .map(|s| match s {
                Sym::Leaf(z) => self.gen_weights[*z as usize],
                _ => 0,
            })
            .sum();
        let mut c = LinComb::new();
        self.grading.push(&mut c, t, Scalar::one());
        self.normal_form(w, &c)
    }
}

/// `S(Σ^{1−n} L(Z))` with the Poisson `n` structure: `s ℓ` has degree
/// `|ℓ| + 1 − n` and `{sa, sb} = (−1)^{(1−n)|a|} s[a, b]`.
#[derive(Clone, Debug)]
pub struct FreePoisson {
    pub n: i64,
    pub lie: FreeLie,
    /// Degrees of the polynomial generators `s b_i`.
    pub degrees: Vec<i64>,
    bracket_cache: HashMap<(usize, usize), MonoComb>,
}

impl FreePoisson {
    pub fn new(n: i64, lie: FreeLie) -> Self {
        let degrees = (0..lie.dim()).map(|i| lie.degree(i) + 1 - n).collect();
        let mut fp = FreePoisson { n, lie, degrees, bracket_cache: HashMap::new() };
        let m = fp.lie.dim();
        let mut cache = HashMap::new();
        for i in 0..m {
            for j in 0..m {
                if fp.lie.weight(i) + fp.lie.weight(j) <= fp.lie.max_weight {
                    cache.insert((i, j), fp.compute_gen_bracket(i, j));
                }
            }
        }
        fp.bracket_cache = cache;
        fp
    }

    pub fn weight(&self, m: &[usize]) -> usize {
        m.iter().map(|&i| self.lie.weight(i)).sum()
    }

    pub fn degree(&self, m: &[usize]) -> i64 {
        m.iter().map(|&i| self.degrees[i]).sum()
    }

    /// `s ℓ` for a Lie element `ℓ`.
    pub fn suspend(&self, l: &SparseVec) -> MonoComb {
        let mut out = MonoComb::new();
        for (i, x) in l.entries() {
            comb_add(&mut out, vec![*i], x.clone());
        }
        out
    }

    fn compute_gen_bracket(&self, i: usize, j: usize) -> MonoComb {
        let sign = sign_scalar(is_odd((1 - self.n) * self.lie.degree(i)));
        let mut out = MonoComb::new();
        for (k, x) in self.lie.bracket(i, j).entries() {
            comb_add(&mut out, vec![*k], x * &sign);
        }
        out
    }

    fn gen_bracket(&self, i: usize, j: usize) -> MonoComb {
        self.bracket_cache.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn mul(&self, a: &MonoComb, b: &MonoComb) -> MonoComb {
        let mut out = comb_mul(a, b, &self.degrees);
        out.retain(|m, _| self.weight(m) <= self.lie.max_weight);
        out
    }

    pub fn bracket(&self, a: &MonoComb, b: &MonoComb) -> MonoComb {
        let mut out = MonoComb::new();
        let mut gb = |x: usize, y: usize| self.gen_bracket(x, y);
        for (ma, ca) in a {
            for (mb, cb) in b {
                if self.weight(ma) + self.weight(mb) > self.lie.max_weight {
                    continue;
                }
                let t = leibniz_bracket(ma, mb, &self.degrees, self.n, &mut gb);
                comb_axpy(&mut out, &(ca * cb), &t);
            }
        }
        out
    }

    /// All monomials of total weight `≤ max_weight`, the unit first.
    pub fn monomials(&self) -> Vec<Vec<usize>> {
        let m = self.lie.dim();
        let mut out = vec![Vec::new()];
        let mut frontier = vec![Vec::new()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for mono in &frontier {
                let start = mono.last().copied().unwrap_or(0);
                let w = self.weight(mono);
                for i in start..m {
                    if w + self.lie.weight(i) > self.lie.max_weight {
                        continue;
                    }
                    if mono.last() == Some(&i) && is_odd(self.degrees[i]) {
                        continue;
                    }
                    let mut nm = mono.clone();
                    nm.push(i);
                    next.push(nm);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// Extends values on the polynomial generators `s b_i` to a derivation of
    /// degree −1 of the product; values must already be computed for every
    /// generator occurring in `m`.
    pub fn derivation_on_monomial(&self, m: &[usize], gen_values: &[MonoComb]) -> MonoComb {
        let mut out = MonoComb::new();
        let mut prefix = 0i64;
        for k in 0..m.len() {
            let left = monomial(m[..k].to_vec());
            let right = monomial(m[k + 1..].to_vec());
            let t = self.mul(&self.mul(&left, &gen_values[m[k]]), &right);
            comb_axpy(&mut out, &sign_scalar(is_odd(prefix)), &t);
            prefix += self.degrees[m[k]];
        }
        out
    }

    /// Values of a degree −1 derivation (of both product and bracket) on all
    /// polynomial generators, from its values on the Lie generators `z`.
    ///
    /// Uses `d{a,b} = (−1)^{n−1}({da, b} + (−1)^{|a|}{a, db})` on the
    /// top-level factors of each basis tree.
    pub fn extend_derivation(&self, on_generators: &dyn Fn(usize) -> MonoComb) -> Vec<MonoComb> {
        let m = self.lie.dim();
        let mut vals: Vec<Option<MonoComb>> = vec![None; m];
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&i| self.lie.weight(i));
        for i in order {
            let v = match self.lie.split(i) {
                None => {
                    let Sym::Leaf(z) = self.lie.tree(i)[0] else { unreachable!() };
                    on_generators(z as usize)
                }
                Some((a, b)) => {
                    // s[a,b] = (−1)^{(1−n)|a|} {sa, sb}, with a, b homogeneous.
                    let deg_a = a.entries().first().map(|(k, _)| self.lie.degree(*k)).unwrap_or(0);
                    let pre = sign_scalar(is_odd((1 - self.n) * deg_a));
                    let sa = self.suspend(&a);
                    let sb = self.suspend(&b);
                    let da = self.apply_linear(&sa, &vals);
                    let db = self.apply_linear(&sb, &vals);
                    let mut t = self.bracket(&da, &sb);
                    let sign_a = sign_scalar(is_odd(deg_a + 1 - self.n));
                    comb_axpy(&mut t, &sign_a, &self.bracket(&sa, &db));
                    let outer = sign_scalar(is_odd(self.n - 1)) * pre;
                    let mut out = MonoComb::new();
                    comb_axpy(&mut out, &outer, &t);
                    out
                }
            };
            vals[i] = Some(v);
        }
        vals.into_iter().map(Option::unwrap).collect()
    }

    fn apply_linear(&self, x: &MonoComb, vals: &[Option<MonoComb>]) -> MonoComb {
        let mut out = MonoComb::new();
        for (m, c) in x {
            debug_assert_eq!(m.len(), 1);
            comb_axpy(&mut out, c, vals[m[0]].as_ref().expect("lighter generator computed first"));
        }
        out
    }

    /// Canonical form of a word of polynomial generators.
    pub fn canonical(&self, word: &[usize]) -> Option<(bool, Vec<usize>)> {
        sym_canonicalize(word, &self.degrees).map(|w| (w.negative, w.gens))
    }
}
