//! `U_{uPois_n}(A) ≅ A ⊗ U_{cLie_n}(Σ^{1−n}𝔤)` for the symplectic algebra,
//! where the generators' brackets are constants so that `X_𝟙 = 0` makes the
//! `X`-symbols graded commutative.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::graded::{comb_mul, is_odd, monomial, sym_canonicalize, sym_words, MonoComb};
use crate::qlinalg::{sign_scalar, Scalar};
use crate::symplectic_poisson::PolyAlgebra;

/// Elements of `A ⊗ S(X_V)` in normal form `a · X_u` (algebra factor left).
pub type EnvElem = BTreeMap<(Vec<usize>, Vec<usize>), Scalar>;

fn add(out: &mut EnvElem, key: (Vec<usize>, Vec<usize>), c: Scalar) {
    if c.is_zero() {
        return;
    }
    let e = out.entry(key.clone()).or_insert_with(Scalar::zero);
    *e += c;
    if e.is_zero() {
        out.remove(&key);
    }
}

pub struct PoissonEnvelope {
    pub algebra: PolyAlgebra,
    /// Degrees of `X_v = {v, −}`: `|v| + n − 1`.
    pub x_degrees: Vec<i64>,
}

impl PoissonEnvelope {
    pub fn new(algebra: PolyAlgebra) -> Self {
        let n = algebra.spec.n;
        let x_degrees = algebra.degrees.iter().map(|d| d + n - 1).collect();
        PoissonEnvelope { algebra, x_degrees }
    }

    pub fn element(a: &[usize], u: &[usize]) -> EnvElem {
        std::iter::once(((a.to_vec(), u.to_vec()), Scalar::one())).collect()
    }

    pub fn degree(&self, a: &[usize], u: &[usize]) -> i64 {
        self.algebra.degree(a) + u.iter().map(|&v| self.x_degrees[v]).sum::<i64>()
    }

    /// Basis of the weight-`≤ w` part: pairs of monomials of `A` and of `S(X_V)`.
    pub fn basis(&self, w: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut out = Vec::new();
        for wa in 0..=w {
            for a in sym_words(&self.algebra.degrees, wa) {
                for wu in 0..=(w - wa) {
                    for u in sym_words(&self.x_degrees, wu) {
                        out.push((a.clone(), u));
                    }
                }
            }
        }
        out
    }

    /// `X_u · g` brought to normal form.
    fn move_past(&self, u: &[usize], g: &[usize]) -> EnvElem {
        let Some((&v, rest)) = u.split_last() else {
            return Self::element(g, &[]);
        };
        let alg = &self.algebra;
        let mut out = EnvElem::new();
        // X_v g = {v, g} + (−1)^{|X_v||g|} g X_v.
        let br = alg.bracket(&alg.generator(v), &monomial(g.to_vec()));
        for (h, c) in br {
            for ((a, w), y) in self.move_past(rest, &h) {
                add(&mut out, (a, w), &c * y);
            }
        }
        let s = sign_scalar(is_odd(self.x_degrees[v] * alg.degree(g)));
        for ((a, w), y) in self.move_past(rest, g) {
            let mut word = w.clone();
            word.push(v);
            if let Some(sw) = sym_canonicalize(&word, &self.x_degrees) {
                let sign = sw.sign();
                add(&mut out, (a, sw.gens), &s * &y * sign);
            }
        }
        out
    }

    pub fn mul(&self, x: &EnvElem, y: &EnvElem) -> EnvElem {
        let mut out = EnvElem::new();
        for ((f, u), c) in x {
            for ((g, u2), d) in y {
                for ((a, w), e) in self.move_past(u, g) {
                    let fa = comb_mul(&monomial(f.clone()), &monomial(a), &self.algebra.degrees);
                    let word: Vec<usize> = w.iter().chain(u2).copied().collect();
                    let Some(sw) = sym_canonicalize(&word, &self.x_degrees) else { continue };
                    for (m, z) in fa {
                        add(&mut out, (m, sw.gens.clone()), c * d * &e * &z * sw.sign());
                    }
                }
            }
        }
        out
    }

    /// Left multiplication by an algebra element.
    pub fn from_algebra(a: &MonoComb) -> EnvElem {
        a.iter().map(|(m, c)| ((m.clone(), Vec::new()), c.clone())).collect()
    }

    /// `X_f` for a monomial `f`, from `X_𝟙 = 0` and the first-slot Leibniz rule
    /// of the bracket, `X_{vg} = (−1)^{(n−1)|v|} v·X_g + (−1)^{|v||g| + (n−1)|g|} g·X_v`.
    pub fn x_of(&self, f: &[usize]) -> EnvElem {
        let Some((&v, g)) = f.split_first() else {
            return EnvElem::new();
        };
        let alg = &self.algebra;
        let n = alg.spec.n;
        let (dv, dg) = (alg.degrees[v], alg.degree(g));
        let mut out = EnvElem::new();
        let s = sign_scalar(is_odd((n - 1) * dv));
        for (k, c) in self.mul(&Self::element(&[v], &[]), &self.x_of(g)) {
            add(&mut out, k, c * &s);
        }
        let s = sign_scalar(is_odd(dv * dg + (n - 1) * dg));
        for (k, c) in Self::element(g, &[v]) {
            add(&mut out, k, c * &s);
        }
        out
    }
}
