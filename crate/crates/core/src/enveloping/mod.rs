//! Operadic enveloping algebras for `Com`, `uCom`, `Lie`, `cLie` and `uPois_n`
//! as finite strata with explicit structure constants.

pub mod derived;
pub mod lemma;
pub mod pbw;
pub mod sampling;
pub mod upois;

use std::collections::BTreeMap;

use indexmap::IndexSet;
use thiserror::Error;

use crate::bar_cobar::BarCobarError;
use crate::graded::{comb_mul, monomial, MonoComb};
use crate::qlinalg::{SparseVec, VecBuilder};
use crate::symplectic_poisson::PolyAlgebra;

pub use derived::{derived_envelope, derived_enveloping_check, DerivedEnvelope};
pub use lemma::{clie_qiso_preservation_test, envelope_complex, rewriting_is_confluent, unit_is_boundary};
pub use pbw::{CLieAlgebra, Pbw};
pub use upois::PoissonEnvelope;

#[derive(Debug, Error)]
pub enum EnvelopingError {
    #[error("unsupported operad tag {0:?}; expected com, ucom, lie, clie or upois_n")]
    UnsupportedOperadTag(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("not a morphism: {0}")]
    NotAMorphism(String),
    #[error("the base map is not a quasi-isomorphism")]
    NotAQuasiIsomorphism,
    #[error("invalid cLie algebra: {0}")]
    InvalidLie(String),
    #[error("d² ≠ 0: {0}")]
    DifferentialSquareNonzero(String),
    #[error(transparent)]
    Cobar(#[from] BarCobarError),
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

/// What an enveloping algebra is taken of.
pub enum EnvelopingInput<'a> {
    /// A (graded) commutative algebra, for `com` and `ucom`.
    Commutative(&'a PolyAlgebra),
    /// A dg Lie algebra, for `lie` and `clie` (the latter kills `X_𝟙`).
    Lie(&'a CLieAlgebra),
    /// A symplectic Poisson algebra, for `upois_n`.
    Poisson(&'a PolyAlgebra),
}

/// The weight-`≤ w` part of `U_𝒫(A)` on a monomial basis.
#[derive(Clone, Debug)]
pub struct EnvelopingStratum {
    pub tag: String,
    pub max_weight: usize,
    pub labels: Vec<String>,
    pub weights: Vec<usize>,
    pub degrees: Vec<i64>,
    /// Index of the unit, when the algebra is unital.
    pub unit: Option<usize>,
    /// `e_i · e_j` for every pair whose product stays within the truncation.
    pub product: BTreeMap<(usize, usize), SparseVec>,
    pub differential: Vec<SparseVec>,
}

impl EnvelopingStratum {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Number of basis elements of each exact weight.
    pub fn dims_by_weight(&self) -> Vec<usize> {
        let mut out = vec![0; self.max_weight + 1];
        for &w in &self.weights {
            out[w] += 1;
        }
        out
    }

    fn mul_vec(&self, a: &SparseVec, b: &SparseVec) -> Option<SparseVec> {
        let mut out = VecBuilder::new();
        for (i, x) in a.entries() {
            for (j, y) in b.entries() {
                out.add_vec(self.product.get(&(*i, *j))?, &(x * y));
            }
        }
        Some(out.finish())
    }

    /// `(e_i e_j) e_k = e_i (e_j e_k)` on every triple inside the truncation.
    pub fn check_associative(&self) -> bool {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.weights[i] + self.weights[j] + self.weights[k] > self.max_weight {
                        continue;
                    }
                    let ei = SparseVec::unit(i);
                    let ek = SparseVec::unit(k);
                    let l = self.product.get(&(i, j)).and_then(|ij| self.mul_vec(ij, &ek));
                    let r = self.product.get(&(j, k)).and_then(|jk| self.mul_vec(&ei, jk));
                    if l != r {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `e_𝟙 e_i = e_i = e_i e_𝟙` when there is a unit.
    pub fn check_unital(&self) -> bool {
        let Some(u) = self.unit else { return true };
        (0..self.dim()).all(|i| {
            let e = SparseVec::unit(i);
            self.product.get(&(u, i)) == Some(&e) && self.product.get(&(i, u)) == Some(&e)
        })
    }

    /// `d(xy) = dx·y + (−1)^{|x|} x·dy` on basis pairs.
    pub fn check_derivation(&self) -> bool {
        self.product.iter().all(|(&(i, j), p)| {
            let lhs = apply_columns(&self.differential, p);
            let a = self.mul_vec(&self.differential[i], &SparseVec::unit(j));
            let b = self.mul_vec(&SparseVec::unit(i), &self.differential[j]);
            match (a, b) {
                (Some(a), Some(b)) => {
                    let s = crate::qlinalg::sign_scalar(crate::graded::is_odd(self.degrees[i]));
                    lhs == a.axpy(&s, &b)
                }
                _ => true,
            }
        })
    }
}

fn apply_columns(cols: &[SparseVec], v: &SparseVec) -> SparseVec {
    let mut b = VecBuilder::new();
    for (j, x) in v.entries() {
        b.add_vec(&cols[*j], x);
    }
    b.finish()
}

/// Fills in the product table of a monomial basis from a product on keys.
fn table<K: Clone + std::hash::Hash + Eq>(
    basis: &IndexSet<K>,
    weights: &[usize],
    max_weight: usize,
    mut mul: impl FnMut(&K, &K) -> Vec<(K, crate::qlinalg::Scalar)>,
) -> BTreeMap<(usize, usize), SparseVec> {
    let mut out = BTreeMap::new();
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            if weights[i] + weights[j] > max_weight {
                continue;
            }
            let v = SparseVec::from_pairs(
                mul(a, b).into_iter().map(|(k, x)| (basis.get_index_of(&k).expect("product within truncation"), x)),
            );
            out.insert((i, j), v);
        }
    }
    out
}

/// The weight-`≤ w` stratum of `U_𝒫(input)` for `𝒫` named by `tag`.
///
/// `com` gives `B₊` (no unit), `ucom` gives `B`, `lie` gives `U(𝔤)`, `clie`
/// gives `U(𝔤)/(X_𝟙)` and `upois_n` gives `A ⊗ U_{cLie_n}(Σ^{1−n}𝔤)` with the
/// algebra factors moved to the left.
pub fn enveloping_stratum(tag: &str, input: &EnvelopingInput, w: usize) -> Result<EnvelopingStratum, EnvelopingError> {
    match (tag, input) {
        ("com" | "ucom", EnvelopingInput::Commutative(alg)) => {
            let start = if tag == "com" { 1 } else { 0 };
            let basis: IndexSet<Vec<usize>> =
                alg.monomials_upto(w).into_iter().filter(|m| m.len() >= start).collect();
            let weights: Vec<usize> = basis.iter().map(Vec::len).collect();
            let product = table(&basis, &weights, w, |a, b| {
                comb_mul(&monomial(a.clone()), &monomial(b.clone()), &alg.degrees).into_iter().collect()
            });
            Ok(EnvelopingStratum {
                tag: tag.to_string(),
                max_weight: w,
                labels: basis.iter().map(|m| format!("{m:?}")).collect(),
                degrees: basis.iter().map(|m| alg.degree(m)).collect(),
                unit: basis.get_index_of(&Vec::new()),
                differential: vec![SparseVec::new(); basis.len()],
                weights,
                product,
            })
        }
        ("lie" | "clie", EnvelopingInput::Lie(lie)) => {
            let kill_unit = tag == "clie";
            let env = envelope_complex(lie, kill_unit, w);
            let mut pbw = Pbw::new(lie, kill_unit);
            let weights: Vec<usize> = env.words.iter().map(Vec::len).collect();
            let product = table(&env.words, &weights, w, |a, b| {
                let x: MonoComb = pbw.mul(&monomial(a.clone()), &monomial(b.clone()));
                x.into_iter().collect()
            });
            Ok(EnvelopingStratum {
                tag: tag.to_string(),
                max_weight: w,
                labels: env.words.iter().map(|u| format!("X{u:?}")).collect(),
                degrees: env.complex.degrees.clone(),
                unit: env.words.get_index_of(&Vec::new()),
                differential: env.complex.differential.clone(),
                weights,
                product,
            })
        }
        ("upois_n", EnvelopingInput::Poisson(alg)) => {
            let env = PoissonEnvelope::new((*alg).clone());
            let basis: IndexSet<(Vec<usize>, Vec<usize>)> = env.basis(w).into_iter().collect();
            let weights: Vec<usize> = basis.iter().map(|(a, u)| a.len() + u.len()).collect();
            let product = table(&basis, &weights, w, |(a, u), (b, v)| {
                env.mul(&PoissonEnvelope::element(a, u), &PoissonEnvelope::element(b, v)).into_iter().collect()
            });
            Ok(EnvelopingStratum {
                tag: tag.to_string(),
                max_weight: w,
                labels: basis.iter().map(|(a, u)| format!("{a:?}X{u:?}")).collect(),
                degrees: basis.iter().map(|(a, u)| env.degree(a, u)).collect(),
                unit: basis.get_index_of(&(Vec::new(), Vec::new())),
                differential: vec![SparseVec::new(); basis.len()],
                weights,
                product,
            })
        }
        _ => Err(EnvelopingError::UnsupportedOperadTag(tag.to_string())),
    }
}
