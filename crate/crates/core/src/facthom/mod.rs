//! Factorization homology of symplectic Poisson `n`-algebras over Poincaré
//! duality models, through the unital Chevalley–Eilenberg complex.

pub mod action;
pub mod ce;
pub mod derham;
pub mod derived;
pub mod model;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;
use rayon::prelude::*;
use thiserror::Error;

pub use action::{module_action, Factor, GElement, GTerm, LieWord, UcomGenerator};
pub use ce::{ce_complex, tensor_with_model, CEComplex, CEData, UnitalLie};
pub use derham::{de_rham_identify, DeRham, DeRhamForm};
pub use derived::{derived_comparison, derived_vs_underived_check, DerivedComparison, DerivedReport};
pub use model::PDModel;

use crate::bar_cobar::{BarCobarError, FilteredComplex};
use crate::graded::is_odd;
use crate::qlinalg::{sign_scalar, Echelon, Scalar, SparseMatrix, SparseVec};
use crate::symplectic_poisson::SymplecticAlgebraSpec;

#[derive(Debug, Error)]
pub enum FacthomError {
    #[error("malformed model: {0}")]
    Parse(String),
    #[error("product is not graded commutative: {0}")]
    ProductNotCommutative(String),
    #[error("product is not associative: {0}")]
    ProductNotAssociative(String),
    #[error("differential is not a square-zero derivation: {0}")]
    DifferentialNotDerivation(String),
    #[error("pairing is degenerate: {0}")]
    PairingDegenerate(String),
    #[error("ε does not vanish on boundaries: {0}")]
    EpsilonNotClosed(String),
    #[error("d² ≠ 0: {0}")]
    DifferentialSquareNonzero(String),
    #[error("slot {slot} out of range for arity {arity}")]
    SlotOutOfRange { slot: usize, arity: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Cobar(#[from] BarCobarError),
}

/// `Σ^{n−1}V` for `A_{n;D}` with `[Σ^{n−1}a, Σ^{n−1}b] = (−1)^{(n−1)|a|}{a, b}`,
/// all brackets landing in the unit.
pub fn symplectic_lie(spec: SymplecticAlgebraSpec) -> UnitalLie {
    let degrees = spec.generator_degrees();
    let n = spec.n;
    let mut bracket = BTreeMap::new();
    for (a, &da) in degrees.iter().enumerate() {
        let b = spec.partner(a);
        // {x, ξ} = 1 and {ξ, x} = (−1)^n.
        let poisson = if a < spec.d { Scalar::one() } else { sign_scalar(is_odd(n)) };
        bracket.insert((a, b), (SparseVec::new(), sign_scalar(is_odd((n - 1) * da)) * poisson));
    }
    UnitalLie {
        degrees: degrees.iter().map(|d| d + n - 1).collect(),
        weights: vec![1; degrees.len()],
        labels: spec.generator_names(),
        bracket,
        differential: vec![(SparseVec::new(), Scalar::zero()); degrees.len()],
    }
}

/// The letters of `S^c(Σ𝔤_{P,V})` for `P ⊗ Σ^{n−1}V`.
pub fn model_letters(p: &PDModel, spec: SymplecticAlgebraSpec) -> Result<CEData, FacthomError> {
    p.validate()?;
    tensor_with_model(p, &symplectic_lie(spec), spec.n)
}

/// `⟨α, β⟩`: the unit coefficient of `d_CE(α ∧ β)` on letters.
#[derive(Clone, Debug)]
pub struct PairingForm {
    pub labels: Vec<String>,
    pub matrix: SparseMatrix,
}

impl PairingForm {
    pub fn is_nondegenerate(&self) -> bool {
        self.matrix.rank() == self.labels.len()
    }
}

pub fn pairing_form(data: &CEData) -> PairingForm {
    let triplets: Vec<(usize, usize, Scalar)> =
        data.l2.iter().filter(|(_, v)| !v.1.is_zero()).map(|(&(i, j), v)| (i, j, v.1.clone())).collect();
    PairingForm { labels: data.labels.clone(), matrix: SparseMatrix::from_triplets(data.dim(), data.dim(), &triplets) }
}

/// The unital CE complex truncated at word length `max_length`, with `d² = 0` checked.
pub fn unital_ce_complex(p: &PDModel, spec: SymplecticAlgebraSpec, max_length: usize) -> Result<CEComplex, FacthomError> {
    let data = model_letters(p, spec)?;
    let ce = ce_complex(data, max_length, max_length)?;
    for (i, col) in ce.complex.differential.iter().enumerate() {
        if let Some((j, _)) = col.entries().iter().find(|(j, _)| ce.complex.degrees[*j] != ce.complex.degrees[i] - 1) {
            return Err(FacthomError::Unsupported(format!(
                "d is not of degree −1: {} (grade {}) ↦ {} (grade {})",
                ce.word_label(i),
                ce.complex.degrees[i],
                ce.word_label(*j),
                ce.complex.degrees[*j]
            )));
        }
    }
    ce.complex.check_square_zero().map_err(|w| {
        FacthomError::DifferentialSquareNonzero(format!(
            "on {} (grade {}): residue {}",
            ce.word_label(w.basis_index),
            w.degree,
            w.residue
        ))
    })?;
    Ok(ce)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyRow {
    /// `#even − #odd + r`: the polynomial-plus-form degree on the de Rham side.
    pub euler: usize,
    pub grade: i64,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FacthomReport {
    pub max_length: usize,
    /// Pieces with Euler weight up to this bound lie entirely within the truncation.
    pub certified_euler: Option<usize>,
    pub rows: Vec<HomologyRow>,
    pub total: usize,
    pub representative: Vec<(String, String)>,
    pub representative_grade: i64,
    pub representative_certified: bool,
}

impl FacthomReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("euler,grade,dim\n");
        for r in &self.rows {
            s.push_str(&format!("{},{},{}\n", r.euler, r.grade, r.dim));
        }
        s
    }
}

impl CEComplex {
    pub fn word_label(&self, i: usize) -> String {
        let w = &self.words[i];
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&k| self.data.labels[k].as_str()).collect::<Vec<_>>().join(" ∧ ")
    }

    /// `#even − #odd + r` per word when `d` preserves it, with `r` the number
    /// of odd letters; `None` when some matrix entry breaks it.
    pub fn euler_weights(&self) -> Option<(usize, Vec<usize>)> {
        let odd: Vec<bool> = self.data.degrees.iter().map(|&d| is_odd(d)).collect();
        let r = odd.iter().filter(|&&o| o).count() as i64;
        let e: Vec<i64> = self
            .words
            .iter()
            .map(|w| w.iter().map(|&k| if odd[k] { -1 } else { 1 }).sum::<i64>() + r)
            .collect();
        for (i, col) in self.complex.differential.iter().enumerate() {
            if col.entries().iter().any(|(j, _)| e[*j] != e[i]) {
                return None;
            }
        }
        Some((r as usize, e.into_iter().map(|x| x as usize).collect()))
    }
}

/// Homology of the unital CE complex within word length `max_length`, split
/// by Euler weight, with the class `⋀_j x_j*` certified.
pub fn facthom_homology(p: &PDModel, spec: SymplecticAlgebraSpec, max_length: usize) -> Result<FacthomReport, FacthomError> {
    let ce = unital_ce_complex(p, spec, max_length)?;
    let dr = de_rham_identify(&ce)?;
    let rep = dr.representative(&ce)?;
    let rep_grade = ce.complex.degrees[rep.entries()[0].0];

    let (rows, certified) = match ce.euler_weights() {
        Some((r, euler)) => {
            let bound = max_length.checked_sub(r);
            let graded = FilteredComplex { weights: euler, ..ce.complex.clone() };
            // Each filtered piece is independent; order is restored by the collect.
            let pieces: Vec<Vec<(i64, usize)>> = match bound {
                Some(b) => (0..=b)
                    .into_par_iter()
                    .map(|e| graded.degrees_upto(e).into_iter().map(|k| (k, graded.homology(e, k))).collect())
                    .collect(),
                None => Vec::new(),
            };
            let mut rows = Vec::new();
            for (e, piece) in pieces.iter().enumerate() {
                for &(k, h) in piece {
                    let below = if e == 0 { 0 } else { pieces[e - 1].iter().find(|p| p.0 == k).map_or(0, |p| p.1) };
                    if h > below {
                        rows.push(HomologyRow { euler: e, grade: k, dim: h - below });
                    }
                }
            }
            (rows, bound)
        }
        None => {
            // No conserved splitting: report the homology of the truncation itself.
            let len = FilteredComplex { weights: ce.lengths.clone(), ..ce.complex.clone() };
            let rows = len
                .degrees_upto(max_length)
                .into_iter()
                .map(|k| HomologyRow { euler: max_length, grade: k, dim: len.homology(max_length, k) })
                .filter(|r| r.dim > 0)
                .collect();
            (rows, None)
        }
    };
    let rep_certified = certified.is_some_and(|b| b >= rep_euler(&ce, &rep)) && is_nonzero_class(&ce, &rep);
    Ok(FacthomReport {
        max_length,
        certified_euler: certified,
        total: rows.iter().map(|r| r.dim).sum(),
        rows,
        representative: rep.entries().iter().map(|(i, c)| (ce.word_label(*i), c.to_string())).collect(),
        representative_grade: rep_grade,
        representative_certified: rep_certified,
    })
}

fn rep_euler(ce: &CEComplex, rep: &SparseVec) -> usize {
    ce.euler_weights().map(|(_, e)| e[rep.entries()[0].0]).unwrap_or(usize::MAX)
}

/// A cycle that is not a boundary of anything in the truncation. Exact for
/// classes whose Euler piece lies inside the truncation.
pub fn is_nonzero_class(ce: &CEComplex, z: &SparseVec) -> bool {
    if z.is_zero() || !crate::bar_cobar::complex::apply(&ce.complex.differential, z).is_zero() {
        return false;
    }
    let mut image = Echelon::new();
    for col in &ce.complex.differential {
        image.insert(col);
    }
    !image.contains(z)
}
