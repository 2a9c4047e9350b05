//! The comparison `𝒢_P^∨ ∘ Ω_κA^¡ → 𝒢_P^∨ ∘ A`: the unital CE complex of
//! `P^{−*} ⊗ L(Z)`, with `L(Z)` the Lie part of the cobar resolution, mapped
//! onto the unital CE complex of `P^{−*} ⊗ Σ^{n−1}V` along `f_ϰ`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::ce::{ce_complex, tensor_with_model, CEComplex, UnitalLie, WithUnit};
use super::model::PDModel;
use super::{unital_ce_complex, FacthomError};
use crate::bar_cobar::{quasi_iso_check, BettiReport};
use crate::graded::{is_odd, sym_canonicalize};
use crate::qlinalg::{sign_scalar, Scalar, SparseVec, VecBuilder};
use crate::symplectic_poisson::{koszulity_data, SymplecticAlgebraSpec};

#[derive(Clone, Debug, Serialize)]
pub struct DerivedReport {
    pub source_dim: usize,
    pub target_dim: usize,
    /// `d₂` keeps the number of outer letters, `d_CE` and `d₀` lower it by one.
    pub components_ok: bool,
    pub betti: BettiReport,
}

impl DerivedReport {
    pub fn passed(&self) -> bool {
        self.components_ok && self.betti.passed()
    }
}

/// The source complex, the target complex and the projection between them.
pub struct DerivedComparison {
    pub source: CEComplex,
    pub target: CEComplex,
    pub map: Vec<SparseVec>,
}

/// `L(Z)` with `d(ℓ)` read off `d_Ω(sℓ)` (its constant term being the unit)
/// and the bracket rescaled by `(−1)^{n−1}` so that `f_ϰ` becomes a Lie map
/// into `Σ^{n−1}V ⊕ 𝕜𝟙`; also returns `f_ϰ(sℓ)` for each basis element.
fn cobar_lie(spec: SymplecticAlgebraSpec, max_weight: usize) -> Result<(UnitalLie, Vec<WithUnit>), FacthomError> {
    let data = koszulity_data(spec, max_weight, true)?;
    let om = &data.cobar;
    let lie = &om.algebra.lie;
    let m = lie.dim();
    let flip = sign_scalar(is_odd(spec.n - 1));
    let mut bracket = BTreeMap::new();
    for i in 0..m {
        for j in 0..m {
            let b = lie.bracket(i, j);
            if !b.is_zero() {
                bracket.insert((i, j), (b.scale(&flip), Scalar::zero()));
            }
        }
    }
    let split = |v: &SparseVec, what: &str, basis: &dyn Fn(usize) -> Vec<usize>| -> Result<WithUnit, FacthomError> {
        let mut b = VecBuilder::new();
        let mut unit = Scalar::zero();
        for (k, c) in v.entries() {
            match basis(*k).as_slice() {
                [] => unit += c,
                [g] => b.add(*g, c.clone()),
                _ => return Err(FacthomError::Unsupported(format!("{what} has product terms"))),
            }
        }
        Ok((b.finish(), unit))
    };
    let mut differential = Vec::with_capacity(m);
    let mut images = Vec::with_capacity(m);
    for i in 0..m {
        let k = om.monomials.get_index_of(&vec![i]).expect("every Lie basis element is a monomial");
        differential.push(split(&om.complex.differential[k], "d(sℓ)", &|j| om.monomials[j].clone())?);
        images.push(split(&data.map[k], "f(sℓ)", &|j| data.target_basis[j].clone())?);
    }
    let lie_alg = UnitalLie {
        degrees: (0..m).map(|i| lie.degree(i)).collect(),
        weights: (0..m).map(|i| lie.weight(i)).collect(),
        labels: (0..m).map(|i| format!("l{i}")).collect(),
        bracket,
        differential,
    };
    Ok((lie_alg, images))
}

pub fn derived_comparison(
    p: &PDModel,
    spec: SymplecticAlgebraSpec,
    max_length: usize,
    max_weight: usize,
) -> Result<DerivedComparison, FacthomError> {
    p.validate()?;
    let (lie, images) = cobar_lie(spec, max_weight)?;
    let source = ce_complex(tensor_with_model(p, &lie, spec.n)?, max_weight, max_length)?;
    let target = unital_ce_complex(p, spec, max_length)?;
    let nv = spec.generator_degrees().len();
    // Letters are listed P-major in both complexes.
    let letter_image: Vec<WithUnit> = (0..source.data.dim())
        .map(|k| {
            let (a, l) = (k / lie.degrees.len(), k % lie.degrees.len());
            let (v, c) = &images[l];
            (v.remap(|x| Some(a * nv + x)), c * &p.epsilon[a])
        })
        .collect();
    let mut map = Vec::with_capacity(source.dim());
    for w in &source.words {
        let mut terms: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), Scalar::one())];
        for &k in w {
            let (v, c) = &letter_image[k];
            let mut next = Vec::new();
            for (word, x) in &terms {
                if !c.is_zero() {
                    next.push((word.clone(), x * c));
                }
                for (t, y) in v.entries() {
                    let mut nw = word.clone();
                    nw.push(*t);
                    next.push((nw, x * y));
                }
            }
            terms = next;
        }
        let mut b = VecBuilder::new();
        for (word, x) in terms {
            if let Some(sw) = sym_canonicalize(&word, &target.data.degrees) {
                let idx = target
                    .words
                    .get_index_of(&sw.gens)
                    .ok_or_else(|| FacthomError::Unsupported("projection leaves the truncation".into()))?;
                b.add(idx, x * sw.sign());
            }
        }
        map.push(b.finish());
    }
    Ok(DerivedComparison { source, target, map })
}

impl DerivedComparison {
    pub fn components_ok(&self) -> bool {
        let s = &self.source;
        let len = &s.lengths;
        (0..s.dim()).all(|i| {
            s.d_inner[i].entries().iter().all(|(j, _)| len[*j] == len[i])
                && s.d_unit[i].entries().iter().all(|(j, _)| len[*j] + 1 == len[i])
                && s.d_pair[i].entries().iter().all(|(j, _)| len[*j] + 1 == len[i])
        })
    }
}

/// Checks that the projection is a chain map and a quasi-isomorphism on
/// every weight-filtered stratum within the bounds.
pub fn derived_vs_underived_check(
    p: &PDModel,
    spec: SymplecticAlgebraSpec,
    max_length: usize,
    max_weight: usize,
) -> Result<DerivedReport, FacthomError> {
    let cmp = derived_comparison(p, spec, max_length, max_weight)?;
    cmp.source
        .complex
        .check_square_zero()
        .map_err(|w| FacthomError::DifferentialSquareNonzero(format!("source word {}: {}", w.basis_index, w.residue)))?;
    let betti = quasi_iso_check(&cmp.map, &cmp.source.complex, &cmp.target.complex, max_weight)
        .map_err(|w| FacthomError::Unsupported(format!("not a chain map at source word {}: {}", w.basis_index, w.residue)))?;
    Ok(DerivedReport {
        source_dim: cmp.source.dim(),
        target_dim: cmp.target.dim(),
        components_ok: cmp.components_ok(),
        betti,
    })
}
