//! The derived enveloping algebra `U(Ω_κA^¡) ≅ Ω_κA^¡ ⊗ T(X_Z)` compared with
//! `U(A) ≅ A ⊗ S(Σ^{n−1}V)` along the map induced by `f_ϰ`.

use std::collections::HashMap;

use indexmap::IndexSet;
use num_traits::One;

use super::EnvelopingError;
use crate::bar_cobar::{quasi_iso_check, BettiReport, FilteredComplex};
use crate::graded::{comb_add, comb_axpy, is_odd, sym_canonicalize, sym_words, MonoComb};
use crate::qlinalg::{sign_scalar, Scalar, SparseVec, VecBuilder};
use crate::symplectic_poisson::{koszulity_data, SymplecticAlgebraSpec};

pub struct DerivedEnvelope {
    pub source: FilteredComplex,
    pub source_basis: IndexSet<(usize, Vec<usize>)>,
    pub target: FilteredComplex,
    pub target_basis: IndexSet<(Vec<usize>, Vec<usize>)>,
    pub map: Vec<SparseVec>,
}

/// Words over letters with the given weights, of total weight at most `w`.
fn words_upto(weights: &[usize], w: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![(Vec::<usize>::new(), 0usize)];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (word, tw) in &frontier {
            for (z, &wz) in weights.iter().enumerate() {
                if tw + wz <= w {
                    let mut nw = word.clone();
                    nw.push(z);
                    next.push((nw, tw + wz));
                }
            }
        }
        out.extend(next.iter().map(|(x, _)| x.clone()));
        frontier = next;
    }
    out
}

/// Concatenation product in the tensor algebra.
fn tensor_mul(a: &MonoComb, b: &MonoComb) -> MonoComb {
    let mut out = MonoComb::new();
    for (u, x) in a {
        for (v, y) in b {
            comb_add(&mut out, [u.as_slice(), v.as_slice()].concat(), x * y);
        }
    }
    out
}

pub fn derived_envelope(spec: SymplecticAlgebraSpec, max_weight: usize) -> Result<DerivedEnvelope, EnvelopingError> {
    let data = koszulity_data(spec, max_weight, true)?;
    let om = &data.cobar;
    let lie = &om.algebra.lie;
    let n = spec.n;
    let nz = data.dual.dim();
    let z_weights = data.dual.weights.clone();
    let z_degrees: Vec<i64> = (0..nz).map(|z| lie.degree(lie.generator_index(z))).collect();
    let letter_of: HashMap<usize, usize> = (0..nz).map(|z| (lie.generator_index(z), z)).collect();

    // X_{sℓ} in T(X_Z): letters for generators, and X_{{f,g}} = (−1)^{(n−1)|f|}[X_f, X_g],
    // the sign matching derivations that pass the bracket symbol first; with
    // s[a,b] = (−1)^{(1−n)|a|}{sa, sb} this is X_{s[a,b]} = (−1)^{n−1}[X_{sa}, X_{sb}].
    let mut x_of: Vec<MonoComb> = vec![MonoComb::new(); lie.dim()];
    let mut order: Vec<usize> = (0..lie.dim()).collect();
    order.sort_by_key(|&i| lie.weight(i));
    let lin = |v: &SparseVec, x_of: &[MonoComb]| {
        let mut out = MonoComb::new();
        for (k, c) in v.entries() {
            comb_axpy(&mut out, c, &x_of[*k]);
        }
        out
    };
    for i in order {
        x_of[i] = match lie.split(i) {
            None => std::iter::once((vec![letter_of[&i]], Scalar::one())).collect(),
            Some((a, b)) => {
                let da = lie.degree(a.entries()[0].0);
                let db = lie.degree(b.entries()[0].0);
                let (xa, xb) = (lin(&a, &x_of), lin(&b, &x_of));
                let mut out = tensor_mul(&xa, &xb);
                comb_axpy(&mut out, &-sign_scalar(is_odd(da * db)), &tensor_mul(&xb, &xa));
                let s = sign_scalar(is_odd(n - 1));
                out.values_mut().for_each(|c| *c *= &s);
                out
            }
        };
    }
    // d X_z = X_{d(s z)}, with X_𝟙 = 0.
    let mut d_letter: Vec<MonoComb> = Vec::with_capacity(nz);
    for z in 0..nz {
        let g = vec![lie.generator_index(z)];
        let k = om.monomials.get_index_of(&g).expect("generator within truncation");
        let mut out = MonoComb::new();
        for (m, c) in om.complex.differential[k].entries() {
            let mono = &om.monomials[*m];
            match mono.len() {
                0 => {}
                1 => comb_axpy(&mut out, c, &x_of[mono[0]]),
                _ => {
                    return Err(EnvelopingError::Unsupported(
                        "d(s z) has product terms; the normal form B ⊗ U needs the full relations".into(),
                    ))
                }
            }
        }
        d_letter.push(out);
    }

    let words = words_upto(&z_weights, max_weight);
    let word_weight = |w: &[usize]| w.iter().map(|&z| z_weights[z]).sum::<usize>();
    let word_degree = |w: &[usize]| w.iter().map(|&z| z_degrees[z]).sum::<i64>();
    let om_weights = &om.complex.weights;
    let mut basis: IndexSet<(usize, Vec<usize>)> = IndexSet::new();
    for (m, &wm) in om_weights.iter().enumerate() {
        for w in &words {
            if wm + word_weight(w) <= max_weight {
                basis.insert((m, w.clone()));
            }
        }
    }
    let mut differential = Vec::with_capacity(basis.len());
    for (m, w) in &basis {
        let mut b = VecBuilder::new();
        for (m2, c) in om.complex.differential[*m].entries() {
            b.add(basis.get_index_of(&(*m2, w.clone())).expect("weight does not increase"), c.clone());
        }
        let sm = sign_scalar(is_odd(om.complex.degrees[*m]));
        let mut prefix = 0i64;
        for p in 0..w.len() {
            let s = &sm * sign_scalar(is_odd(prefix));
            for (mid, c) in &d_letter[w[p]] {
                let nw = [&w[..p], mid.as_slice(), &w[p + 1..]].concat();
                b.add(basis.get_index_of(&(*m, nw)).expect("weight does not increase"), &s * c);
            }
            prefix += z_degrees[w[p]];
        }
        differential.push(b.finish());
    }
    let source = FilteredComplex {
        weights: basis.iter().map(|(m, w)| om_weights[*m] + word_weight(w)).collect(),
        degrees: basis.iter().map(|(m, w)| om.complex.degrees[*m] + word_degree(w)).collect(),
        differential,
    };

    // Target A ⊗ S(Σ^{n−1}V).
    let a_deg = spec.generator_degrees();
    let x_deg: Vec<i64> = a_deg.iter().map(|d| d + n - 1).collect();
    let mut target_basis: IndexSet<(Vec<usize>, Vec<usize>)> = IndexSet::new();
    for a in data.target_basis.iter() {
        for k in 0..=(max_weight - a.len()) {
            for u in sym_words(&x_deg, k) {
                target_basis.insert((a.clone(), u));
            }
        }
    }
    let target = FilteredComplex::zero_differential(
        target_basis.iter().map(|(a, u)| a.len() + u.len()).collect(),
        target_basis.iter().map(|(a, u)| a.iter().map(|&v| a_deg[v]).sum::<i64>() + u.iter().map(|&v| x_deg[v]).sum::<i64>()).collect(),
    );
    // f_ϰ ⊗ (X_z ↦ X_{ϰ(z)}), ϰ being the identity on weight-one letters.
    let map = basis
        .iter()
        .map(|(m, w)| {
            if w.iter().any(|&z| z_weights[z] != 1) {
                return SparseVec::new();
            }
            let Some(sw) = sym_canonicalize(w, &x_deg) else { return SparseVec::new() };
            let mut b = VecBuilder::new();
            for (a, c) in data.map[*m].entries() {
                let key = (data.target_basis[*a].clone(), sw.gens.clone());
                b.add(target_basis.get_index_of(&key).expect("within truncation"), c * sw.sign());
            }
            b.finish()
        })
        .collect();
    Ok(DerivedEnvelope { source, source_basis: basis, target, target_basis, map })
}

/// Betti comparison of `U(Ω_κA^¡) → U(A)` on filtered strata `≤ max_weight`.
pub fn derived_enveloping_check(spec: SymplecticAlgebraSpec, max_weight: usize) -> Result<BettiReport, EnvelopingError> {
    let env = derived_envelope(spec, max_weight)?;
    env.source.check_square_zero().map_err(|w| EnvelopingError::DifferentialSquareNonzero(w.residue))?;
    quasi_iso_check(&env.map, &env.source, &env.target, max_weight).map_err(|w| EnvelopingError::NotAMorphism(w.residue))
}
