//! Twisting morphisms `β : C → A` and the two adjunction bijections.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::bar::BarConstruction;
use super::{op_role, BarCobarError, CobarComplex, PoissonTarget};
use crate::curved_coalgebra::{CurvedCoalgebraData, TreeRealization};
use crate::graded::{comb_axpy, is_odd, MonoComb};
use crate::operad_core::{LinComb, Sym, Tree};
use crate::qlinalg::{qf, sign_scalar, Scalar, SparseVec};


/// `∂β + ⋆β − Θ^A` on basis element `i`, with `d_A` given as a map.
///
/// Under the cobar convention `d_Ω = d₀ + d₁ − d₂` this is exactly the
/// failure of `f_β` to commute with the differentials on `Σ⁻¹c_i`.
pub fn mc_residue<T: PoissonTarget>(
    c: &CurvedCoalgebraData,
    target: &T,
    d_a: &dyn Fn(&MonoComb) -> MonoComb,
    beta: &[MonoComb],
    i: usize,
) -> Result<MonoComb, BarCobarError> {
    let half = qf(1, 2);
    let mut r = MonoComb::new();
    if !c.curvature[i].is_zero() {
        comb_axpy(&mut r, &c.curvature[i], &std::iter::once((Vec::new(), Scalar::one())).collect());
    }
    for (k, x) in c.differential[i].entries() {
        comb_axpy(&mut r, &-x.clone(), &beta[*k]);
    }
    for t in &c.coproduct[i] {
        let (a, b) = (&beta[t.left], &beta[t.right]);
        if a.is_empty() || b.is_empty() {
            continue;
        }
        let v = if op_role(c, t.op)? { target.bracket(a, b) } else { target.mul(a, b) };
        let s = sign_scalar(is_odd(c.degrees[t.left]));
        comb_axpy(&mut r, &-(&t.coeff * &half * s), &v);
    }
    comb_axpy(&mut r, &-Scalar::one(), &d_a(&beta[i]));
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistingReport {
    pub checked: usize,
    /// Basis elements where the equation fails, with the residue.
    pub failures: Vec<(usize, String)>,
}

impl TwistingReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluates the curved Maurer–Cartan equation on every basis element of `C`.
pub fn check_twisting_morphism<T: PoissonTarget>(
    c: &CurvedCoalgebraData,
    target: &T,
    d_a: &dyn Fn(&MonoComb) -> MonoComb,
    beta: &[MonoComb],
) -> Result<TwistingReport, BarCobarError> {
    let mut failures = Vec::new();
    for i in 0..c.dim() {
        let r = mc_residue(c, target, d_a, beta, i)?;
        if !r.is_empty() {
            failures.push((i, format!("{r:?}")));
        }
    }
    Ok(TwistingReport { checked: c.dim(), failures })
}

/// `Hom(Ω_φC, A) → Tw(C, A)`: extends `β` to `f_β` and restricts to the generators.
pub fn cobar_roundtrip<T: PoissonTarget>(cobar: &CobarComplex, target: &T, beta: &[MonoComb]) -> bool {
    let images = cobar.extend_morphism(target, &|z| beta[z].clone());
    (0..beta.len()).all(|z| {
        let g = vec![cobar.algebra.lie.generator_index(z)];
        cobar.monomials.get_index_of(&g).map(|k| images[k] == beta[z]).unwrap_or(false)
    })
}

/// The curved coalgebra morphism `g_β : C → B_φA` for `β` supported on the
/// arity-one part of a tree-realized `C`: the leaves are replaced by `β̄`.
pub struct CoalgebraMorphism {
    /// `g(c_i)` in the basis of the bar construction.
    pub columns: Vec<SparseVec>,
}

pub fn bar_morphism(
    c: &CurvedCoalgebraData,
    realization: &TreeRealization,
    bar: &BarConstruction,
    beta: &[MonoComb],
) -> Result<CoalgebraMorphism, BarCobarError> {
    let leaf_value: BTreeMap<u16, usize> = (0..c.dim())
        .filter(|&i| c.weights[i] == 1)
        .map(|i| {
            let t = &realization.trees[realization.basis_vectors[i].entries()[0].0];
            let Sym::Leaf(v) = t[0] else { unreachable!() };
            (v, i)
        })
        .collect();
    if (0..c.dim()).any(|i| c.weights[i] != 1 && !beta[i].is_empty()) {
        return Err(BarCobarError::Unsupported("β must vanish outside arity one".into()));
    }
    let sg = &bar.realization.grading;
    let mut columns = Vec::with_capacity(c.dim());
    for i in 0..c.dim() {
        let mut out = LinComb::new();
        for (t, x) in realization.to_comb(&realization.basis_vectors[i]) {
            // Multilinear substitution of the leaves by the Ā-part of β.
            let mut partial: Vec<(Tree, Scalar)> = vec![(Vec::new(), x)];
            for s in &t {
                let next_syms: Vec<(Sym, Scalar)> = match s {
                    Sym::Leaf(v) => beta[leaf_value[v]]
                        .iter()
                        .filter(|(m, _)| !m.is_empty())
                        .map(|(m, y)| {
                            let k = bar.abar.get_index_of(m).expect("β lands in the truncation");
                            (Sym::Leaf(k as u16), y.clone())
                        })
                        .collect(),
                    other => vec![(*other, Scalar::one())],
                };
                partial = partial
                    .iter()
                    .flat_map(|(p, a)| {
                        next_syms.iter().map(move |(s, y)| {
                            let mut q = p.clone();
                            q.push(*s);
                            (q, a * y)
                        })
                    })
                    .collect();
            }
            for (nt, y) in partial {
                sg.push(&mut out, &nt, y);
            }
        }
        let k = c.weights[i];
        let col = bar
            .coordinates(k, &out)
            .ok_or_else(|| BarCobarError::Unsupported(format!("g_β(c_{i}) leaves the bar construction")))?;
        columns.push(col);
    }
    Ok(CoalgebraMorphism { columns })
}

#[derive(Clone, Debug, Serialize)]
pub struct MorphismReport {
    pub commutes_with_curvature: bool,
    pub commutes_with_differential: bool,
    pub commutes_with_decomposition: bool,
    /// `β` is recovered as the arity-one corestriction of `g_β`.
    pub recovers_beta: bool,
}

impl MorphismReport {
    pub fn passed(&self) -> bool {
        self.commutes_with_curvature
            && self.commutes_with_differential
            && self.commutes_with_decomposition
            && self.recovers_beta
    }
}

/// Checks that `g_β` is a morphism of curved coalgebras and that projecting
/// it to `ΣĀ` gives back `β`.
pub fn check_bar_morphism(
    c: &CurvedCoalgebraData,
    bar: &BarConstruction,
    g: &CoalgebraMorphism,
    beta: &[MonoComb],
) -> MorphismReport {
    let b = &bar.coalgebra;
    let apply = |v: &SparseVec, cols: &[SparseVec]| {
        let mut out = SparseVec::new();
        for (k, x) in v.entries() {
            out = out.axpy(x, &cols[*k]);
        }
        out
    };
    let theta_b = |v: &SparseVec| -> Scalar { v.entries().iter().map(|(k, x)| x * &b.curvature[*k]).sum() };
    let mut curv = true;
    let mut diff = true;
    let mut deco = true;
    let mut recover = true;
    for i in 0..c.dim() {
        let gi = &g.columns[i];
        if theta_b(gi) != c.curvature[i] {
            curv = false;
        }
        if apply(gi, &b.differential) != apply(&c.differential[i], &g.columns) {
            diff = false;
        }
        // (g ⊗ g)Δ versus Δ g, as tensors over (op, left, right).
        let mut lhs: BTreeMap<(u8, usize, usize), Scalar> = BTreeMap::new();
        for t in &c.coproduct[i] {
            for (l, x) in g.columns[t.left].entries() {
                for (r, y) in g.columns[t.right].entries() {
                    *lhs.entry((t.op, *l, *r)).or_insert_with(Scalar::zero) += &t.coeff * x * y;
                }
            }
        }
        let mut rhs: BTreeMap<(u8, usize, usize), Scalar> = BTreeMap::new();
        for (k, x) in gi.entries() {
            for t in &b.coproduct[*k] {
                *rhs.entry((t.op, t.left, t.right)).or_insert_with(Scalar::zero) += &t.coeff * x;
            }
        }
        lhs.retain(|_, x| !x.is_zero());
        rhs.retain(|_, x| !x.is_zero());
        if lhs != rhs {
            deco = false;
        }
        // Arity-one corestriction.
        let mut proj = MonoComb::new();
        for (k, x) in gi.entries() {
            if bar.arities[*k] == 1 {
                let t = &bar.realization.trees[b_leading(bar, *k)];
                let Sym::Leaf(l) = t[0] else { unreachable!() };
                let coeff = x * &bar.realization.basis_vectors[*k].entries()[0].1;
                comb_axpy(&mut proj, &coeff, &std::iter::once((bar.abar[l as usize].clone(), Scalar::one())).collect());
            }
        }
        let mut expected = beta[i].clone();
        expected.remove(&Vec::new());
        if proj != expected {
            recover = false;
        }
    }
    MorphismReport {
        commutes_with_curvature: curv,
        commutes_with_differential: diff,
        commutes_with_decomposition: deco,
        recovers_beta: recover,
    }
}

fn b_leading(bar: &BarConstruction, k: usize) -> usize {
    bar.realization.basis_vectors[k].entries()[0].0
}

/// The map `C → A` that is `s v ↦ on_leaf(v)` on the arity-one part of a
/// tree-realized coalgebra and zero elsewhere.
pub fn arity_one_twisting(
    c: &CurvedCoalgebraData,
    realization: &TreeRealization,
    on_leaf: &dyn Fn(usize) -> MonoComb,
) -> Vec<MonoComb> {
    (0..c.dim())
        .map(|i| {
            if c.weights[i] != 1 {
                return MonoComb::new();
            }
            let (k, x) = &realization.basis_vectors[i].entries()[0];
            let Sym::Leaf(v) = realization.trees[*k][0] else { unreachable!() };
            let mut out = MonoComb::new();
            comb_axpy(&mut out, x, &on_leaf(v as usize));
            out
        })
        .collect()
}
