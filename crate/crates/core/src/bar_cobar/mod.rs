//! Cobar constructions of curved coalgebras, bar constructions of
//! semi-augmented algebras, twisting morphisms and Betti comparisons.

pub mod bar;
pub mod complex;
pub mod free_pois;
pub mod twisting;

use indexmap::IndexSet;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::curved_coalgebra::CurvedCoalgebraData;
use crate::graded::{comb_add, comb_axpy, is_odd, MonoComb};
use crate::qlinalg::{qf, sign_scalar, Scalar, SparseVec};

pub use complex::{quasi_iso_check, BettiReport, BettiRow, ChainMapWitness, FilteredComplex};
pub use free_pois::{FreeLie, FreePoisson};

#[derive(Debug, Error)]
pub enum BarCobarError {
    #[error("d² ≠ 0 on the {component} component, basis element {basis_index} (weight {weight}): {residue}")]
    DifferentialSquareNonzero { component: String, basis_index: usize, weight: usize, residue: String },
    #[error("not a chain map on basis element {basis_index}: {residue}")]
    NotAChainMap { basis_index: usize, residue: String },
    #[error("curved coalgebra axiom violated: {0}")]
    AxiomViolation(String),
    #[error("the coalgebra is not over a unital Poisson-type operad: {0}")]
    UnsupportedOperad(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

impl From<ChainMapWitness> for BarCobarError {
    fn from(w: ChainMapWitness) -> Self {
        BarCobarError::NotAChainMap { basis_index: w.basis_index, residue: w.residue }
    }
}

/// Algebras receiving Poisson morphisms out of a cobar construction.
pub trait PoissonTarget {
    fn mul(&self, a: &MonoComb, b: &MonoComb) -> MonoComb;
    fn bracket(&self, a: &MonoComb, b: &MonoComb) -> MonoComb;
}

impl PoissonTarget for FreePoisson {
    fn mul(&self, a: &MonoComb, b: &MonoComb) -> MonoComb {
        FreePoisson::mul(self, a, b)
    }

    fn bracket(&self, a: &MonoComb, b: &MonoComb) -> MonoComb {
        FreePoisson::bracket(self, a, b)
    }
}

/// `Ω(C) = uPois_n(Σ⁻¹C)` truncated by weight, realized as `S(Σ^{1−n}L(Z))`
/// with one Lie generator `z_c` of degree `|c| + n − 2` per basis element of `C`.
pub struct CobarComplex {
    pub n: i64,
    pub algebra: FreePoisson,
    pub monomials: IndexSet<Vec<usize>>,
    /// The summands as derivations: `d_Ω = d₀ + d₁ − d₂`, the sign of `d₀`
    /// being the one for which `f_β d_Ω = d_A f_β` is the equation
    /// `∂β + ⋆β = Θ` on generators.
    pub d0: Vec<SparseVec>,
    pub d1: Vec<SparseVec>,
    pub d2: Vec<SparseVec>,
    pub complex: FilteredComplex,
}

/// The weight components of `d_Ω²` that vanish separately.
#[derive(Clone, Debug, Serialize)]
pub struct SummandReport {
    pub components: Vec<(String, bool)>,
}

impl SummandReport {
    pub fn passed(&self) -> bool {
        self.components.iter().all(|(_, ok)| *ok)
    }
}

pub(crate) fn op_role(c: &CurvedCoalgebraData, op: u8) -> Result<bool, BarCobarError> {
    match c.operad.generators[op as usize].id.as_str() {
        "mu" => Ok(false),
        "lambda" => Ok(true),
        other => Err(BarCobarError::UnsupportedOperad(format!("generator {other}"))),
    }
}

/// Builds the cobar construction up to `max_weight`.
pub fn cobar(c: &CurvedCoalgebraData, n: i64, max_weight: usize) -> Result<CobarComplex, BarCobarError> {
    let zdeg: Vec<i64> = c.degrees.iter().map(|d| d + n - 2).collect();
    let lie = FreeLie::new(zdeg, c.weights.clone(), max_weight);
    let algebra = FreePoisson::new(n, lie);
    let gen: Vec<usize> = (0..c.dim()).map(|z| algebra.lie.generator_index(z)).collect();
    let sz = |z: usize| -> MonoComb { std::iter::once((vec![gen[z]], Scalar::one())).collect() };

    let mut roles = Vec::new();
    for op in 0..c.operad.generators.len() {
        roles.push(op_role(c, op as u8)?);
    }
    let half = qf(1, 2);
    let on0 = |z: usize| -> MonoComb {
        let mut m = MonoComb::new();
        comb_add(&mut m, Vec::new(), c.curvature[z].clone());
        m
    };
    let on1 = |z: usize| -> MonoComb {
        let mut m = MonoComb::new();
        for (k, x) in c.differential[z].entries() {
            comb_axpy(&mut m, &-x.clone(), &sz(*k));
        }
        m
    };
    let on2 = |z: usize| -> MonoComb {
        let mut m = MonoComb::new();
        for t in &c.coproduct[z] {
            if c.weights[t.left] + c.weights[t.right] > max_weight {
                continue;
            }
            let sign = sign_scalar(is_odd(c.degrees[t.left]));
            let (a, b) = (sz(t.left), sz(t.right));
            let v = if roles[t.op as usize] { algebra.bracket(&a, &b) } else { algebra.mul(&a, &b) };
            comb_axpy(&mut m, &(&t.coeff * &half * sign), &v);
        }
        m
    };
    let monomials: IndexSet<Vec<usize>> = algebra.monomials().into_iter().collect();
    let extend = |on: &dyn Fn(usize) -> MonoComb| -> Vec<SparseVec> {
        let gv = algebra.extend_derivation(on);
        monomials
            .iter()
            .map(|m| {
                let v = algebra.derivation_on_monomial(m, &gv);
                SparseVec::from_pairs(v.into_iter().map(|(mm, x)| (monomials.get_index_of(&mm).expect("monomial in range"), x)))
            })
            .collect()
    };
    let d0 = extend(&on0);
    let d1 = extend(&on1);
    let d2 = extend(&on2);
    let total: Vec<SparseVec> = (0..monomials.len()).map(|i| d1[i].add(&d0[i]).sub(&d2[i])).collect();
    let complex = FilteredComplex {
        weights: monomials.iter().map(|m| algebra.weight(m)).collect(),
        degrees: monomials.iter().map(|m| algebra.degree(m)).collect(),
        differential: total,
    };
    Ok(CobarComplex { n, algebra, monomials, d0, d1, d2, complex })
}

impl CobarComplex {
    /// The five weight components of `d_Ω² = 0`, each checked on its own.
    /// With `d_Ω = d₀ + d₁ − d₂` the middle one reads `d₁² − d₀d₂ − d₂d₀`.
    pub fn check_summands(&self) -> SummandReport {
        use complex::{add_maps, compose, sub_maps};
        let zero = |m: &[SparseVec]| m.iter().all(SparseVec::is_zero);
        let (d0, d1, d2) = (&self.d0, &self.d1, &self.d2);
        let comps = vec![
            ("d0 d0".to_string(), zero(&compose(d0, d0))),
            ("d1 d0 + d0 d1".to_string(), zero(&add_maps(&compose(d1, d0), &compose(d0, d1)))),
            (
                "d1 d1 - d0 d2 - d2 d0".to_string(),
                zero(&sub_maps(&compose(d1, d1), &add_maps(&compose(d0, d2), &compose(d2, d0)))),
            ),
            ("d1 d2 + d2 d1".to_string(), zero(&add_maps(&compose(d1, d2), &compose(d2, d1)))),
            ("d2 d2".to_string(), zero(&compose(d2, d2))),
        ];
        SummandReport { components: comps }
    }

    /// The algebra morphism `Ω → T` determined by values on the generators `s z_c`.
    pub fn extend_morphism<T: PoissonTarget>(&self, target: &T, on_generators: &dyn Fn(usize) -> MonoComb) -> Vec<MonoComb> {
        let fp = &self.algebra;
        let m = fp.lie.dim();
        let mut vals: Vec<MonoComb> = vec![MonoComb::new(); m];
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&i| fp.lie.weight(i));
        let lin = |x: &SparseVec, vals: &[MonoComb]| {
            let mut out = MonoComb::new();
            for (k, c) in x.entries() {
                comb_axpy(&mut out, c, &vals[*k]);
            }
            out
        };
        for i in order {
            vals[i] = match fp.lie.split(i) {
                None => {
                    let crate::operad_core::Sym::Leaf(z) = fp.lie.tree(i)[0] else { unreachable!() };
                    on_generators(z as usize)
                }
                Some((a, b)) => {
                    let deg_a = a.entries().first().map(|(k, _)| fp.lie.degree(*k)).unwrap_or(0);
                    let pre = sign_scalar(is_odd((1 - self.n) * deg_a));
                    let t = target.bracket(&lin(&a, &vals), &lin(&b, &vals));
                    let mut out = MonoComb::new();
                    comb_axpy(&mut out, &pre, &t);
                    out
                }
            };
        }
        self.monomials
            .iter()
            .map(|mono| {
                let mut acc: MonoComb = std::iter::once((Vec::new(), Scalar::one())).collect();
                for &g in mono {
                    acc = target.mul(&acc, &vals[g]);
                }
                acc
            })
            .collect()
    }
}

/// Rescales a combination.
pub fn scaled(x: &MonoComb, c: &Scalar) -> MonoComb {
    let mut out = MonoComb::new();
    if !c.is_zero() {
        comb_axpy(&mut out, c, x);
    }
    out
}
