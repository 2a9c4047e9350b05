//! The symplectic Poisson `n`-algebra `A_{n;D}`: polynomials in `x_i` (degree
//! 0) and `ξ_i` (degree `1 − n`) with `{x_i, ξ_j} = δ_{ij}`, its Koszul dual
//! curved coalgebra, its cobar resolution and the Koszulity check.

use indexmap::IndexSet;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::bar_cobar::bar::SemiAugmentedAlgebra;
use crate::bar_cobar::{cobar, quasi_iso_check, BarCobarError, BettiReport, CobarComplex, FilteredComplex, PoissonTarget, SummandReport};
use crate::curved_coalgebra::{CoproductTerm, CurvedCoalgebraData, QlcPresentation};
use crate::graded::{
    comb_add, comb_mul, is_odd, leibniz_bracket, monomial, sym_words, unshuffles, word_degree, MonoComb,
};
use crate::operad_core::{upois_n, QlcRelation, Sym};
use crate::qlinalg::{q, sign_scalar, Scalar, SparseVec};

/// Parameters of `A_{n;D}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SymplecticAlgebraSpec {
    pub n: i64,
    pub d: usize,
}

impl SymplecticAlgebraSpec {
    pub fn new(n: i64, d: usize) -> Self {
        SymplecticAlgebraSpec { n, d }
    }

    /// Degrees of `x_1..x_D, ξ_1..ξ_D` in that order.
    pub fn generator_degrees(&self) -> Vec<i64> {
        let mut v = vec![0; self.d];
        v.extend(std::iter::repeat(1 - self.n).take(self.d));
        v
    }

    pub fn generator_names(&self) -> Vec<String> {
        let mut v: Vec<String> = (1..=self.d).map(|i| format!("x{i}")).collect();
        v.extend((1..=self.d).map(|i| format!("xi{i}")));
        v
    }

    /// Degrees of `Σ^n V`: `Σ^n x_i` has degree `n`, `Σ^n ξ_i` degree 1.
    pub fn suspended_degrees(&self) -> Vec<i64> {
        self.generator_degrees().iter().map(|d| d + self.n).collect()
    }

    /// Index of the partner generator under `{x_i, ξ_i} = 1`.
    pub fn partner(&self, v: usize) -> usize {
        if v < self.d {
            v + self.d
        } else {
            v - self.d
        }
    }
}

/// The QLC presentation over `uPois_n`: all brackets of generators with
/// `{x_i, ξ_j} − δ_{ij}𝟙`.
pub fn build_a(spec: SymplecticAlgebraSpec) -> QlcPresentation {
    let operad = upois_n(spec.n);
    let lambda = operad.generator_index("lambda").unwrap() as u8;
    let degrees = spec.generator_degrees();
    let g = operad.grading().with_leaves(degrees.clone());
    let nv = degrees.len();
    let mut relations = Vec::new();
    for a in 0..nv {
        for b in a..nv {
            let t = vec![Sym::Op(lambda), Sym::Leaf(a as u16), Sym::Leaf(b as u16)];
            // Skip brackets that vanish by symmetry.
            if g.canonical(&t).is_none() {
                continue;
            }
            let constant = if a < spec.d && b == a + spec.d { q(-1) } else { Scalar::zero() };
            relations.push(QlcRelation {
                quadratic: std::iter::once((t, Scalar::one())).collect(),
                linear: Default::default(),
                constant,
            });
        }
    }
    QlcPresentation { operad, generator_names: spec.generator_names(), generator_degrees: degrees, relations }
}

/// Polynomial Poisson algebra on `x_i, ξ_i` with `{x_i, ξ_j} = δ_{ij}`, or with
/// zero bracket for the quadratic reduction `Com(V)`.
#[derive(Clone, Debug)]
pub struct PolyAlgebra {
    pub spec: SymplecticAlgebraSpec,
    pub degrees: Vec<i64>,
    pub with_bracket: bool,
}

impl PolyAlgebra {
    pub fn new(spec: SymplecticAlgebraSpec) -> Self {
        PolyAlgebra { spec, degrees: spec.generator_degrees(), with_bracket: true }
    }

    /// The commutative algebra `qA = Com(V)`.
    pub fn quadratic(spec: SymplecticAlgebraSpec) -> Self {
        PolyAlgebra { spec, degrees: spec.generator_degrees(), with_bracket: false }
    }

    pub fn generators(&self) -> usize {
        self.degrees.len()
    }

    pub fn unit(&self) -> MonoComb {
        monomial(Vec::new())
    }

    pub fn generator(&self, v: usize) -> MonoComb {
        monomial(vec![v])
    }

    pub fn mul(&self, a: &MonoComb, b: &MonoComb) -> MonoComb {
        comb_mul(a, b, &self.degrees)
    }

    fn gen_bracket(&self, a: usize, b: usize) -> MonoComb {
        let d = self.spec.d;
        if !self.with_bracket {
            return MonoComb::new();
        }
        if a < d && b == a + d {
            monomial(Vec::new())
        } else if a >= d && b + d == a {
            // {ξ, x} = (−1)^{n + |x||ξ|} {x, ξ} with |x| = 0.
            let mut m = MonoComb::new();
            comb_add(&mut m, Vec::new(), sign_scalar(is_odd(self.spec.n)));
            m
        } else {
            MonoComb::new()
        }
    }

    pub fn bracket(&self, a: &MonoComb, b: &MonoComb) -> MonoComb {
        let mut out = MonoComb::new();
        let mut gb = |x: usize, y: usize| self.gen_bracket(x, y);
        for (ma, ca) in a {
            for (mb, cb) in b {
                let t = leibniz_bracket(ma, mb, &self.degrees, self.spec.n, &mut gb);
                for (m, x) in t {
                    comb_add(&mut out, m, x * ca * cb);
                }
            }
        }
        out
    }

    /// Semi-augmentation: the constant term.
    pub fn epsilon(&self, a: &MonoComb) -> Scalar {
        a.get(&Vec::new()).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn degree(&self, m: &[usize]) -> i64 {
        word_degree(m, &self.degrees)
    }

    /// Monomials of polynomial weight `0..=w`, by weight.
    pub fn monomials_upto(&self, w: usize) -> IndexSet<Vec<usize>> {
        (0..=w).flat_map(|k| sym_words(&self.degrees, k)).collect()
    }

    pub fn to_vector(&self, basis: &IndexSet<Vec<usize>>, a: &MonoComb) -> SparseVec {
        SparseVec::from_pairs(a.iter().map(|(m, x)| (basis.get_index_of(m).expect("monomial within truncation"), x.clone())))
    }
}

/// Number of graded-symmetric monomials of weight `w` and each degree.
pub fn monomial_count(degrees: &[i64], w: usize) -> std::collections::BTreeMap<i64, usize> {
    let mut out = std::collections::BTreeMap::new();
    for m in sym_words(degrees, w) {
        *out.entry(word_degree(&m, degrees)).or_insert(0) += 1;
    }
    out
}

/// `qA^¡ = Σ^{1−n} S̄^c(Σ^n V)` up to weight `max_weight`, with `d = 0`,
/// `θ(Σ^n x_i ∨ Σ^n ξ_i) = −1` and the shuffle decomposition labeled by the bracket.
pub fn build_a_koszul_dual(spec: SymplecticAlgebraSpec, max_weight: usize) -> CurvedCoalgebraData {
    let operad = upois_n(spec.n);
    let lambda = operad.generator_index("lambda").unwrap() as u8;
    let ydeg = spec.suspended_degrees();
    let names = spec.generator_names();
    let mut words: IndexSet<Vec<usize>> = IndexSet::new();
    for w in 1..=max_weight {
        words.extend(sym_words(&ydeg, w));
    }
    let n = words.len();
    let mut curvature = vec![Scalar::zero(); n];
    let mut coproduct = Vec::with_capacity(n);
    for (i, u) in words.iter().enumerate() {
        if u.len() == 2 && u[0] < spec.d && u[1] == u[0] + spec.d {
            curvature[i] = q(-1);
        }
        let mut terms = Vec::new();
        if u.len() >= 2 {
            for (l, r, neg) in unshuffles(u, &ydeg) {
                let sign = neg ^ shuffle_suspension_sign(spec.n, word_degree(&l, &ydeg));
                terms.push(CoproductTerm {
                    op: lambda,
                    left: words.get_index_of(&l).unwrap(),
                    right: words.get_index_of(&r).unwrap(),
                    coeff: sign_scalar(sign),
                });
            }
        }
        coproduct.push(terms);
    }
    CurvedCoalgebraData {
        operad,
        labels: words.iter().map(|u| u.iter().map(|&v| format!("s{}", names[v])).collect::<Vec<_>>().join("∨")).collect(),
        weights: words.iter().map(Vec::len).collect(),
        degrees: words.iter().map(|u| word_degree(u, &ydeg) + 1 - spec.n).collect(),
        differential: vec![SparseVec::new(); n],
        curvature,
        coproduct,
        max_weight,
    }
}

/// Sign from passing the `Σ^{1−n}` shifts through the shuffle coproduct.
fn shuffle_suspension_sign(n: i64, left_degree: i64) -> bool {
    is_odd((1 - n) * left_degree)
}

impl PoissonTarget for PolyAlgebra {
    fn mul(&self, a: &MonoComb, b: &MonoComb) -> MonoComb {
        PolyAlgebra::mul(self, a, b)
    }

    fn bracket(&self, a: &MonoComb, b: &MonoComb) -> MonoComb {
        PolyAlgebra::bracket(self, a, b)
    }
}

/// The twisting morphism `ϰ`: `Σ^{1−n}Σ^n v ↦ v` on weight one, zero elsewhere.
pub fn varkappa(c: &CurvedCoalgebraData, z: usize) -> MonoComb {
    if c.weights[z] == 1 {
        let idx: usize = z;
        monomial(vec![idx])
    } else {
        MonoComb::new()
    }
}

/// The cobar resolution with `f_ϰ : Ω_κA^¡ → A` (or `→ qA` when `curved` is false).
pub struct KoszulityData {
    pub dual: CurvedCoalgebraData,
    pub cobar: CobarComplex,
    pub target: FilteredComplex,
    pub target_basis: IndexSet<Vec<usize>>,
    pub map: Vec<SparseVec>,
}

/// Builds `Ω_κA^¡ → A` up to weight `w`; with `curved = false` the curvature
/// is dropped and the target is `qA = Com(V)`.
pub fn koszulity_data(spec: SymplecticAlgebraSpec, w: usize, curved: bool) -> Result<KoszulityData, BarCobarError> {
    let mut dual = build_a_koszul_dual(spec, w);
    if !curved {
        dual.curvature.iter_mut().for_each(|x| *x = Scalar::zero());
    }
    let cobar = cobar(&dual, spec.n, w)?;
    let alg = if curved { PolyAlgebra::new(spec) } else { PolyAlgebra::quadratic(spec) };
    let basis = alg.monomials_upto(w);
    let images = cobar.extend_morphism(&alg, &|z| varkappa(&dual, z));
    let map = images.iter().map(|m| alg.to_vector(&basis, m)).collect();
    let target = FilteredComplex::zero_differential(
        basis.iter().map(Vec::len).collect(),
        basis.iter().map(|m| alg.degree(m)).collect(),
    );
    Ok(KoszulityData { dual, cobar, target, target_basis: basis, map })
}

#[derive(Clone, Debug, Serialize)]
pub struct KoszulityReport {
    pub n: i64,
    pub d: usize,
    pub max_weight: usize,
    pub square_zero: bool,
    pub summands: SummandReport,
    pub curved: BettiReport,
    pub quadratic: BettiReport,
}

impl KoszulityReport {
    pub fn passed(&self) -> bool {
        self.square_zero && self.summands.passed() && self.curved.passed() && self.quadratic.passed()
    }
}

/// Runs the cobar resolution, checks `d_Ω² = 0` summand by summand and
/// compares Betti tables of `f_ϰ` with and without curvature.
pub fn verify_koszulity(spec: SymplecticAlgebraSpec, w: usize) -> Result<KoszulityReport, BarCobarError> {
    let curved = koszulity_data(spec, w, true)?;
    let square_zero = curved.cobar.complex.check_square_zero().is_ok();
    let summands = curved.cobar.check_summands();
    let curved_report = quasi_iso_check(&curved.map, &curved.cobar.complex, &curved.target, w)?;
    let flat = koszulity_data(spec, w, false)?;
    let quadratic = quasi_iso_check(&flat.map, &flat.cobar.complex, &flat.target, w)?;
    Ok(KoszulityReport {
        n: spec.n,
        d: spec.d,
        max_weight: w,
        square_zero,
        summands,
        curved: curved_report,
        quadratic,
    })
}

impl SemiAugmentedAlgebra for PolyAlgebra {
    fn arity_n(&self) -> i64 {
        self.spec.n
    }

    fn augmentation_basis(&self, max_weight: usize) -> IndexSet<Vec<usize>> {
        (1..=max_weight).flat_map(|k| sym_words(&self.degrees, k)).collect()
    }

    fn degree(&self, m: &[usize]) -> i64 {
        PolyAlgebra::degree(self, m)
    }
}
