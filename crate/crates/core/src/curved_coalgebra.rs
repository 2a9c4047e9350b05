//! Curved coalgebras over `𝒫^¡` for a binary unital operad, QLC algebra
//! presentations, quadratic reduction, the map α, and the Koszul dual curved
//! coalgebra of a QLC algebra.

use std::collections::{BTreeMap, HashMap};

use indexmap::IndexSet;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::graded::is_odd;
use crate::koszul_dual::{koszul_dual_stratum, suspended_grading};
use crate::operad_core::{
    children, free_algebra_trees, leaf_count, Grading, LinComb, OperadError, OperadPresentation, QlcRelation,
    Sym, Tree,
};
use crate::qlinalg::{kernel_basis, q, Echelon, Scalar, SparseMatrix, SparseVec, VecBuilder};

#[derive(Debug, Error)]
pub enum CoalgebraError {
    #[error(transparent)]
    Operad(#[from] OperadError),
    #[error("the relations are not the graph of a map qS → 𝕜𝟙 ⊕ V: {0}")]
    NotAGraph(String),
    #[error("the relation ideal is not maximal within weight two: {0}")]
    NotMaximal(String),
    #[error("curved coalgebra axiom violated: {0}")]
    AxiomViolation(String),
    #[error("the star product leaves the coalgebra on basis element {0}")]
    ImageEscapesCoalgebra(usize),
}

/// One term `coeff · e ⊗ c_left ⊗ c_right` of the binary decomposition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoproductTerm {
    pub op: u8,
    pub left: usize,
    pub right: usize,
    #[serde(serialize_with = "crate::curved_coalgebra::ser_scalar")]
    pub coeff: Scalar,
}

pub fn ser_scalar<S: serde::Serializer>(x: &Scalar, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// A curved coalgebra truncated by weight, given on a homogeneous basis.
///
/// The binary decomposition is stored as a `Σ₂`-invariant tensor: both
/// orderings of every splitting are listed, and the decomposition map itself
/// is one half of the stored tensor.
#[derive(Clone, Debug)]
pub struct CurvedCoalgebraData {
    pub operad: OperadPresentation,
    pub labels: Vec<String>,
    pub weights: Vec<usize>,
    pub degrees: Vec<i64>,
    /// `differential[i]` is `d(c_i)`.
    pub differential: Vec<SparseVec>,
    /// `curvature[i]` is `θ(c_i)`.
    pub curvature: Vec<Scalar>,
    pub coproduct: Vec<Vec<CoproductTerm>>,
    pub max_weight: usize,
}

impl CurvedCoalgebraData {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn stratum(&self, w: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.weights[i] == w).collect()
    }

    pub fn stratum_dims(&self) -> Vec<usize> {
        (0..=self.max_weight).map(|w| self.stratum(w).len()).collect()
    }

    fn unit_action(&self, op: u8) -> Scalar {
        self.operad.unit_action.as_ref().map(|u| u[op as usize].clone()).unwrap_or_else(Scalar::zero)
    }
}

/// `⋆(θ)`: decompose, send one factor through the curvature, and act by the unit.
///
/// With the invariant storage of the decomposition, both slots together give
/// `Σ coeff · u_e · θ(c_left) · c_right`.
pub fn star_product(c: &CurvedCoalgebraData, curvature: &[Scalar]) -> Vec<SparseVec> {
    (0..c.dim())
        .map(|i| {
            let mut b = VecBuilder::new();
            for t in &c.coproduct[i] {
                let u = c.unit_action(t.op);
                let th = &curvature[t.left];
                if u.is_zero() || th.is_zero() {
                    continue;
                }
                b.add(t.right, &t.coeff * &u * th);
            }
            b.finish()
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomViolationWitness {
    pub identity: String,
    pub basis_index: usize,
    pub label: String,
    pub weight: usize,
    pub residue: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub checked: usize,
    pub stratum_dims: Vec<usize>,
    pub violations: Vec<AxiomViolationWitness>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Evaluates `d² = ⋆(θ)` and `θ ∘ d = 0` on every basis element.
pub fn check_curved_axioms(c: &CurvedCoalgebraData) -> AxiomReport {
    let star = star_product(c, &c.curvature);
    let mut violations = Vec::new();
    for i in 0..c.dim() {
        let mut d2 = VecBuilder::new();
        let mut theta_d = Scalar::zero();
        for (j, x) in c.differential[i].entries() {
            d2.add_vec(&c.differential[*j], x);
            theta_d += x * &c.curvature[*j];
        }
        let residue = d2.finish().sub(&star[i]);
        let witness = |identity: &str, residue: String| AxiomViolationWitness {
            identity: identity.into(),
            basis_index: i,
            label: c.labels[i].clone(),
            weight: c.weights[i],
            residue,
        };
        if !residue.is_zero() {
            violations.push(witness("d^2 = star(theta)", residue.to_string()));
        }
        if !theta_d.is_zero() {
            violations.push(witness("theta d = 0", theta_d.to_string()));
        }
    }
    AxiomReport { checked: c.dim(), stratum_dims: c.stratum_dims(), violations }
}

/// An algebra over a unital binary operad with quadratic-linear-constant relations.
#[derive(Clone, Debug)]
pub struct QlcPresentation {
    pub operad: OperadPresentation,
    pub generator_names: Vec<String>,
    pub generator_degrees: Vec<i64>,
    pub relations: Vec<QlcRelation>,
}

impl QlcPresentation {
    pub fn leaf_grading(&self) -> Grading {
        self.operad.grading().with_leaves(self.generator_degrees.clone())
    }

    /// Canonical quadratic trees `E(V)` indexing the quadratic parts.
    pub fn quadratic_trees(&self) -> IndexSet<Tree> {
        free_algebra_trees(&self.leaf_grading(), 2).into_iter().collect()
    }

    fn quadratic_vector(&self, index: &IndexSet<Tree>, r: &QlcRelation) -> SparseVec {
        let g = self.leaf_grading();
        let mut c = LinComb::new();
        for (t, x) in &r.quadratic {
            g.push(&mut c, t, x.clone());
        }
        SparseVec::from_pairs(c.into_iter().map(|(t, x)| (index.get_index_of(&t).expect("quadratic tree"), x)))
    }

    /// Checks the relation shape and that no nonzero combination of relations
    /// lies in `𝕜𝟙 ⊕ V`.
    pub fn validate(&self) -> Result<(), CoalgebraError> {
        let g = self.leaf_grading();
        for r in &self.relations {
            r.check_shape(&g)?;
        }
        let index = self.quadratic_trees();
        let mut e = Echelon::new();
        for (k, r) in self.relations.iter().enumerate() {
            if !e.insert(&self.quadratic_vector(&index, r)) {
                return Err(CoalgebraError::NotAGraph(format!(
                    "relation {k} has a quadratic part dependent on the previous ones"
                )));
            }
        }
        Ok(())
    }
}

/// The quadratic reduction `(𝒫, V, qS)`: quadratic parts of the relations,
/// over the augmented operad.
#[derive(Clone, Debug)]
pub struct QuadraticReduction {
    pub operad: OperadPresentation,
    pub generator_degrees: Vec<i64>,
    pub relations: Vec<LinComb>,
}

pub fn quadratic_reduction(a: &QlcPresentation) -> QuadraticReduction {
    let g = a.leaf_grading();
    let relations = a
        .relations
        .iter()
        .map(|r| {
            let mut c = LinComb::new();
            for (t, x) in &r.quadratic {
                g.push(&mut c, t, x.clone());
            }
            c
        })
        .filter(|c| !c.is_empty())
        .collect();
    QuadraticReduction { operad: a.operad.augmented(), generator_degrees: a.generator_degrees.clone(), relations }
}

/// `α = α₀ ⊕ α₁ : qS → 𝕜𝟙 ⊕ V`, stored on a basis of `qS`.
#[derive(Clone, Debug)]
pub struct AlphaMap {
    pub qs_basis: Vec<LinComb>,
    pub alpha0: Vec<Scalar>,
    pub alpha1: Vec<BTreeMap<u16, Scalar>>,
}

impl AlphaMap {
    /// `(α₀(X), α₁(X))` for a quadratic combination `X ∈ qS`.
    pub fn evaluate(&self, a: &QlcPresentation, x: &LinComb) -> Option<(Scalar, BTreeMap<u16, Scalar>)> {
        let index = a.quadratic_trees();
        let mut e = Echelon::new();
        for b in &self.qs_basis {
            e.insert(&comb_vector(&index, b));
        }
        let coords = e.coordinates(&comb_vector(&index, x))?;
        let mut a0 = Scalar::zero();
        let mut a1: BTreeMap<u16, Scalar> = BTreeMap::new();
        for (k, c) in coords.entries() {
            a0 += c * &self.alpha0[*k];
            for (v, y) in &self.alpha1[*k] {
                *a1.entry(*v).or_insert_with(Scalar::zero) += c * y;
            }
        }
        a1.retain(|_, y| !y.is_zero());
        Some((a0, a1))
    }
}

fn comb_vector(index: &IndexSet<Tree>, c: &LinComb) -> SparseVec {
    SparseVec::from_pairs(c.iter().map(|(t, x)| (index.get_index_of(t).expect("quadratic tree"), x.clone())))
}

/// Reads `α` off the relations, which must form the graph of a map on `qS`.
pub fn extract_alpha(a: &QlcPresentation) -> Result<AlphaMap, CoalgebraError> {
    a.validate()?;
    let g = a.leaf_grading();
    let mut qs_basis = Vec::new();
    let mut alpha0 = Vec::new();
    let mut alpha1 = Vec::new();
    for r in &a.relations {
        let mut c = LinComb::new();
        for (t, x) in &r.quadratic {
            g.push(&mut c, t, x.clone());
        }
        qs_basis.push(c);
        alpha0.push(r.constant.clone());
        alpha1.push(r.linear.clone());
    }
    let alpha = AlphaMap { qs_basis, alpha0, alpha1 };
    // Reconstruction: X + α(X) recovers every relation.
    for (k, r) in a.relations.iter().enumerate() {
        let (a0, a1) = alpha
            .evaluate(a, &alpha.qs_basis[k])
            .ok_or_else(|| CoalgebraError::NotAGraph(format!("relation {k} outside qS")))?;
        let mut lin = r.linear.clone();
        lin.retain(|_, y| !y.is_zero());
        if a0 != r.constant || a1 != lin {
            return Err(CoalgebraError::NotAGraph(format!("relation {k} is not reconstructed")));
        }
    }
    Ok(alpha)
}

/// Checks that the ideal generated by the relations meets `𝕜𝟙 ⊕ V ⊕ E(V)`
/// exactly in their span, by saturation up to weight three.
pub fn check_ideal_maximality(a: &QlcPresentation) -> Result<(), CoalgebraError> {
    use crate::operad_core::quotient_algebra_stratum;
    let fq = quotient_algebra_stratum(&a.operad, &a.generator_degrees, &a.relations, 2, 3)?;
    let free_dim = 1 + a.generator_degrees.len() + a.quadratic_trees().len();
    let expected = free_dim - a.relations.len();
    if fq.filtered_dims[2] != expected {
        return Err(CoalgebraError::NotMaximal(format!(
            "filtered weight-two quotient has dimension {} instead of {expected}",
            fq.filtered_dims[2]
        )));
    }
    Ok(())
}

/// A coalgebra basis realized on tree monomials in the suspended generators:
/// basis element `i` is the suspension of `basis_vectors[i]` in tree coordinates.
#[derive(Clone, Debug)]
pub struct TreeRealization {
    pub grading: Grading,
    pub trees: IndexSet<Tree>,
    pub basis_vectors: Vec<SparseVec>,
}

impl TreeRealization {
    pub fn to_comb(&self, v: &SparseVec) -> LinComb {
        v.entries().iter().map(|(k, x)| (self.trees[*k].clone(), x.clone())).collect()
    }
}

/// The Koszul dual curved coalgebra `(qA^¡, d, θ)` up to weight `max_weight`,
/// computed as the corelation intersection inside the cofree `𝒫^¡`-coalgebra.
///
/// The basis element of weight `w` is the suspension of a combination of trees
/// with `w` leaves; its degree is the tree degree plus one.
pub fn koszul_dual_coalgebra(a: &QlcPresentation, max_weight: usize) -> Result<CurvedCoalgebraData, CoalgebraError> {
    koszul_dual_realized(a, max_weight).map(|(c, _)| c)
}

/// [`koszul_dual_coalgebra`] together with its tree realization inside `𝒫^¡(V)`.
pub fn koszul_dual_realized(
    a: &QlcPresentation,
    max_weight: usize,
) -> Result<(CurvedCoalgebraData, TreeRealization), CoalgebraError> {
    let alpha = extract_alpha(a)?;
    let red = quadratic_reduction(a);
    let p = &red.operad;
    let sg = suspended_grading(p).with_leaves(a.generator_degrees.clone());
    let g = a.leaf_grading();
    let nv = a.generator_degrees.len();

    // Corelation space ΣqS at the cherries: image of the quadratic relations.
    let cherry_index: IndexSet<Tree> = free_algebra_trees(&sg, 2).into_iter().collect();
    let mut qs_rows = Echelon::new();
    for c in &red.relations {
        let mut sc = LinComb::new();
        // Σ² on a weight-two tree suspends the root vertex in place, so that
        // `θ(sT) = α₀(T)` is what the Maurer–Cartan equation for ϰ requires.
        for (t, x) in c {
            sg.push(&mut sc, t, x.clone());
        }
        qs_rows.insert(&comb_vector(&cherry_index, &sc));
    }
    // A complement projection: coordinates killed by ΣqS are the non-pivot ones
    // after reducing against it.
    let mut trees: IndexSet<Tree> = IndexSet::new();
    let mut strata = vec![Echelon::new()];
    let mut labels = Vec::new();
    let mut weights = Vec::new();
    let mut degrees = Vec::new();
    let mut basis_vectors: Vec<SparseVec> = Vec::new();
    for w in 1..=max_weight {
        let co = koszul_dual_stratum(p, w)?;
        // Spanning set of 𝒫^¡(w) ⊗ V^{⊗w}: substitute generator words into basis trees.
        let mut span = Echelon::new();
        let mut words: Vec<Vec<u16>> = vec![Vec::new()];
        for _ in 0..w {
            words = words
                .into_iter()
                .flat_map(|wd| (0..nv as u16).map(move |v| [wd.clone(), vec![v]].concat()))
                .collect();
        }
        for i in 0..co.dim() {
            let comb = co.basis_comb(i);
            for wd in &words {
                let mut out = LinComb::new();
                for (t, x) in &comb {
                    let subs: Vec<Tree> = wd.iter().map(|&v| vec![Sym::Leaf(v)]).collect();
                    let (neg, st) = sg.substitute(t, &subs);
                    sg.push(&mut out, &st, if neg { -x.clone() } else { x.clone() });
                }
                if out.is_empty() {
                    continue;
                }
                for t in out.keys() {
                    trees.insert(t.clone());
                }
                span.insert(&comb_vector(&trees, &out));
            }
        }
        // Cherry condition: for every context, the cherry part lies in ΣqS.
        let rows: Vec<SparseVec> = span.rows().to_vec();
        let mut images: Vec<SparseVec> = Vec::with_capacity(rows.len());
        let mut ctx_index: HashMap<(Tree, usize), usize> = HashMap::new();
        for row in &rows {
            let mut b = VecBuilder::new();
            for (ti, x) in row.entries() {
                let t = &trees[*ti];
                for (ctx, cherry, neg) in cherry_contexts(&sg, t, nv as u16) {
                    let cv = comb_vector(&cherry_index, &std::iter::once((cherry, q(1))).collect());
                    let residue = qs_rows.reduce(&cv);
                    for (ci, y) in residue.entries() {
                        let next = ctx_index.len();
                        let key = *ctx_index.entry((ctx.clone(), *ci)).or_insert(next);
                        b.add(key, if neg { -(x * y) } else { x * y });
                    }
                }
            }
            images.push(b.finish());
        }
        let m = SparseMatrix::from_columns(ctx_index.len(), &images);
        let mut stratum = Echelon::new();
        for k in kernel_basis(&m) {
            let mut v = VecBuilder::new();
            for (r, c) in k.entries() {
                v.add_vec(&rows[*r], c);
            }
            stratum.insert(&v.finish());
        }
        for (k, row) in stratum.rows().iter().enumerate() {
            let t = &trees[row.entries()[0].0];
            labels.push(format!("w{w}#{k}"));
            weights.push(w);
            degrees.push(sg.degree(t) + 1);
            basis_vectors.push(row.clone());
        }
        strata.push(stratum);
    }

    // Curvature and differential through the weight-two corestriction onto ΣqS.
    let n = basis_vectors.len();
    let mut curvature = vec![Scalar::zero(); n];
    let mut differential = vec![SparseVec::new(); n];
    let index_of_weight1: HashMap<u16, usize> = (0..n)
        .filter(|&i| weights[i] == 1)
        .map(|i| {
            let Sym::Leaf(v) = trees[basis_vectors[i].entries()[0].0][0] else { unreachable!() };
            (v, i)
        })
        .collect();
    for i in 0..n {
        if weights[i] != 2 {
            continue;
        }
        // Desuspend the cherry combination back into qS.
        let mut x = LinComb::new();
        for (ti, c) in basis_vectors[i].entries() {
            g.push(&mut x, &trees[*ti], c.clone());
        }
        let (a0, a1) = alpha
            .evaluate(a, &x)
            .ok_or_else(|| CoalgebraError::AxiomViolation(format!("weight-two element {i} is not in ΣqS")))?;
        curvature[i] = a0;
        differential[i] = SparseVec::from_pairs(a1.into_iter().map(|(v, y)| (index_of_weight1[&v], y)));
    }
    if max_weight > 2 && alpha.alpha1.iter().any(|m| !m.is_empty()) {
        return Err(CoalgebraError::AxiomViolation(
            "linear parts beyond weight two need the coderivation extension, which this model does not build".into(),
        ));
    }
    let coproduct = tree_coproducts(&sg, &trees, &basis_vectors, &weights, &strata)?;
    let unital = a.operad.clone();
    let data = CurvedCoalgebraData {
        operad: unital,
        labels,
        weights,
        degrees,
        differential,
        curvature,
        coproduct,
        max_weight,
    };
    Ok((data, TreeRealization { grading: sg, trees, basis_vectors }))
}

/// Every cherry of `t` with its context (the cherry replaced by a hole leaf
/// `hole`) in canonical form, and the sign relating `t` to the grafting.
fn cherry_contexts(sg: &Grading, t: &[Sym], hole: u16) -> Vec<(Tree, Tree, bool)> {
    let mut out = Vec::new();
    for v in 0..t.len() {
        if !matches!(t[v], Sym::Op(_)) {
            continue;
        }
        let (l, r, end) = children(t, v);
        if !matches!(t[l], Sym::Leaf(_)) || !matches!(t[r], Sym::Leaf(_)) {
            continue;
        }
        let cherry = t[v..end].to_vec();
        let mut ctx = t[..v].to_vec();
        ctx.push(Sym::Leaf(hole));
        ctx.extend_from_slice(&t[end..]);
        let mut hg = sg.clone();
        hg.leaves.resize(hole as usize + 1, 0);
        hg.leaves[hole as usize] = sg.degree(&cherry);
        let Some((neg, c)) = hg.canonical(&ctx) else { continue };
        out.push((c, cherry, neg));
    }
    out
}

/// Root splittings `s e(T₁, T₂) ↦ (−1)^{|T₁|} e ⊗ sT₁ ⊗ sT₂`, expressed in the
/// basis of lower strata and symmetrized over both orderings.
///
/// The basis must be sorted by arity, `arities[i]` being the leaf count of
/// basis element `i` and `strata[k]` the span of arity `k`.
pub(crate) fn tree_coproducts(
    sg: &Grading,
    trees: &IndexSet<Tree>,
    basis_vectors: &[SparseVec],
    arities: &[usize],
    strata: &[Echelon],
) -> Result<Vec<Vec<CoproductTerm>>, CoalgebraError> {
    let weights = arities;
    let offsets: Vec<usize> = {
        let mut o = vec![0; strata.len() + 1];
        for w in 1..strata.len() {
            o[w] = weights.iter().filter(|&&x| x < w).count();
        }
        o
    };
    let mut out = Vec::with_capacity(basis_vectors.len());
    for (i, v) in basis_vectors.iter().enumerate() {
        let w = weights[i];
        if w < 2 {
            out.push(Vec::new());
            continue;
        }
        // Tensor in (op, left tree coords, right tree coords).
        let mut tensor: BTreeMap<(u8, usize, usize), Scalar> = BTreeMap::new();
        for (ti, x) in v.entries() {
            let t = &trees[*ti];
            let Sym::Op(e) = t[0] else { continue };
            let (l, r, _) = children(t, 0);
            let (t1, t2) = (t[l..r].to_vec(), t[r..].to_vec());
            let sign1 = is_odd(sg.degree(&t1));
            let (i1, i2) = (trees.get_index_of(&t1).unwrap(), trees.get_index_of(&t2).unwrap());
            *tensor.entry((e, i1, i2)).or_insert_with(Scalar::zero) += if sign1 { -x.clone() } else { x.clone() };
            // The swapped ordering.
            let sym = sg.ops[e as usize].1;
            let swap_neg = !sym ^ (is_odd(sg.degree(&t1)) && is_odd(sg.degree(&t2)));
            let sign2 = is_odd(sg.degree(&t2));
            let c = if sign2 ^ swap_neg { -x.clone() } else { x.clone() };
            *tensor.entry((e, i2, i1)).or_insert_with(Scalar::zero) += c;
        }
        // Convert tree coordinates to stratum coordinates slot by slot.
        let mut by_left: BTreeMap<(u8, usize), SparseVec> = BTreeMap::new();
        for ((e, a, b), x) in &tensor {
            let entry = by_left.entry((*e, *a)).or_default();
            *entry = entry.add(&SparseVec::unit(*b).scale(x));
        }
        let mut by_right: BTreeMap<(u8, usize), VecBuilder> = BTreeMap::new();
        for ((e, a), right) in by_left {
            if right.is_zero() {
                continue;
            }
            let wr = leaf_count(&trees[right.entries()[0].0]);
            let rc = strata[wr].coordinates(&right).ok_or(CoalgebraError::AxiomViolation(format!(
                "decomposition of element {i} leaves the coalgebra"
            )))?;
            for (k, y) in rc.entries() {
                by_right.entry((e, offsets[wr] + k)).or_default().add(a, y.clone());
            }
        }
        let mut terms = Vec::new();
        for ((e, right), left) in by_right {
            let left = left.finish();
            if left.is_zero() {
                continue;
            }
            let wl = leaf_count(&trees[left.entries()[0].0]);
            let lc = strata[wl].coordinates(&left).ok_or(CoalgebraError::AxiomViolation(format!(
                "decomposition of element {i} leaves the coalgebra"
            )))?;
            for (k, y) in lc.entries() {
                terms.push(CoproductTerm { op: e, left: offsets[wl] + k, right, coeff: y.clone() });
            }
        }
        out.push(terms);
    }
    Ok(out)
}
