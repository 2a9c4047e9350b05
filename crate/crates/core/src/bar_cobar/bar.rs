//! Bar constructions of semi-augmented algebras over `uPois_n`.
//!
//! `B_κA = Pois_n^¡(ΣĀ)` is realized like the Koszul dual coalgebra: a basis
//! element is the suspension of a combination of trees in the suspended
//! generators whose leaves are basis monomials of `Ā`.

use indexmap::IndexSet;
use num_traits::Zero;

use super::{BarCobarError, PoissonTarget};
use crate::curved_coalgebra::{tree_coproducts, CurvedCoalgebraData, TreeRealization};
use crate::graded::{is_odd, MonoComb};
use crate::koszul_dual::{koszul_dual_stratum, suspended_grading};
use crate::operad_core::{children, pois_n, upois_n, LinComb, Sym, Tree};
use crate::qlinalg::{Echelon, Scalar, SparseVec, VecBuilder};

/// A semi-augmented `uPois_n`-algebra with a monomial basis graded by weight.
pub trait SemiAugmentedAlgebra: PoissonTarget {
    fn arity_n(&self) -> i64;
    /// Basis monomials of `Ā` of weight `1..=max_weight`.
    fn augmentation_basis(&self, max_weight: usize) -> IndexSet<Vec<usize>>;
    fn degree(&self, m: &[usize]) -> i64;
    fn weight(&self, m: &[usize]) -> usize {
        m.len()
    }
    fn differential(&self, _m: &[usize]) -> MonoComb {
        MonoComb::new()
    }
}

/// `B_κA` truncated at `V`-weight `max_weight`, with its tree realization.
pub struct BarConstruction {
    pub coalgebra: CurvedCoalgebraData,
    pub realization: TreeRealization,
    pub abar: IndexSet<Vec<usize>>,
    pub arities: Vec<usize>,
    strata: Vec<Echelon>,
}

impl BarConstruction {
    /// Coordinates of a tree combination of arity `k` in the basis.
    pub fn coordinates(&self, k: usize, comb: &LinComb) -> Option<SparseVec> {
        let mut b = VecBuilder::new();
        for (t, x) in comb {
            b.add(self.realization.trees.get_index_of(t)?, x.clone());
        }
        let offset = self.arities.iter().filter(|&&a| a < k).count();
        self.strata.get(k)?.coordinates(&b.finish()).map(|c| c.remap(|i| Some(offset + i)))
    }
}

fn leaf_of(t: &[Sym]) -> usize {
    match t[0] {
        Sym::Leaf(l) => l as usize,
        _ => unreachable!("leaf expected"),
    }
}

/// Builds `B_κA = (Pois_n^¡(ΣĀ), d_B, θ_B)` up to `V`-weight `max_weight`.
///
/// `d_B` contracts one cherry `e(a, b)` of a tree to `γ̄(e; a, b) ∈ Ā` and
/// desuspends single leaves through `d̄`; `θ_B` is `ε` of the same
/// contraction on arity two and of `d` on arity one.
pub fn bar<A: SemiAugmentedAlgebra>(alg: &A, max_weight: usize) -> Result<BarConstruction, BarCobarError> {
    let n = alg.arity_n();
    let quadratic = pois_n(n);
    let abar = alg.augmentation_basis(max_weight);
    let leaf_deg: Vec<i64> = abar.iter().map(|m| alg.degree(m)).collect();
    let leaf_wt: Vec<usize> = abar.iter().map(|m| alg.weight(m)).collect();
    let sg = suspended_grading(&quadratic).with_leaves(leaf_deg);
    let roles: Vec<bool> = quadratic.generators.iter().map(|g| g.id == "lambda").collect();

    let mut trees: IndexSet<Tree> = IndexSet::new();
    let mut strata = vec![Echelon::new()];
    let mut basis_vectors = Vec::new();
    let mut arities = Vec::new();
    let mut weights = Vec::new();
    let mut degrees = Vec::new();
    for k in 1..=max_weight {
        let co = koszul_dual_stratum(&quadratic, k).map_err(|e| BarCobarError::AxiomViolation(e.to_string()))?;
        let mut span = Echelon::new();
        for word in leaf_words(&leaf_wt, k, max_weight) {
            let subs: Vec<Tree> = word.iter().map(|&v| vec![Sym::Leaf(v as u16)]).collect();
            for i in 0..co.dim() {
                let mut out = LinComb::new();
                for (t, x) in &co.basis_comb(i) {
                    let (neg, st) = sg.substitute(t, &subs);
                    sg.push(&mut out, &st, if neg { -x.clone() } else { x.clone() });
                }
                if out.is_empty() {
                    continue;
                }
                let mut b = VecBuilder::new();
                for (t, x) in out {
                    let (idx, _) = trees.insert_full(t);
                    b.add(idx, x);
                }
                span.insert(&b.finish());
            }
        }
        for row in span.rows() {
            let t = &trees[row.entries()[0].0];
            let w: usize = t.iter().filter(|s| matches!(s, Sym::Leaf(_))).map(|s| leaf_wt[leaf_of(&[*s])]).sum();
            basis_vectors.push(row.clone());
            arities.push(k);
            weights.push(w);
            degrees.push(sg.degree(t) + 1);
        }
        strata.push(span);
    }
    let offsets: Vec<usize> = (0..=max_weight + 1).map(|k| arities.iter().filter(|&&a| a < k).count()).collect();

    let dim = basis_vectors.len();
    let mut differential = vec![SparseVec::new(); dim];
    let mut curvature = vec![Scalar::zero(); dim];
    for i in 0..dim {
        let k = arities[i];
        let mut image: LinComb = LinComb::new();
        let mut theta = Scalar::zero();
        for (ti, x) in basis_vectors[i].entries() {
            let t = &trees[*ti];
            if k == 1 {
                // s a ↦ −s d̄a, θ_B(s a) = ε(da).
                for (m, y) in alg.differential(&abar[leaf_of(t)]) {
                    if m.is_empty() {
                        theta += x * &y;
                    } else {
                        let leaf = vec![Sym::Leaf(abar.get_index_of(&m).expect("differential within truncation") as u16)];
                        sg.push(&mut image, &leaf, -(x * &y));
                    }
                }
                continue;
            }
            let mut prefix = 0i64;
            for v in 0..t.len() {
                if let Sym::Op(e) = t[v] {
                    let (l, r, end) = children(t, v);
                    if let (Sym::Leaf(a), Sym::Leaf(b)) = (t[l], t[r]) {
                        let (ma, mb) = (unit_comb(&abar[a as usize]), unit_comb(&abar[b as usize]));
                        let val =
                            if roles[e as usize] { alg.bracket(&ma, &mb) } else { alg.mul(&ma, &mb) };
                        // The contraction has degree −1 and passes `s` and the prefix.
                        let sign = if is_odd(1 + prefix) { -x.clone() } else { x.clone() };
                        for (m, y) in val {
                            if m.is_empty() {
                                if k == 2 {
                                    theta += &sign * &y;
                                }
                                continue;
                            }
                            let idx = abar.get_index_of(&m).expect("product within truncation");
                            let mut nt = t[..v].to_vec();
                            nt.push(Sym::Leaf(idx as u16));
                            nt.extend_from_slice(&t[end..]);
                            sg.push(&mut image, &nt, &sign * &y);
                        }
                    }
                }
                prefix += sg.sym_degree(t[v]);
            }
        }
        curvature[i] = theta;
        if image.is_empty() {
            continue;
        }
        let mut b = VecBuilder::new();
        for (t, x) in image {
            let (idx, _) = trees.insert_full(t);
            b.add(idx, x);
        }
        let v = b.finish();
        if v.is_zero() {
            continue;
        }
        let coords = strata[k - 1].coordinates(&v).ok_or_else(|| {
            BarCobarError::AxiomViolation(format!("d_B of basis element {i} leaves the cofree coalgebra"))
        })?;
        differential[i] = coords.remap(|c| Some(offsets[k - 1] + c));
    }
    let coproduct = tree_coproducts(&sg, &trees, &basis_vectors, &arities, &strata)
        .map_err(|e| BarCobarError::AxiomViolation(e.to_string()))?;
    let labels = (0..dim).map(|i| format!("b{}#{i}", arities[i])).collect();
    let coalgebra = CurvedCoalgebraData {
        operad: upois_n(n),
        labels,
        weights,
        degrees,
        differential,
        curvature,
        coproduct,
        max_weight,
    };
    Ok(BarConstruction {
        coalgebra,
        realization: TreeRealization { grading: sg, trees, basis_vectors },
        abar,
        arities,
        strata,
    })
}

fn unit_comb(m: &[usize]) -> MonoComb {
    std::iter::once((m.to_vec(), Scalar::from_integer(1.into()))).collect()
}

/// Ordered `k`-tuples of leaf indices with total weight at most `max_weight`.
fn leaf_words(leaf_wt: &[usize], k: usize, max_weight: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(leaf_wt: &[usize], k: usize, budget: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let reserve = k - cur.len() - 1;
        for (i, &w) in leaf_wt.iter().enumerate() {
            if w + reserve <= budget {
                cur.push(i);
                rec(leaf_wt, k, budget - w, cur, out);
                cur.pop();
            }
        }
    }
    rec(leaf_wt, k, max_weight, &mut cur, &mut out);
    out
}
