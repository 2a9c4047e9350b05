//! Koszul dual cooperads of binary quadratic operads, the twisting morphism
//! κ, and the operadic Koszul complex.
//!
//! `𝒫^¡(k)` is realized inside the span of tree monomials on the suspended
//! generators `ΣE`. A tree monomial belongs to `𝒫^¡` when every two-vertex
//! piece lies in the corelations `Σ²R`; equivalently, when it pairs to zero
//! with the operadic ideal generated by the orthogonal `R^⊥` in the free
//! operad on `Σ⁻¹E*`. Both generator sets have the same parities, so their
//! canonical trees coincide and the pairing is the identity matrix on them.

use std::collections::HashMap;

use indexmap::IndexSet;
use thiserror::Error;

use crate::graded::{is_odd, reorder_parity};
use crate::operad_core::{
    add_term, children, free_operad_trees, leaf_count, operad_stratum, relabel, relation_instances, Grading, LinComb,
    OperadError, OperadPresentation, QuotientStratum, Sym, Tree,
};
use crate::qlinalg::{kernel_basis, sign_scalar, Echelon, LinalgError, SparseMatrix, SparseVec, VecBuilder};

#[derive(Debug, Error)]
pub enum KoszulDualError {
    #[error(transparent)]
    Operad(#[from] OperadError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("κ⋆κ does not vanish on cooperad basis element {index}: {residue}")]
    MCViolation { index: usize, residue: String },
    #[error("cocomposition left the cooperad in arity {arity}")]
    NotASubcooperad { arity: usize },
}

/// Grading of the suspended generators `ΣE`.
pub fn suspended_grading(p: &OperadPresentation) -> Grading {
    Grading::operadic(p.generators.iter().map(|g| (g.degree + 1, g.symmetric)).collect())
}

/// Grading of the desuspended linear dual `Σ⁻¹E*`.
pub fn dual_grading(p: &OperadPresentation) -> Grading {
    Grading::operadic(p.generators.iter().map(|g| (-(g.degree + 1), g.symmetric)).collect())
}

fn check_quadratic(p: &OperadPresentation) -> Result<(), OperadError> {
    if p.is_unital() {
        return Err(OperadError::NotQuadratic(format!("{} has an arity-zero unit", p.name)));
    }
    if let Some(g) = p.generators.iter().find(|g| g.arity != 2) {
        return Err(OperadError::NotQuadratic(format!("generator {} is not binary", g.id)));
    }
    Ok(())
}

/// The corelations `Σ²R` as combinations of `ΣE`-trees.
pub fn corelations(p: &OperadPresentation) -> Vec<LinComb> {
    let g = p.grading();
    let sg = suspended_grading(p);
    p.relation_basis()
        .into_iter()
        .map(|rho| {
            let mut out = LinComb::new();
            for (t, c) in rho {
                // s(a ∘ b) = sa ∘ sb up to moving the inner suspension past the root.
                let root_odd = is_odd(g.sym_degree(t[0]));
                sg.push(&mut out, &t, if root_odd { -c } else { c });
            }
            out
        })
        .collect()
}

/// The orthogonal `R^⊥ ⊂ T(Σ⁻¹E*)(3)`.
pub fn orthogonal_relations(p: &OperadPresentation) -> Vec<LinComb> {
    let dg = dual_grading(p);
    let trees = free_operad_trees(&dg, 3);
    let index: IndexSet<Tree> = trees.into_iter().collect();
    let rows: Vec<SparseVec> = corelations(p)
        .iter()
        .map(|c| SparseVec::from_pairs(c.iter().map(|(t, x)| (index.get_index_of(t).expect("arity-3 tree"), x.clone()))))
        .collect();
    let m = SparseMatrix::from_rows(index.len(), rows);
    kernel_basis(&m)
        .into_iter()
        .map(|v| v.entries().iter().map(|(i, c)| (index[*i].clone(), c.clone())).collect())
        .collect()
}

/// Arity-`k` component of `𝒫^¡` as a subspace of `ΣE`-trees.
#[derive(Clone, Debug)]
pub struct CooperadStratum {
    pub arity: usize,
    pub grading: Grading,
    pub trees: IndexSet<Tree>,
    span: Echelon,
}

impl CooperadStratum {
    pub fn dim(&self) -> usize {
        self.span.rank()
    }

    /// Basis vectors in tree coordinates.
    pub fn basis(&self) -> &[SparseVec] {
        self.span.rows()
    }

    pub fn basis_comb(&self, i: usize) -> LinComb {
        self.to_comb(&self.span.rows()[i])
    }

    pub fn to_comb(&self, v: &SparseVec) -> LinComb {
        v.entries().iter().map(|(j, c)| (self.trees[*j].clone(), c.clone())).collect()
    }

    pub fn tree_vector(&self, c: &LinComb) -> Option<SparseVec> {
        let mut pairs = Vec::with_capacity(c.len());
        for (t, x) in c {
            pairs.push((self.trees.get_index_of(t)?, x.clone()));
        }
        Some(SparseVec::from_pairs(pairs))
    }

    /// Coordinates of a combination of `ΣE`-trees in the stratum basis.
    pub fn coordinates(&self, c: &LinComb) -> Option<SparseVec> {
        self.span.coordinates(&self.tree_vector(c)?)
    }

    /// Degree of basis element `i` (basis vectors are homogeneous).
    pub fn basis_degree(&self, i: usize) -> i64 {
        let (j, _) = &self.span.rows()[i].entries()[0];
        self.grading.degree(&self.trees[*j])
    }
}

/// `𝒫^¡(k)`: the annihilator of the ideal generated by `R^⊥` in arity `k`.
pub fn koszul_dual_stratum(p: &OperadPresentation, k: usize) -> Result<CooperadStratum, OperadError> {
    check_quadratic(p)?;
    let sg = suspended_grading(p);
    let dg = dual_grading(p);
    let trees = free_operad_trees(&sg, k);
    let index: IndexSet<Tree> = trees.iter().cloned().collect();
    let rows: Vec<SparseVec> = relation_instances(&dg, &dg, &trees, &orthogonal_relations(p))
        .iter()
        .map(|c| SparseVec::from_pairs(c.iter().map(|(t, x)| (index.get_index_of(t).expect("canonical tree"), x.clone()))))
        .collect();
    let m = SparseMatrix::from_rows(index.len(), rows);
    let mut span = Echelon::new();
    for v in kernel_basis(&m) {
        span.insert(&v);
    }
    Ok(CooperadStratum { arity: k, grading: sg, trees: index, span })
}

/// κ: projection onto the cogenerators followed by desuspension.
///
/// Returns a combination of `E`-trees; it is zero outside arity two.
pub fn kappa(c: &CooperadStratum, v: &SparseVec) -> LinComb {
    if c.arity != 2 {
        return LinComb::new();
    }
    c.to_comb(v)
}

/// `κ⋆κ` of a `ΣE`-tree combination of arity three, as an `E`-tree combination.
///
/// Desuspending both vertices of `s a ∘ s b` produces `(−1)^{|sa|+1}`.
pub fn kappa_star_kappa(p: &OperadPresentation, c: &LinComb) -> LinComb {
    let g = p.grading();
    let mut out = LinComb::new();
    for (t, x) in c {
        if leaf_count(t) != 3 {
            continue;
        }
        let root_even = !is_odd(g.sym_degree(t[0]));
        // (−1)^{|root|_{ΣE}} with |root|_{ΣE} = |root|_E + 1.
        g.push(&mut out, t, if root_even { -x.clone() } else { x.clone() });
    }
    out
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct MaurerCartanReport {
    pub operad: String,
    pub checked: usize,
    pub cooperad_dim: usize,
}

/// Checks that `κ⋆κ` reduces to zero in `𝒫(3)` on every basis element of `𝒫^¡(3)`.
pub fn check_maurer_cartan_kappa(p: &OperadPresentation) -> Result<MaurerCartanReport, KoszulDualError> {
    let co = koszul_dual_stratum(p, 3)?;
    let target = operad_stratum(p, 3, 3)?;
    for i in 0..co.dim() {
        let image = kappa_star_kappa(p, &co.basis_comb(i));
        let residue = target.normal_form(&image);
        if !residue.is_zero() {
            return Err(KoszulDualError::MCViolation { index: i, residue: residue.to_string() });
        }
    }
    Ok(MaurerCartanReport { operad: p.name.clone(), checked: co.dim(), cooperad_dim: co.dim() })
}

/// Set partitions of `{0..k}` into `r` blocks, blocks ordered by their minima.
pub fn set_partitions(k: usize, r: usize) -> Vec<Vec<Vec<u16>>> {
    fn rec(i: usize, k: usize, r: usize, cur: &mut Vec<Vec<u16>>, out: &mut Vec<Vec<Vec<u16>>>) {
        if i == k {
            if cur.len() == r {
                out.push(cur.clone());
            }
            return;
        }
        if cur.len() + (k - i) < r {
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i as u16);
            rec(i + 1, k, r, cur, out);
            cur[b].pop();
        }
        if cur.len() < r {
            cur.push(vec![i as u16]);
            rec(i + 1, k, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, k, r, &mut Vec::new(), &mut out);
    out
}

/// Basis element `c(p_0, …, p_{r−1})` of `𝒫^¡(r) ∘ 𝒫` in a fixed arity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct ComplexCell {
    r: usize,
    co_index: usize,
    blocks: Vec<Vec<u16>>,
    op_indices: Vec<usize>,
}

/// Strand of the Koszul complex `𝒫^¡ ∘_κ 𝒫` in one arity.
pub struct KoszulComplexStrand {
    pub arity: usize,
    /// `dims[r]` is the dimension of `𝒫^¡(r) ∘ 𝒫` in this arity.
    pub dims: Vec<usize>,
    /// `differentials[r]` maps the `r` piece to the `r − 1` piece (`r ≥ 1`).
    pub differentials: Vec<SparseMatrix>,
}

impl KoszulComplexStrand {
    /// Whether consecutive differentials compose to zero.
    pub fn squares_to_zero(&self) -> Result<(), LinalgError> {
        for r in 2..self.differentials.len() {
            crate::qlinalg::check_composition(&self.differentials[r - 1], &self.differentials[r])?;
        }
        Ok(())
    }

    /// Homology dimension at each `r ≥ 1`.
    pub fn homology(&self) -> Result<Vec<usize>, LinalgError> {
        let top = self.dims.len() - 1;
        let mut out = vec![0];
        for r in 1..=top {
            let incoming = if r < top {
                self.differentials[r + 1].clone()
            } else {
                SparseMatrix::zeros(self.dims[r], 0)
            };
            out.push(crate::qlinalg::homology_dim(&self.differentials[r], &incoming)?);
        }
        Ok(out)
    }
}

/// Order-preserving relabeling of an operad tree on `0..|block|` into positions
/// within `target` (both sorted).
fn relabel_into(t: &[Sym], block: &[u16], target: &[u16]) -> Tree {
    relabel(t, |l| target.iter().position(|&x| x == block[l as usize]).unwrap() as u16)
}

/// Builds the arity-`k` strand of the Koszul complex.
pub fn koszul_complex_strand(p: &OperadPresentation, k: usize) -> Result<KoszulComplexStrand, KoszulDualError> {
    check_quadratic(p)?;
    let g = p.grading();
    let sg = suspended_grading(p);
    let co: Vec<Option<CooperadStratum>> =
        (0..=k).map(|r| if r == 0 { Ok(None) } else { koszul_dual_stratum(p, r).map(Some) }).collect::<Result<_, _>>()?;
    let ops: Vec<Option<QuotientStratum>> =
        (0..=k).map(|m| if m < 2 { Ok(None) } else { operad_stratum(p, m, k).map(Some) }).collect::<Result<_, _>>()?;
    let op_dim = |m: usize| if m == 1 { 1 } else { ops[m].as_ref().unwrap().dim() };
    let op_degree = |m: usize, i: usize| if m == 1 { 0 } else { ops[m].as_ref().unwrap().basis_degree(i) };
    let op_tree = |m: usize, i: usize| -> Tree {
        if m == 1 {
            vec![Sym::Leaf(0)]
        } else {
            ops[m].as_ref().unwrap().basis_tree(i).clone()
        }
    };

    // Enumerate cells per r.
    let mut cells: Vec<IndexSet<ComplexCell>> = vec![IndexSet::new(); k + 1];
    for r in 1..=k {
        let c = co[r].as_ref().unwrap();
        for blocks in set_partitions(k, r) {
            let sizes: Vec<usize> = blocks.iter().map(Vec::len).collect();
            if sizes.iter().any(|&m| op_dim(m) == 0) {
                continue;
            }
            let mut choice = vec![0usize; r];
            loop {
                for ci in 0..c.dim() {
                    cells[r].insert(ComplexCell { r, co_index: ci, blocks: blocks.clone(), op_indices: choice.clone() });
                }
                // Odometer over block basis choices.
                let mut j = 0;
                while j < r {
                    choice[j] += 1;
                    if choice[j] < op_dim(sizes[j]) {
                        break;
                    }
                    choice[j] = 0;
                    j += 1;
                }
                if j == r {
                    break;
                }
            }
        }
    }
    let dims: Vec<usize> = cells.iter().map(IndexSet::len).collect();

    let mut differentials = vec![SparseMatrix::zeros(0, dims[0])];
    differentials.push(SparseMatrix::zeros(0, dims[1]));
    for r in 2..=k {
        let src = co[r].as_ref().unwrap();
        let tgt = co[r - 1].as_ref().unwrap();
        let mut columns = Vec::with_capacity(dims[r]);
        for cell in &cells[r] {
            let p_degs: Vec<i64> = (0..r).map(|j| op_degree(cell.blocks[j].len(), cell.op_indices[j])).collect();
            // Group the infinitesimal decompositions by (merged pair, generator).
            let mut groups: HashMap<(u16, u16, u8), LinComb> = HashMap::new();
            for (t, x) in src.basis_comb(cell.co_index) {
                for v in 0..t.len() {
                    let Sym::Op(e) = t[v] else { continue };
                    let (l, rr, end) = children(&t, v);
                    let (Sym::Leaf(a), Sym::Leaf(b)) = (t[l], t[rr]) else { continue };
                    debug_assert!(a < b);
                    let after = sg.degree(&t[end..]);
                    let sv = sg.sym_degree(t[v]);
                    let mut neg = is_odd(sv) && is_odd(after);
                    // κ passes over the remaining cooperad tree.
                    neg ^= is_odd(sg.degree(&t) - sv);
                    let mut reduced = t[..v].to_vec();
                    reduced.push(Sym::Leaf(a));
                    reduced.extend_from_slice(&t[end..]);
                    let reduced = relabel(&reduced, |l| if l > b { l - 1 } else { l });
                    let Some((cneg, canon)) = sg.canonical(&reduced) else { continue };
                    add_term(groups.entry((a, b, e)).or_default(), canon, sign_scalar(neg ^ cneg) * &x);
                }
            }
            let mut col = VecBuilder::new();
            for ((a, b, e), comb) in groups {
                if comb.is_empty() {
                    continue;
                }
                let coords = tgt.coordinates(&comb).ok_or(KoszulDualError::NotASubcooperad { arity: r - 1 })?;
                let (a, b) = (a as usize, b as usize);
                let mut merged: Vec<u16> = cell.blocks[a].iter().chain(&cell.blocks[b]).copied().collect();
                merged.sort();
                let mut new_blocks: Vec<Vec<u16>> = Vec::with_capacity(r - 1);
                let mut items: Vec<Vec<usize>> = Vec::with_capacity(r - 1);
                for j in 0..r {
                    if j == a {
                        new_blocks.push(merged.clone());
                        items.push(vec![0, 1 + a, 1 + b]);
                    } else if j != b {
                        new_blocks.push(cell.blocks[j].clone());
                        items.push(vec![1 + j]);
                    }
                }
                let order: Vec<usize> = items.concat();
                let mut degs = vec![g.sym_degree(Sym::Op(e))];
                degs.extend(&p_degs);
                let neg = reorder_parity(&order, &degs);
                // e(p_a, p_b) relabeled into the merged block.
                let mut composite = vec![Sym::Op(e)];
                composite.extend(relabel_into(
                    &op_tree(cell.blocks[a].len(), cell.op_indices[a]),
                    &cell.blocks[a],
                    &merged,
                ));
                composite.extend(relabel_into(
                    &op_tree(cell.blocks[b].len(), cell.op_indices[b]),
                    &cell.blocks[b],
                    &merged,
                ));
                let mut comp = LinComb::new();
                g.push(&mut comp, &composite, sign_scalar(neg));
                let nf = ops[merged.len()].as_ref().unwrap().normal_form(&comp);
                for (ci, cx) in coords.entries() {
                    for (oi, ox) in nf.entries() {
                        let mut op_indices = Vec::with_capacity(r - 1);
                        for j in 0..r {
                            if j == a {
                                op_indices.push(*oi);
                            } else if j != b {
                                op_indices.push(cell.op_indices[j]);
                            }
                        }
                        let target =
                            ComplexCell { r: r - 1, co_index: *ci, blocks: new_blocks.clone(), op_indices };
                        let row = cells[r - 1].get_index_of(&target).expect("target cell");
                        col.add(row, cx * ox);
                    }
                }
            }
            columns.push(col.finish());
        }
        differentials.push(SparseMatrix::from_columns(dims[r - 1], &columns));
    }
    Ok(KoszulComplexStrand { arity: k, dims, differentials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad_core::{com, lie_n, pois_n};

    #[test]
    fn low_arity_strata() {
        let p = pois_n(2);
        assert_eq!(koszul_dual_stratum(&p, 1).unwrap().dim(), 1);
        assert_eq!(koszul_dual_stratum(&p, 2).unwrap().dim(), 2);
        assert_eq!(koszul_dual_stratum(&com(), 3).unwrap().dim(), 2);
        assert_eq!(koszul_dual_stratum(&lie_n(1), 3).unwrap().dim(), 1);
    }

    #[test]
    fn partitions_count() {
        assert_eq!(set_partitions(4, 2).len(), 7);
        assert_eq!(set_partitions(5, 3).len(), 25);
    }
}
