//! Finite complexes with a weight filtration, their homology per stratum, and
//! Betti comparisons along chain maps.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::qlinalg::{kernel_basis, Echelon, SparseMatrix, SparseVec, VecBuilder};

/// A complex on a homogeneous basis; the differential has degree −1 and does
/// not raise weight, so every `F_w = span{weight ≤ w}` is a subcomplex.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    pub weights: Vec<usize>,
    pub degrees: Vec<i64>,
    /// `differential[i]` is the image of basis vector `i`.
    pub differential: Vec<SparseVec>,
}

/// A nonzero entry of `d²` with the basis element it came from.
#[derive(Clone, Debug, Serialize)]
pub struct SquareWitness {
    pub basis_index: usize,
    pub weight: usize,
    pub degree: i64,
    pub residue: String,
}

impl FilteredComplex {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn max_weight(&self) -> usize {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    /// Degrees occurring in `F_w`, sorted.
    pub fn degrees_upto(&self, w: usize) -> Vec<i64> {
        let mut v: Vec<i64> = (0..self.dim()).filter(|&i| self.weights[i] <= w).map(|i| self.degrees[i]).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn piece(&self, w: usize, degree: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.weights[i] <= w && self.degrees[i] == degree).collect()
    }

    /// Checks `d ∘ d = 0` and returns the first witness otherwise.
    pub fn check_square_zero(&self) -> Result<(), SquareWitness> {
        for i in 0..self.dim() {
            let r = apply(&self.differential, &self.differential[i]);
            if !r.is_zero() {
                return Err(SquareWitness {
                    basis_index: i,
                    weight: self.weights[i],
                    degree: self.degrees[i],
                    residue: r.to_string(),
                });
            }
        }
        Ok(())
    }

    /// The restriction `F_{w,k} → F_{w,k−1}` as a matrix in local coordinates.
    pub fn block(&self, w: usize, degree: i64) -> SparseMatrix {
        let src = self.piece(w, degree);
        let tgt = self.piece(w, degree - 1);
        let pos: BTreeMap<usize, usize> = tgt.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let cols: Vec<SparseVec> = src
            .iter()
            .map(|&i| self.differential[i].remap(|j| Some(*pos.get(&j).expect("differential leaves the filtration"))))
            .collect();
        SparseMatrix::from_columns(tgt.len(), &cols)
    }

    /// `dim H_k(F_w)`.
    pub fn homology(&self, w: usize, degree: i64) -> usize {
        let out = self.block(w, degree);
        let inc = self.block(w, degree + 1);
        (out.ncols() - out.rank()) - inc.rank()
    }

    /// The complex whose differential is the given map; handy for comparisons.
    pub fn with_differential(&self, differential: Vec<SparseVec>) -> FilteredComplex {
        FilteredComplex { weights: self.weights.clone(), degrees: self.degrees.clone(), differential }
    }

    /// The same basis with zero differential.
    pub fn zero_differential(weights: Vec<usize>, degrees: Vec<i64>) -> FilteredComplex {
        let n = weights.len();
        FilteredComplex { weights, degrees, differential: vec![SparseVec::new(); n] }
    }
}

/// Applies a map given by its columns.
pub fn apply(columns: &[SparseVec], v: &SparseVec) -> SparseVec {
    let mut b = VecBuilder::new();
    for (j, x) in v.entries() {
        b.add_vec(&columns[*j], x);
    }
    b.finish()
}

/// Composition `f ∘ g` of maps given by columns.
pub fn compose(f: &[SparseVec], g: &[SparseVec]) -> Vec<SparseVec> {
    g.iter().map(|v| apply(f, v)).collect()
}

pub fn add_maps(f: &[SparseVec], g: &[SparseVec]) -> Vec<SparseVec> {
    f.iter().zip(g).map(|(a, b)| a.add(b)).collect()
}

pub fn sub_maps(f: &[SparseVec], g: &[SparseVec]) -> Vec<SparseVec> {
    f.iter().zip(g).map(|(a, b)| a.sub(b)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct BettiRow {
    pub weight: usize,
    pub degree: i64,
    pub dim_source: usize,
    pub dim_target: usize,
    pub induced_rank: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BettiReport {
    pub rows: Vec<BettiRow>,
}

impl BettiReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("weight,degree,dim_source,dim_target,induced_rank,pass\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.weight, r.degree, r.dim_source, r.dim_target, r.induced_rank, r.pass
            ));
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Where a map fails to commute with the differentials.
#[derive(Clone, Debug, Serialize)]
pub struct ChainMapWitness {
    pub basis_index: usize,
    pub residue: String,
}

/// Checks `f d = d f` on every source basis vector.
pub fn check_chain_map(f: &[SparseVec], src: &FilteredComplex, tgt: &FilteredComplex) -> Result<(), ChainMapWitness> {
    for i in 0..src.dim() {
        let lhs = apply(f, &src.differential[i]);
        let rhs = apply(&tgt.differential, &f[i]);
        let r = lhs.sub(&rhs);
        if !r.is_zero() {
            return Err(ChainMapWitness { basis_index: i, residue: r.to_string() });
        }
    }
    Ok(())
}

/// Rank of `H(F_w src)_k → H(F_w tgt)_k`.
pub fn induced_rank_on(f: &[SparseVec], src: &FilteredComplex, tgt: &FilteredComplex, w: usize, degree: i64) -> usize {
    let src_idx = src.piece(w, degree);
    let cycles = kernel_basis(&src.block(w, degree));
    let mut e = Echelon::new();
    for i in tgt.piece(w, degree + 1) {
        e.insert(&tgt.differential[i]);
    }
    let base = e.rank();
    for z in cycles {
        let mut b = VecBuilder::new();
        for (k, x) in z.entries() {
            b.add_vec(&f[src_idx[*k]], x);
        }
        e.insert(&b.finish());
    }
    e.rank() - base
}

/// Per stratum `(w, k)` with `w ≤ max_weight`: homology of both sides and
/// the rank of the induced map; a stratum passes when the map is an isomorphism.
pub fn quasi_iso_check(
    f: &[SparseVec],
    src: &FilteredComplex,
    tgt: &FilteredComplex,
    max_weight: usize,
) -> Result<BettiReport, ChainMapWitness> {
    check_chain_map(f, src, tgt)?;
    let mut rows = Vec::new();
    for w in 0..=max_weight {
        let mut degs = src.degrees_upto(w);
        degs.extend(tgt.degrees_upto(w));
        degs.sort();
        degs.dedup();
        for k in degs {
            let ds = src.homology(w, k);
            let dt = tgt.homology(w, k);
            let r = if ds == 0 || dt == 0 { 0 } else { induced_rank_on(f, src, tgt, w, k) };
            rows.push(BettiRow { weight: w, degree: k, dim_source: ds, dim_target: dt, induced_rank: r, pass: ds == dt && r == ds });
        }
    }
    Ok(BettiReport { rows })
}
