//! Poincaré duality models: finite commutative dg algebras with an
//! orientation `ε` whose pairing is perfect.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Deserialize;

use super::FacthomError;
use crate::graded::is_odd;
use crate::operad_core::parse_scalar;
use crate::qlinalg::{sign_scalar, Scalar, SparseMatrix, SparseVec};

/// A Poincaré duality CDGA in upper (cohomological) grading.
#[derive(Clone, Debug)]
pub struct PDModel {
    /// Formal dimension `m`: `ε` lives on degree `m`.
    pub dimension: i64,
    pub ids: Vec<String>,
    pub degrees: Vec<i64>,
    pub unit: usize,
    /// `e_a · e_b` for non-unit pairs given or implied by commutativity.
    products: BTreeMap<(usize, usize), SparseVec>,
    pub differential: Vec<SparseVec>,
    pub epsilon: Vec<Scalar>,
}

#[derive(Deserialize)]
struct JsonBasis {
    id: String,
    degree: i64,
}

#[derive(Deserialize)]
struct JsonTerm {
    id: String,
    coeff: serde_json::Value,
}

#[derive(Deserialize)]
struct JsonModel {
    dimension: i64,
    basis: Vec<JsonBasis>,
    #[serde(default)]
    unit: Option<String>,
    #[serde(default)]
    products: Vec<(String, String, Vec<JsonTerm>)>,
    #[serde(default)]
    differential: Vec<(String, Vec<JsonTerm>)>,
    epsilon: Vec<JsonTerm>,
}

impl PDModel {
    /// Assembles and validates a model; `products` lists `(a, b, a·b)` for
    /// non-unit `a, b`, the reversed order following by graded commutativity.
    pub fn new(
        dimension: i64,
        ids: Vec<String>,
        degrees: Vec<i64>,
        unit: usize,
        products: Vec<(usize, usize, SparseVec)>,
        differential: Vec<SparseVec>,
        epsilon: Vec<Scalar>,
    ) -> Result<Self, FacthomError> {
        let mut table: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
        for (a, b, v) in products {
            let swapped = v.scale(&sign_scalar(is_odd(degrees[a] * degrees[b])));
            for (key, val) in [((a, b), v), ((b, a), swapped)] {
                if let Some(old) = table.get(&key) {
                    if *old != val {
                        return Err(FacthomError::ProductNotCommutative(format!(
                            "{}·{} is given inconsistently with graded commutativity",
                            ids[key.0], ids[key.1]
                        )));
                    }
                }
                table.insert(key, val);
            }
        }
        let model = PDModel { dimension, ids, degrees, unit, products: table, differential, epsilon };
        model.validate()?;
        Ok(model)
    }

    /// `H*(S^m; ℚ)` with basis `1, v` and `ε(v) = 1`.
    pub fn sphere(m: i64) -> Self {
        PDModel::new(
            m,
            vec!["1".into(), "v".into()],
            vec![0, m],
            0,
            vec![(1, 1, SparseVec::new())],
            vec![SparseVec::new(); 2],
            vec![Scalar::zero(), Scalar::one()],
        )
        .expect("spheres are Poincaré duality algebras")
    }

    /// The point: `ℚ` in degree 0 with `ε(1) = 1`.
    pub fn point() -> Self {
        PDModel::new(0, vec!["1".into()], vec![0], 0, Vec::new(), vec![SparseVec::new()], vec![Scalar::one()])
            .expect("the point is a Poincaré duality algebra")
    }

    /// Reads the JSON schema `{dimension, basis, unit?, products, differential, epsilon}`.
    pub fn from_json(text: &str) -> Result<Self, FacthomError> {
        let raw: JsonModel = serde_json::from_str(text).map_err(|e| FacthomError::Parse(e.to_string()))?;
        let ids: Vec<String> = raw.basis.iter().map(|b| b.id.clone()).collect();
        let index = |id: &str| {
            ids.iter().position(|x| x == id).ok_or_else(|| FacthomError::Parse(format!("unknown basis id {id:?}")))
        };
        let vector = |terms: &[JsonTerm]| -> Result<SparseVec, FacthomError> {
            let mut pairs = Vec::new();
            for t in terms {
                pairs.push((index(&t.id)?, parse_scalar(&t.coeff).map_err(|e| FacthomError::Parse(e.to_string()))?));
            }
            Ok(SparseVec::from_pairs(pairs))
        };
        let degrees: Vec<i64> = raw.basis.iter().map(|b| b.degree).collect();
        let unit = match &raw.unit {
            Some(u) => index(u)?,
            None => degrees.iter().position(|&d| d == 0).ok_or_else(|| FacthomError::Parse("no degree-0 unit".into()))?,
        };
        let mut products = Vec::new();
        for (a, b, terms) in &raw.products {
            products.push((index(a)?, index(b)?, vector(terms)?));
        }
        let mut differential = vec![SparseVec::new(); ids.len()];
        for (a, terms) in &raw.differential {
            differential[index(a)?] = vector(terms)?;
        }
        let eps = vector(&raw.epsilon)?;
        let epsilon = (0..ids.len()).map(|i| eps.get(i)).collect();
        PDModel::new(raw.dimension, ids, degrees, unit, products, differential, epsilon)
    }

    pub fn dim(&self) -> usize {
        self.ids.len()
    }

    /// Homological degree of a basis element (the grading reversed).
    pub fn homological_degree(&self, a: usize) -> i64 {
        -self.degrees[a]
    }

    pub fn mul(&self, a: usize, b: usize) -> SparseVec {
        if a == self.unit {
            return SparseVec::unit(b);
        }
        if b == self.unit {
            return SparseVec::unit(a);
        }
        self.products.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn mul_vec(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (a, s) in x.entries() {
            for (b, t) in y.entries() {
                out = out.axpy(&(s * t), &self.mul(*a, *b));
            }
        }
        out
    }

    pub fn eps(&self, x: &SparseVec) -> Scalar {
        x.entries().iter().map(|(a, s)| s * &self.epsilon[*a]).sum()
    }

    fn d_vec(&self, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (a, s) in x.entries() {
            out = out.axpy(s, &self.differential[*a]);
        }
        out
    }

    /// `ε(e_a e_b)` as a matrix.
    pub fn pairing_matrix(&self) -> SparseMatrix {
        let n = self.dim();
        let rows = (0..n)
            .map(|a| SparseVec::from_pairs((0..n).map(|b| (b, self.eps(&self.mul(a, b)))).filter(|(_, x)| !x.is_zero())))
            .collect();
        SparseMatrix::from_rows(n, rows)
    }

    /// The dual basis `e_a^#` with `ε(e_a e_b^#) = δ_ab`, as columns.
    pub fn dual_basis(&self) -> Result<Vec<SparseVec>, FacthomError> {
        let m = self.pairing_matrix();
        let n = self.dim();
        if m.rank() < n {
            return Err(FacthomError::PairingDegenerate("ε(xy) is degenerate".into()));
        }
        // Solve M C = I column by column through an augmented elimination.
        let mut aug = Vec::with_capacity(n);
        for a in 0..n {
            let mut row: Vec<(usize, Scalar)> = m.row(a).entries().to_vec();
            row.push((n + a, Scalar::one()));
            aug.push(SparseVec::from_pairs(row));
        }
        let (r, pivots) = crate::qlinalg::rref(&SparseMatrix::from_rows(2 * n, aug));
        debug_assert_eq!(pivots[..n], (0..n).collect::<Vec<_>>()[..]);
        // Rows of r are [I | M⁻¹]; column b of M⁻¹ is e_b^#.
        Ok((0..n)
            .map(|b| SparseVec::from_pairs((0..n).map(|a| (a, r.get(a, n + b))).filter(|(_, x)| !x.is_zero())))
            .collect())
    }

    /// The Poincaré-dual coproduct `Δ(x) = Σ_a x e_a ⊗ e_a^#`.
    pub fn coproduct(&self, x: usize) -> Result<Vec<(usize, usize, Scalar)>, FacthomError> {
        let dual = self.dual_basis()?;
        let mut out: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        for a in 0..self.dim() {
            let left = self.mul(x, a);
            for (l, s) in left.entries() {
                for (r, t) in dual[a].entries() {
                    *out.entry((*l, *r)).or_insert_with(Scalar::zero) += s * t;
                }
            }
        }
        Ok(out.into_iter().filter(|(_, c)| !c.is_zero()).map(|((l, r), c)| (l, r, c)).collect())
    }

    /// Checks every axiom; each error names the one that fails.
    pub fn validate(&self) -> Result<(), FacthomError> {
        let n = self.dim();
        if self.degrees[self.unit] != 0 {
            return Err(FacthomError::Parse("the unit must have degree 0".into()));
        }
        for a in 0..n {
            for b in 0..n {
                let p = self.mul(a, b);
                if p.entries().iter().any(|(k, _)| self.degrees[*k] != self.degrees[a] + self.degrees[b]) {
                    return Err(FacthomError::ProductNotCommutative(format!("{}·{} is not homogeneous", self.ids[a], self.ids[b])));
                }
                if self.mul(b, a) != p.scale(&sign_scalar(is_odd(self.degrees[a] * self.degrees[b]))) {
                    return Err(FacthomError::ProductNotCommutative(format!("{}·{}", self.ids[a], self.ids[b])));
                }
                for c in 0..n {
                    let l = self.mul_vec(&p, &SparseVec::unit(c));
                    let r = self.mul_vec(&SparseVec::unit(a), &self.mul(b, c));
                    if l != r {
                        return Err(FacthomError::ProductNotAssociative(format!(
                            "({}·{})·{}",
                            self.ids[a], self.ids[b], self.ids[c]
                        )));
                    }
                }
                // d(ab) = da·b + (−1)^{|a|} a·db.
                let lhs = self.d_vec(&p);
                let rhs = self.mul_vec(&self.differential[a], &SparseVec::unit(b)).axpy(
                    &sign_scalar(is_odd(self.degrees[a])),
                    &self.mul_vec(&SparseVec::unit(a), &self.differential[b]),
                );
                if lhs != rhs {
                    return Err(FacthomError::DifferentialNotDerivation(format!("{}, {}", self.ids[a], self.ids[b])));
                }
            }
            if !self.d_vec(&self.differential[a]).is_zero() {
                return Err(FacthomError::DifferentialNotDerivation(format!("d² ≠ 0 on {}", self.ids[a])));
            }
            if self.differential[a].entries().iter().any(|(k, _)| self.degrees[*k] != self.degrees[a] + 1) {
                return Err(FacthomError::DifferentialNotDerivation(format!("d({}) is not of degree +1", self.ids[a])));
            }
            if !self.epsilon[a].is_zero() && self.degrees[a] != self.dimension {
                return Err(FacthomError::PairingDegenerate(format!("ε is nonzero on {} outside the top degree", self.ids[a])));
            }
            if !self.eps(&self.differential[a]).is_zero() {
                return Err(FacthomError::EpsilonNotClosed(format!("ε(d{}) ≠ 0", self.ids[a])));
            }
        }
        if self.pairing_matrix().rank() < n {
            return Err(FacthomError::PairingDegenerate("the pairing P^k ⊗ P^{m−k} → ℚ is degenerate".into()));
        }
        Ok(())
    }

    /// The same model with its basis listed in another order.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let pos: Vec<usize> = {
            let mut p = vec![0; order.len()];
            for (new, &old) in order.iter().enumerate() {
                p[old] = new;
            }
            p
        };
        let re = |v: &SparseVec| v.remap(|i| Some(pos[i]));
        let products = self
            .products
            .iter()
            .filter(|((a, b), _)| a <= b)
            .map(|(&(a, b), v)| (pos[a], pos[b], re(v)))
            .collect();
        PDModel::new(
            self.dimension,
            order.iter().map(|&i| self.ids[i].clone()).collect(),
            order.iter().map(|&i| self.degrees[i]).collect(),
            pos[self.unit],
            products,
            order.iter().map(|&i| re(&self.differential[i])).collect(),
            order.iter().map(|&i| self.epsilon[i].clone()).collect(),
        )
        .expect("a permutation of a valid model is valid")
    }
}
