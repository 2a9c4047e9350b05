//! The identification of the unital CE complex of a perfectly paired abelian
//! cLie algebra with the algebraic de Rham complex `ℚ[x_1..x_r] ⊗ Λ(dx_1..dx_r)`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::ce::CEComplex;
use super::FacthomError;
use crate::graded::is_odd;
use crate::qlinalg::{rref, sign_scalar, Scalar, SparseMatrix, SparseVec};

/// Polynomial differential forms: `(exponents, sorted dx indices) ↦ coefficient`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeRhamForm(pub BTreeMap<(Vec<usize>, Vec<usize>), Scalar>);

impl DeRhamForm {
    pub fn term(exps: Vec<usize>, forms: Vec<usize>, c: Scalar) -> Self {
        let mut f = DeRhamForm::default();
        f.add(exps, forms, c);
        f
    }

    pub fn add(&mut self, exps: Vec<usize>, forms: Vec<usize>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry((exps, forms)).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.0.retain(|_, v| !v.is_zero());
        }
    }

    pub fn axpy(&mut self, c: &Scalar, other: &DeRhamForm) {
        for ((e, f), x) in &other.0 {
            self.add(e.clone(), f.clone(), c * x);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `d(x^a dx_S) = Σ_i a_i x^{a − e_i} dx_i ∧ dx_S`.
    pub fn d(&self) -> DeRhamForm {
        let mut out = DeRhamForm::default();
        for ((a, s), c) in &self.0 {
            for i in 0..a.len() {
                if a[i] == 0 || s.contains(&i) {
                    continue;
                }
                let mut na = a.clone();
                na[i] -= 1;
                let before = s.iter().filter(|&&j| j < i).count();
                let mut ns = s.clone();
                ns.insert(before, i);
                out.add(na, ns, c * Scalar::from_integer(a[i].into()) * sign_scalar(before % 2 == 1));
            }
        }
        out
    }

    /// Contraction with the Euler field: `h(dx_i) = x_i`, `h(x_i) = 0`.
    pub fn h(&self) -> DeRhamForm {
        let mut out = DeRhamForm::default();
        for ((a, s), c) in &self.0 {
            for (pos, &i) in s.iter().enumerate() {
                let mut na = a.clone();
                na[i] += 1;
                let mut ns = s.clone();
                ns.remove(pos);
                out.add(na, ns, c * sign_scalar(pos % 2 == 1));
            }
        }
        out
    }
}

/// A basis `x_i` of the even letters, the dual basis `x_i*` inside the odd
/// letters with `d_CE(x_i ∧ x_j*) = δ_ij`, and the change of basis back.
#[derive(Clone, Debug)]
pub struct DeRham {
    pub r: usize,
    pub even: Vec<usize>,
    pub odd: Vec<usize>,
    /// `x_j*` in letter coordinates.
    pub dual: Vec<SparseVec>,
    /// `odd[o] = Σ_j back[o][j] x_j*`.
    back: Vec<Vec<Scalar>>,
}

pub fn de_rham_identify(ce: &CEComplex) -> Result<DeRham, FacthomError> {
    let data = &ce.data;
    if data.l1.iter().any(|(v, c)| !v.is_zero() || !c.is_zero()) || data.l2.values().any(|(v, _)| !v.is_zero()) {
        return Err(FacthomError::Unsupported("the de Rham identification needs an abelian cLie algebra".into()));
    }
    let (even, odd): (Vec<usize>, Vec<usize>) = (0..data.dim()).partition(|&k| !is_odd(data.degrees[k]));
    let r = even.len();
    if odd.len() != r {
        return Err(FacthomError::PairingDegenerate(format!("{r} even letters against {} odd ones", odd.len())));
    }
    let pair = |a: usize, b: usize| data.l2.get(&(a, b)).map(|v| v.1.clone()).unwrap_or_else(Scalar::zero);
    for (set, name) in [(&even, "even"), (&odd, "odd")] {
        for &a in set.iter() {
            for &b in set.iter() {
                if !pair(a, b).is_zero() {
                    return Err(FacthomError::Unsupported(format!("two {name} letters pair nontrivially")));
                }
            }
        }
    }
    // B[i][o] = ⟨x_i, odd_o⟩; the dual basis is the columns of B⁻¹.
    let n = r;
    let rows: Vec<SparseVec> = (0..n)
        .map(|i| {
            let mut e: Vec<(usize, Scalar)> = (0..n).map(|o| (o, pair(even[i], odd[o]))).collect();
            e.push((n + i, Scalar::one()));
            SparseVec::from_pairs(e.into_iter().filter(|(_, x)| !x.is_zero()))
        })
        .collect();
    let (red, pivots) = rref(&SparseMatrix::from_rows(2 * n, rows));
    if pivots.iter().filter(|&&p| p < n).count() < n {
        return Err(FacthomError::PairingDegenerate("even and odd letters are not perfectly paired".into()));
    }
    let dual = (0..n)
        .map(|j| SparseVec::from_pairs((0..n).map(|o| (odd[o], red.get(o, n + j))).filter(|(_, x)| !x.is_zero())))
        .collect();
    let back = (0..n).map(|o| (0..n).map(|j| pair(even[j], odd[o])).collect()).collect();
    Ok(DeRham { r, even, odd, dual, back })
}

impl DeRham {
    /// `⋀_j x_j*` in the word basis.
    pub fn representative(&self, ce: &CEComplex) -> Result<SparseVec, FacthomError> {
        ce.wedge(&self.dual)
            .ok_or_else(|| FacthomError::Unsupported(format!("⋀ x_j* has length {} beyond the truncation", self.r)))
    }

    /// `σ(J) = (−1)^{Σ_{j∈J} j + r(r−1)/2}` (indices from 0): the chain-map
    /// condition fixes `σ` up to one global sign, chosen so that `⋀_j x_j* ↦ 1`.
    pub fn orientation(&self, j: &[usize]) -> Scalar {
        sign_scalar((j.iter().sum::<usize>() + self.r * (self.r.saturating_sub(1)) / 2) % 2 == 1)
    }

    /// `x^a ∧ x*_J ↦ σ(J) x^a dx_{J^c}` for `J` sorted.
    pub fn phi_basic(&self, a: Vec<usize>, j: &[usize]) -> DeRhamForm {
        let comp: Vec<usize> = (0..self.r).filter(|i| !j.contains(i)).collect();
        DeRhamForm::term(a, comp, self.orientation(j))
    }

    /// The image of the `i`-th CE word.
    pub fn phi(&self, ce: &CEComplex, i: usize) -> DeRhamForm {
        let mut a = vec![0usize; self.r];
        let mut odds = Vec::new();
        for &k in &ce.words[i] {
            match self.even.iter().position(|&e| e == k) {
                Some(p) => a[p] += 1,
                None => odds.push(self.odd.iter().position(|&o| o == k).expect("letters are even or odd")),
            }
        }
        // Even letters commute past everything; expand the odd ones in x_j*.
        let mut terms: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), Scalar::one())];
        for o in odds {
            let mut next = Vec::new();
            for (js, c) in &terms {
                for (j, b) in self.back[o].iter().enumerate() {
                    if b.is_zero() || js.contains(&j) {
                        continue;
                    }
                    let mut nj = js.clone();
                    nj.push(j);
                    next.push((nj, c * b));
                }
            }
            terms = next;
        }
        let mut out = DeRhamForm::default();
        for (js, c) in terms {
            let inversions = (0..js.len()).flat_map(|p| (p + 1..js.len()).map(move |q| (p, q))).filter(|&(p, q)| js[p] > js[q]).count();
            let mut sorted = js.clone();
            sorted.sort();
            out.axpy(&(c * sign_scalar(inversions % 2 == 1)), &self.phi_basic(a.clone(), &sorted));
        }
        out
    }

    pub fn phi_vec(&self, ce: &CEComplex, v: &SparseVec) -> DeRhamForm {
        let mut out = DeRhamForm::default();
        for (i, c) in v.entries() {
            out.axpy(c, &self.phi(ce, *i));
        }
        out
    }

    /// Checks `Φ ∘ d_CE = d_dR ∘ Φ` on every word of the truncation.
    pub fn check_chain_map(&self, ce: &CEComplex) -> Result<(), FacthomError> {
        for i in 0..ce.dim() {
            if self.phi_vec(ce, &ce.complex.differential[i]) != self.phi(ce, i).d() {
                return Err(FacthomError::Unsupported(format!("Φ is not a chain map on {}", ce.word_label(i))));
            }
        }
        Ok(())
    }

    /// Checks `hd + dh = (p + q)·id` on every basis form of polynomial degree
    /// `≤ max_poly`; returns the number of forms checked.
    pub fn check_homotopy(&self, max_poly: usize) -> Result<usize, FacthomError> {
        let mut count = 0;
        for a in exponent_vectors(self.r, max_poly) {
            let p: usize = a.iter().sum();
            for mask in 0u32..(1u32 << self.r) {
                let s: Vec<usize> = (0..self.r).filter(|&i| mask & (1 << i) != 0).collect();
                let q = s.len();
                let f = DeRhamForm::term(a.clone(), s, Scalar::one());
                let mut lhs = f.d().h();
                lhs.axpy(&Scalar::one(), &f.h().d());
                let mut expect = DeRhamForm::default();
                expect.axpy(&Scalar::from_integer(((p + q) as i64).into()), &f);
                if lhs != expect {
                    return Err(FacthomError::Unsupported(format!("hd + dh ≠ (p+q)·id at bidegree ({p}, {q})")));
                }
                count += 1;
            }
        }
        Ok(count)
    }
}

fn exponent_vectors(r: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0; r]];
    for i in 0..r {
        let mut next = Vec::new();
        for a in &out {
            let used: usize = a.iter().sum();
            for k in 0..=max - used {
                let mut na = a.clone();
                na[i] = k;
                next.push(na);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homotopy_on_three_variables() {
        let dr = DeRham { r: 3, even: vec![], odd: vec![], dual: vec![], back: vec![] };
        assert!(dr.check_homotopy(3).unwrap() > 0);
        assert_eq!(exponent_vectors(2, 2).len(), 6);
    }
}
