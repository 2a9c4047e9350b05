//! Unital Chevalley–Eilenberg complexes `S^c(Σ𝔤)` of cLie algebras of the
//! form `P^{−*} ⊗ 𝔩`, where `𝔩` is a dg Lie algebra whose bracket and
//! differential may produce the unit; unit letters `p ⊗ 𝟙` are identified
//! with the scalar `ε(p)`.

use std::collections::BTreeMap;

use indexmap::IndexSet;
use num_traits::Zero;

use super::model::PDModel;
use super::FacthomError;
use crate::bar_cobar::FilteredComplex;
use crate::graded::{is_odd, sym_canonicalize};
use crate::qlinalg::{sign_scalar, Scalar, SparseVec, VecBuilder};

/// A value of a bracket or differential: a vector plus a multiple of the unit.
pub type WithUnit = (SparseVec, Scalar);

/// A dg Lie algebra `𝔩` on a homogeneous basis together with a central
/// closed unit kept outside the basis.
#[derive(Clone, Debug)]
pub struct UnitalLie {
    pub degrees: Vec<i64>,
    pub weights: Vec<usize>,
    pub labels: Vec<String>,
    /// `[e_i, e_j]` for ordered pairs; absent pairs bracket to zero.
    pub bracket: BTreeMap<(usize, usize), WithUnit>,
    pub differential: Vec<WithUnit>,
}

impl UnitalLie {
    pub fn dim(&self) -> usize {
        self.degrees.len()
    }
}

/// The letters of `S^c(Σ𝔤)` with the two structure maps on them, in the
/// shifted symmetric form: `ℓ₁(sa) = −s(da)` and
/// `ℓ₂(sa, sb) = (−1)^{|a|} s[a, b]`.
#[derive(Clone, Debug)]
pub struct CEData {
    pub labels: Vec<String>,
    /// Degrees in `Σ𝔤`; these fix all Koszul signs.
    pub degrees: Vec<i64>,
    /// The grading used for homology; agrees with `degrees` mod 2 whenever
    /// the construction is well posed.
    pub grades: Vec<i64>,
    pub weights: Vec<usize>,
    pub l1: Vec<WithUnit>,
    pub l2: BTreeMap<(usize, usize), WithUnit>,
}

impl CEData {
    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    fn l2(&self, i: usize, j: usize) -> Option<&WithUnit> {
        self.l2.get(&(i, j))
    }
}

/// Letters `s(p ⊗ l)` of `P^{−*} ⊗ 𝔩` for a model of dimension `m`, with the
/// grade shifted by `(m − n)|p|/m` so that the pairing into the unit has
/// degree −1 as it would for `m = n`.
pub fn tensor_with_model(p: &PDModel, lie: &UnitalLie, n: i64) -> Result<CEData, FacthomError> {
    let m = p.dimension;
    let mut letters = Vec::new();
    for a in 0..p.dim() {
        for l in 0..lie.dim() {
            letters.push((a, l));
        }
    }
    let index: BTreeMap<(usize, usize), usize> = letters.iter().enumerate().map(|(k, &x)| (x, k)).collect();
    let hom = |a: usize| p.homological_degree(a);
    let mut grades = Vec::with_capacity(letters.len());
    for &(a, l) in &letters {
        let shift = (m - n) * p.degrees[a];
        if m != 0 && shift % m != 0 {
            return Err(FacthomError::Unsupported(format!(
                "no integral grading: (m − n)|p|/m is fractional for {} (m = {m}, n = {n})",
                p.ids[a]
            )));
        }
        grades.push(hom(a) + lie.degrees[l] + 1 + if m == 0 { 0 } else { shift / m });
    }
    let degrees: Vec<i64> = letters.iter().map(|&(a, l)| hom(a) + lie.degrees[l] + 1).collect();
    // x ⊗ (vector in 𝔩, unit coefficient) ↦ letters plus ε(x)·unit.
    let embed = |x: &SparseVec, v: &WithUnit, scale: &Scalar| -> WithUnit {
        let mut b = VecBuilder::new();
        let mut unit = Scalar::zero();
        for (a, s) in x.entries() {
            for (l, t) in v.0.entries() {
                b.add(index[&(*a, *l)], s * t * scale);
            }
            unit += s * &v.1 * scale * &p.epsilon[*a];
        }
        (b.finish(), unit)
    };
    let mut l1 = Vec::with_capacity(letters.len());
    for &(a, l) in &letters {
        // d(p ⊗ l) = dp ⊗ l + (−1)^{|p|} p ⊗ dl, with the homological d of P
        // being the transpose of nothing: the upper d raises upper degree,
        // i.e. lowers homological degree.
        let dp = embed(&p.differential[a], &(SparseVec::unit(l), Scalar::zero()), &Scalar::from_integer((-1).into()));
        let dl = embed(&SparseVec::unit(a), &lie.differential[l], &-sign_scalar(is_odd(hom(a))));
        l1.push((dp.0.add(&dl.0), dp.1 + dl.1));
    }
    let mut l2 = BTreeMap::new();
    for (i, &(a, la)) in letters.iter().enumerate() {
        for (j, &(b, lb)) in letters.iter().enumerate() {
            let Some(br) = lie.bracket.get(&(la, lb)) else { continue };
            let pp = p.mul(a, b);
            if pp.is_zero() {
                continue;
            }
            // [p⊗x, q⊗y] = (−1)^{|x||q|} pq ⊗ [x, y], then the shift sign (−1)^{|p⊗x|}.
            let s = sign_scalar(is_odd(lie.degrees[la] * hom(b)) ^ is_odd(hom(a) + lie.degrees[la]));
            let v = embed(&pp, br, &s);
            if !v.0.is_zero() || !v.1.is_zero() {
                l2.insert((i, j), v);
            }
        }
    }
    Ok(CEData {
        labels: letters.iter().map(|&(a, l)| format!("{}⊗{}", p.ids[a], lie.labels[l])).collect(),
        weights: letters.iter().map(|&(_, l)| lie.weights[l]).collect(),
        degrees,
        grades,
        l1,
        l2,
    })
}

/// `S^c(Σ𝔤)` truncated at total weight `max_weight` and length `max_length`,
/// with its differential split into the parts coming from `ℓ₁`'s unit
/// component (which removes a letter), `ℓ₁`'s vector component, and `ℓ₂`.
pub struct CEComplex {
    pub data: CEData,
    pub words: IndexSet<Vec<usize>>,
    pub lengths: Vec<usize>,
    pub complex: FilteredComplex,
    pub d_unit: Vec<SparseVec>,
    pub d_inner: Vec<SparseVec>,
    pub d_pair: Vec<SparseVec>,
}

fn words_upto(data: &CEData, max_weight: usize, max_length: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![(Vec::<usize>::new(), 0usize)];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (w, wt) in &frontier {
            if w.len() == max_length {
                continue;
            }
            let start = w.last().copied().unwrap_or(0);
            for k in start..data.dim() {
                if wt + data.weights[k] > max_weight || (w.last() == Some(&k) && is_odd(data.degrees[k])) {
                    continue;
                }
                let mut nw = w.clone();
                nw.push(k);
                next.push((nw, wt + data.weights[k]));
            }
        }
        out.extend(next.iter().map(|(w, _)| w.clone()));
        frontier = next;
    }
    out
}

pub fn ce_complex(data: CEData, max_weight: usize, max_length: usize) -> Result<CEComplex, FacthomError> {
    let words: IndexSet<Vec<usize>> = words_upto(&data, max_weight, max_length).into_iter().collect();
    let place = |b: &mut VecBuilder, word: Vec<usize>, c: Scalar| -> Result<(), FacthomError> {
        if c.is_zero() {
            return Ok(());
        }
        let Some(sw) = sym_canonicalize(&word, &data.degrees) else { return Ok(()) };
        let k = words
            .get_index_of(&sw.gens)
            .ok_or_else(|| FacthomError::Unsupported(format!("the differential leaves the truncation at {:?}", sw.gens)))?;
        b.add(k, c * sw.sign());
        Ok(())
    };
    let (mut d_unit, mut d_inner, mut d_pair) = (Vec::new(), Vec::new(), Vec::new());
    for w in &words {
        let (mut bu, mut bi, mut bp) = (VecBuilder::new(), VecBuilder::new(), VecBuilder::new());
        let pre: Vec<i64> = w
            .iter()
            .scan(0i64, |acc, &k| {
                let before = *acc;
                *acc += data.degrees[k];
                Some(before)
            })
            .collect();
        for i in 0..w.len() {
            let si = sign_scalar(is_odd(data.degrees[w[i]] * pre[i]));
            let rest: Vec<usize> = w.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &x)| x).collect();
            let (v, c) = &data.l1[w[i]];
            place(&mut bu, rest.clone(), &si * c)?;
            for (l, x) in v.entries() {
                let word: Vec<usize> = std::iter::once(*l).chain(rest.iter().copied()).collect();
                place(&mut bi, word, &si * x)?;
            }
            for j in i + 1..w.len() {
                let Some((v, c)) = data.l2(w[i], w[j]) else { continue };
                let (di, dj) = (data.degrees[w[i]], data.degrees[w[j]]);
                let s = sign_scalar(is_odd(di * pre[i] + dj * (pre[j] - di)));
                let rest: Vec<usize> =
                    w.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &x)| x).collect();
                place(&mut bp, rest.clone(), &s * c)?;
                for (l, x) in v.entries() {
                    let word: Vec<usize> = std::iter::once(*l).chain(rest.iter().copied()).collect();
                    place(&mut bp, word, &s * x)?;
                }
            }
        }
        d_unit.push(bu.finish());
        d_inner.push(bi.finish());
        d_pair.push(bp.finish());
    }
    let differential = (0..words.len()).map(|i| d_unit[i].add(&d_inner[i]).add(&d_pair[i])).collect();
    let complex = FilteredComplex {
        weights: words.iter().map(|w| w.iter().map(|&k| data.weights[k]).sum()).collect(),
        degrees: words.iter().map(|w| w.iter().map(|&k| data.grades[k]).sum()).collect(),
        differential,
    };
    let lengths = words.iter().map(Vec::len).collect();
    Ok(CEComplex { data, words, lengths, complex, d_unit, d_inner, d_pair })
}

impl CEComplex {
    pub fn dim(&self) -> usize {
        self.words.len()
    }

    /// Expresses a wedge of letter combinations in the word basis.
    pub fn wedge(&self, factors: &[SparseVec]) -> Option<SparseVec> {
        let mut terms: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), Scalar::from_integer(1.into()))];
        for f in factors {
            let mut next = Vec::new();
            for (w, c) in &terms {
                for (k, x) in f.entries() {
                    let mut nw = w.clone();
                    nw.push(*k);
                    next.push((nw, c * x));
                }
            }
            terms = next;
        }
        let mut b = VecBuilder::new();
        for (w, c) in terms {
            if let Some(sw) = sym_canonicalize(&w, &self.data.degrees) {
                b.add(self.words.get_index_of(&sw.gens)?, c * sw.sign());
            }
        }
        Some(b.finish())
    }
}
