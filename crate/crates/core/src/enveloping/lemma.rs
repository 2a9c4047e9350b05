//! `U_cLie` of a quasi-isomorphism of cLie algebras, checked stratum by
//! stratum along the word-length filtration.

use num_traits::One;

use super::pbw::{CLieAlgebra, Pbw, WordComb};
use super::EnvelopingError;
use crate::bar_cobar::{quasi_iso_check, BettiReport, FilteredComplex};
use crate::graded::{comb_add, comb_axpy, is_odd};
use crate::qlinalg::{sign_scalar, Echelon, Scalar, SparseVec};

/// `U(𝔤)_{≤L}` (modulo `X_𝟙` when `kill_unit`) as a filtered complex on its
/// normal words, filtered by length.
pub struct EnvelopeComplex {
    pub words: indexmap::IndexSet<Vec<usize>>,
    pub complex: FilteredComplex,
}

fn to_vector(words: &indexmap::IndexSet<Vec<usize>>, x: &WordComb) -> SparseVec {
    SparseVec::from_pairs(x.iter().map(|(w, c)| (words.get_index_of(w).expect("normal word within the length bound"), c.clone())))
}

pub fn envelope_complex(lie: &CLieAlgebra, kill_unit: bool, max_len: usize) -> EnvelopeComplex {
    let mut pbw = Pbw::new(lie, kill_unit);
    let words: indexmap::IndexSet<Vec<usize>> = pbw.normal_words(max_len).into_iter().collect();
    let mut differential = Vec::with_capacity(words.len());
    for w in &words {
        // d(X_{i₁}⋯X_{i_k}) = Σ_p (−1)^{|i₁|+⋯+|i_{p−1}|} X_{i₁}⋯X_{d i_p}⋯X_{i_k}.
        let mut out = WordComb::new();
        let mut prefix = 0i64;
        for p in 0..w.len() {
            let s = sign_scalar(is_odd(prefix));
            for (k, c) in lie.differential[w[p]].entries() {
                let mut nw = w.clone();
                nw[p] = *k;
                let nf = pbw.normal_form(&nw);
                comb_axpy(&mut out, &(&s * c), &nf);
            }
            prefix += lie.degrees[w[p]];
        }
        differential.push(to_vector(&words, &out));
    }
    let complex = FilteredComplex {
        weights: words.iter().map(Vec::len).collect(),
        degrees: words.iter().map(|w| pbw.degree(w)).collect(),
        differential,
    };
    EnvelopeComplex { words, complex }
}

/// The map `U(𝔤) → U(𝔥)` induced by `f` (columns are images of basis vectors).
pub fn induced_map(f: &[SparseVec], src: &EnvelopeComplex, h: &CLieAlgebra, kill_unit: bool, tgt: &EnvelopeComplex) -> Vec<SparseVec> {
    let mut pbw = Pbw::new(h, kill_unit);
    src.words
        .iter()
        .map(|w| {
            let mut acc: WordComb = std::iter::once((Vec::new(), Scalar::one())).collect();
            for &i in w {
                let mut next = WordComb::new();
                for (u, x) in &acc {
                    for (k, y) in f[i].entries() {
                        let mut nw = u.clone();
                        nw.push(*k);
                        comb_add(&mut next, nw, x * y);
                    }
                }
                acc = next;
            }
            to_vector(&tgt.words, &pbw.normalize(&acc))
        })
        .collect()
}

/// Whether `𝟙` is a boundary of `𝔤`.
pub fn unit_is_boundary(lie: &CLieAlgebra) -> bool {
    let Some(u) = lie.unit else { return false };
    let mut image = Echelon::new();
    for v in &lie.differential {
        image.insert(v);
    }
    image.contains(&SparseVec::unit(u))
}

/// Checks that `f : 𝔤 → 𝔥` is a morphism of dg cLie algebras sending unit to unit.
pub fn check_clie_morphism(g: &CLieAlgebra, h: &CLieAlgebra, f: &[SparseVec]) -> Result<(), EnvelopingError> {
    let apply = |v: &SparseVec| {
        let mut out = SparseVec::new();
        for (i, x) in v.entries() {
            out = out.axpy(x, &f[*i]);
        }
        out
    };
    for i in 0..g.dim() {
        if f[i].entries().iter().any(|(k, _)| h.degrees[*k] != g.degrees[i]) {
            return Err(EnvelopingError::NotAMorphism(format!("f(e_{i}) has the wrong degree")));
        }
        if apply(&g.differential[i]) != h.apply_d(&f[i]) {
            return Err(EnvelopingError::NotAMorphism(format!("f does not commute with d on e_{i}")));
        }
        for j in 0..g.dim() {
            if apply(&g.bracket(i, j)) != h.bracket_vec(&f[i], &f[j]) {
                return Err(EnvelopingError::NotAMorphism(format!("f does not preserve [e_{i}, e_{j}]")));
            }
        }
    }
    match (g.unit, h.unit) {
        (Some(u), Some(v)) if f[u] == SparseVec::unit(v) => Ok(()),
        _ => Err(EnvelopingError::NotAMorphism("f does not send the unit to the unit".into())),
    }
}

fn as_complex(lie: &CLieAlgebra) -> FilteredComplex {
    FilteredComplex { weights: vec![0; lie.dim()], degrees: lie.degrees.clone(), differential: lie.differential.clone() }
}

/// The induced map `U_cLie(𝔤) → U_cLie(𝔥)` on word-length strata `≤ max_len`.
///
/// Errors with `HypothesisViolated` when a unit is a boundary, and with
/// `NotAQuasiIsomorphism` when `f` itself is not one.
pub fn clie_qiso_preservation_test(
    g: &CLieAlgebra,
    h: &CLieAlgebra,
    f: &[SparseVec],
    max_len: usize,
) -> Result<BettiReport, EnvelopingError> {
    g.validate()?;
    h.validate()?;
    check_clie_morphism(g, h, f)?;
    for (name, lie) in [("source", g), ("target", h)] {
        if unit_is_boundary(lie) {
            return Err(EnvelopingError::HypothesisViolated(format!("the unit of the {name} is a boundary")));
        }
    }
    let base = quasi_iso_check(f, &as_complex(g), &as_complex(h), 0)
        .map_err(|w| EnvelopingError::NotAMorphism(w.residue))?;
    if !base.passed() {
        return Err(EnvelopingError::NotAQuasiIsomorphism);
    }
    let ug = envelope_complex(g, true, max_len);
    let uh = envelope_complex(h, true, max_len);
    let uf = induced_map(f, &ug, h, true, &uh);
    quasi_iso_check(&uf, &ug.complex, &uh.complex, max_len).map_err(|w| EnvelopingError::NotAMorphism(w.residue))
}

/// Sanity of the normal form: rewriting leftmost-first and rightmost-first agree.
pub fn rewriting_is_confluent(lie: &CLieAlgebra, kill_unit: bool, words: &[Vec<usize>]) -> bool {
    let mut pbw = Pbw::new(lie, kill_unit);
    words.iter().all(|w| pbw.normal_form(w) == pbw.normal_form_rightmost(w))
}

