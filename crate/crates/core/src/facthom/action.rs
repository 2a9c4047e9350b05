//! The right `uCom`-module structure of `𝒢_P^∨`: an element of arity `k` is a
//! combination of products of factors `p ⊗ λ`, where `λ` is a Lie word and
//! every variable `1..k` occurs in exactly one factor.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::model::PDModel;
use super::FacthomError;
use crate::graded::is_odd;
use crate::qlinalg::{sign_scalar, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LieWord {
    Var(usize),
    Bracket(Box<LieWord>, Box<LieWord>),
}

impl LieWord {
    pub fn bracket(a: LieWord, b: LieWord) -> Self {
        LieWord::Bracket(Box::new(a), Box::new(b))
    }

    pub fn brackets(&self) -> usize {
        match self {
            LieWord::Var(_) => 0,
            LieWord::Bracket(a, b) => 1 + a.brackets() + b.brackets(),
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        match self {
            LieWord::Var(x) => *x == v,
            LieWord::Bracket(a, b) => a.contains(v) || b.contains(v),
        }
    }

    fn min_var(&self) -> usize {
        match self {
            LieWord::Var(x) => *x,
            LieWord::Bracket(a, b) => a.min_var().min(b.min_var()),
        }
    }

    fn rename(&self, f: &dyn Fn(usize) -> usize) -> LieWord {
        match self {
            LieWord::Var(x) => LieWord::Var(f(*x)),
            LieWord::Bracket(a, b) => LieWord::bracket(a.rename(f), b.rename(f)),
        }
    }

    /// Renames variables: `v ↦ f(v)`, and replaces variable `at` by `with`.
    fn substitute(&self, at: usize, with: &LieWord, f: &dyn Fn(usize) -> usize) -> LieWord {
        match self {
            LieWord::Var(x) if *x == at => with.clone(),
            LieWord::Var(x) => LieWord::Var(f(*x)),
            LieWord::Bracket(a, b) => LieWord::bracket(a.substitute(at, with, f), b.substitute(at, with, f)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub p: usize,
    pub lie: LieWord,
}

/// A product of factors, ordered by their smallest variable.
pub type GTerm = Vec<Factor>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GElement {
    pub arity: usize,
    pub terms: BTreeMap<GTerm, Scalar>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UcomGenerator {
    Unit,
    Product,
    Bracket,
}

impl GElement {
    /// `x ⊗ id` in arity 1.
    pub fn identity_on(p: usize) -> Self {
        let term = vec![Factor { p, lie: LieWord::Var(1) }];
        GElement { arity: 1, terms: std::iter::once((term, Scalar::one())).collect() }
    }

    pub fn scalar(c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        GElement { arity: 0, terms }
    }

    pub fn zero(arity: usize) -> Self {
        GElement { arity, terms: BTreeMap::new() }
    }

    fn add(&mut self, model: &PDModel, n: i64, mut term: GTerm, c: Scalar) {
        let sign = sort_factors(model, n, &mut term);
        let e = self.terms.entry(term).or_insert_with(Scalar::zero);
        *e += c * sign;
        self.terms.retain(|_, v| !v.is_zero());
    }
}

fn factor_degree(model: &PDModel, n: i64, f: &Factor) -> i64 {
    model.homological_degree(f.p) + (n - 1) * f.lie.brackets() as i64
}

/// Stable insertion sort by smallest variable, with the Koszul sign.
fn sort_factors(model: &PDModel, n: i64, term: &mut GTerm) -> Scalar {
    let mut neg = false;
    for i in 1..term.len() {
        let mut j = i;
        while j > 0 && term[j - 1].lie.min_var() > term[j].lie.min_var() {
            neg ^= is_odd(factor_degree(model, n, &term[j - 1]) * factor_degree(model, n, &term[j]));
            term.swap(j - 1, j);
            j -= 1;
        }
    }
    sign_scalar(neg)
}

/// `x ∘_i g` for `g ∈ {𝟙, μ, λ}`, slots counted from 1.
///
/// `𝟙` applies `ε` to a bare factor and kills a bracketed one; `μ` splits the
/// factor through `Δ` and the Leibniz rule; `λ` inserts a bracket.
pub fn module_action(
    model: &PDModel,
    n: i64,
    x: &GElement,
    slot: usize,
    g: UcomGenerator,
) -> Result<GElement, FacthomError> {
    if slot == 0 || slot > x.arity {
        return Err(FacthomError::SlotOutOfRange { slot, arity: x.arity });
    }
    let i = slot;
    let mut out = match g {
        UcomGenerator::Unit => GElement::zero(x.arity - 1),
        _ => GElement::zero(x.arity + 1),
    };
    let down = |v: usize| if v > i { v - 1 } else { v };
    let up = |v: usize| if v > i { v + 1 } else { v };
    for (term, c) in &x.terms {
        let at = term.iter().position(|f| f.lie.contains(i)).expect("every variable occurs once");
        match g {
            UcomGenerator::Unit => {
                if term[at].lie.brackets() > 0 {
                    continue;
                }
                let e = model.epsilon[term[at].p].clone();
                // Moving the factor to the end before evaluating ε.
                let later: i64 = term[at + 1..].iter().map(|f| factor_degree(model, n, f)).sum();
                let s = sign_scalar(is_odd(later * factor_degree(model, n, &term[at])));
                let rest: GTerm = term
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != at)
                    .map(|(_, f)| Factor { p: f.p, lie: f.lie.rename(&down) })
                    .collect();
                out.add(model, n, rest, c * e * s);
            }
            UcomGenerator::Bracket => {
                let with = LieWord::bracket(LieWord::Var(i), LieWord::Var(i + 1));
                let new: GTerm = term
                    .iter()
                    .map(|f| Factor { p: f.p, lie: f.lie.substitute(i, &with, &up) })
                    .collect();
                out.add(model, n, new, c.clone());
            }
            UcomGenerator::Product => {
                let renamed: Vec<Factor> = term
                    .iter()
                    .map(|f| Factor { p: f.p, lie: f.lie.rename(&up) })
                    .collect();
                let target = &term[at];
                let bare = target.lie.brackets() == 0;
                for (p1, p2, d) in model.coproduct(target.p)? {
                    // λ(y_i y_{i+1}) = λ(y_i)·y_{i+1} + y_i·λ(y_{i+1}) for degree-0 variables.
                    let splits: Vec<(LieWord, LieWord)> = if bare {
                        vec![(LieWord::Var(i), LieWord::Var(i + 1))]
                    } else {
                        vec![
                            (target.lie.substitute(i, &LieWord::Var(i), &up), LieWord::Var(i + 1)),
                            (LieWord::Var(i), target.lie.substitute(i, &LieWord::Var(i + 1), &up)),
                        ]
                    };
                    for (l1, l2) in splits {
                        let mut new = renamed.clone();
                        new[at] = Factor { p: p1, lie: l1 };
                        new.insert(at + 1, Factor { p: p2, lie: l2 });
                        out.add(model, n, new, c * &d);
                    }
                }
            }
        }
    }
    Ok(out)
}
