//! Free operads and free algebras on binary generators, spanned by tree
//! monomials, together with quotient strata computed by exact elimination.
//!
//! A tree is stored as its preorder symbol sequence: each vertex is followed by
//! its left subtree and then its right subtree. The element it represents is
//! the tensor product of its symbols in that order, so every sign below is a
//! Koszul sign for reordering such tensors.

use std::collections::{BTreeMap, HashMap};

use indexmap::IndexSet;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graded::{is_odd, reorder_parity};
use crate::qlinalg::{q, sign_scalar, Echelon, Scalar, SparseVec, VecBuilder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OperadError {
    #[error("slot {slot} out of range for arity {arity}")]
    SlotOutOfRange { slot: usize, arity: usize },
    #[error("requested {what} {requested} exceeds the truncation bound {bound}")]
    TruncationExceeded { what: &'static str, requested: usize, bound: usize },
    #[error("relation outside the quadratic-linear-constant shape: {0}")]
    RelationOutsideQlcShape(String),
    #[error("presentation is not quadratic: {0}")]
    NotQuadratic(String),
    #[error("unknown built-in operad `{0}`")]
    UnknownOperad(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// One symbol of a preorder tree sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sym {
    /// Binary vertex labeled by a generator index.
    Op(u8),
    /// Input slot (operad trees) or algebra generator (algebra trees).
    Leaf(u16),
    /// The arity-zero unit.
    Unit,
}

pub type Tree = Vec<Sym>;
pub type LinComb = BTreeMap<Tree, Scalar>;

pub fn add_term(map: &mut LinComb, t: Tree, c: Scalar) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(t) {
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
        Entry::Vacant(v) => {
            v.insert(c);
        }
    }
}

pub fn add_comb(map: &mut LinComb, other: &LinComb, c: &Scalar) {
    for (t, x) in other {
        add_term(map, t.clone(), x * c);
    }
}

/// End (exclusive) of the subtree starting at `i`.
pub fn subtree_end(t: &[Sym], i: usize) -> usize {
    let mut need = 1usize;
    let mut j = i;
    while need > 0 {
        match t[j] {
            Sym::Op(_) => need += 1,
            _ => need -= 1,
        }
        j += 1;
    }
    j
}

/// Positions of the two children of the vertex at `i`, plus the end of its subtree.
pub fn children(t: &[Sym], i: usize) -> (usize, usize, usize) {
    let l = i + 1;
    let r = subtree_end(t, l);
    (l, r, subtree_end(t, r))
}

pub fn leaf_count(t: &[Sym]) -> usize {
    t.iter().filter(|s| !matches!(s, Sym::Op(_))).count()
}

pub fn vertex_count(t: &[Sym]) -> usize {
    t.iter().filter(|s| matches!(s, Sym::Op(_))).count()
}

/// Degree data for a family of trees.
#[derive(Clone, Debug)]
pub struct Grading {
    /// `(degree, symmetric)` per binary generator; `symmetric` is the Σ₂ character.
    pub ops: Vec<(i64, bool)>,
    /// Degrees of leaf labels; empty means every leaf has degree zero.
    pub leaves: Vec<i64>,
}

impl Grading {
    pub fn operadic(ops: Vec<(i64, bool)>) -> Self {
        Grading { ops, leaves: Vec::new() }
    }

    pub fn with_leaves(&self, leaves: Vec<i64>) -> Self {
        Grading { ops: self.ops.clone(), leaves }
    }

    pub fn sym_degree(&self, s: Sym) -> i64 {
        match s {
            Sym::Op(g) => self.ops[g as usize].0,
            Sym::Leaf(l) => self.leaves.get(l as usize).copied().unwrap_or(0),
            Sym::Unit => 0,
        }
    }

    pub fn degree(&self, t: &[Sym]) -> i64 {
        t.iter().map(|&s| self.sym_degree(s)).sum()
    }

    fn odd_degree(&self, t: &[Sym]) -> bool {
        is_odd(self.degree(t))
    }

    /// Canonical representative: at every vertex the smaller subtree comes first.
    /// Returns `None` for trees that vanish by symmetry.
    pub fn canonical(&self, t: &[Sym]) -> Option<(bool, Tree)> {
        let mut out = Vec::with_capacity(t.len());
        let neg = self.canon_into(t, 0, &mut out)?;
        Some((neg, out))
    }

    fn canon_into(&self, t: &[Sym], i: usize, out: &mut Tree) -> Option<bool> {
        match t[i] {
            Sym::Op(g) => {
                let (l, r, _) = children(t, i);
                let mut a = Vec::new();
                let na = self.canon_into(t, l, &mut a)?;
                let mut b = Vec::new();
                let nb = self.canon_into(t, r, &mut b)?;
                let mut neg = na ^ nb;
                let (deg, sym) = self.ops[g as usize];
                let _ = deg;
                let swap_neg = !sym ^ (self.odd_degree(&a) && self.odd_degree(&b));
                out.push(Sym::Op(g));
                match a.cmp(&b) {
                    std::cmp::Ordering::Greater => {
                        neg ^= swap_neg;
                        out.extend(b);
                        out.extend(a);
                    }
                    std::cmp::Ordering::Equal if swap_neg => return None,
                    _ => {
                        out.extend(a);
                        out.extend(b);
                    }
                }
                Some(neg)
            }
            s => {
                out.push(s);
                Some(false)
            }
        }
    }

    /// Substitutes `subs[j]` for the leaf labeled `j` of the operad tree `t`.
    ///
    /// The sign compares `t ⊗ subs[0] ⊗ subs[1] ⊗ ...` with the interleaved
    /// preorder sequence. `t` is read with operadic leaf degrees (zero).
    pub fn substitute(&self, t: &[Sym], subs: &[Tree]) -> (bool, Tree) {
        // Items: t's vertices in preorder, then the substituted blocks.
        let verts: Vec<usize> = (0..t.len()).filter(|&i| matches!(t[i], Sym::Op(_))).collect();
        let nv = verts.len();
        let mut degs: Vec<i64> = verts.iter().map(|&i| self.sym_degree(t[i])).collect();
        degs.extend(subs.iter().map(|s| self.degree(s)));
        let mut order = Vec::with_capacity(degs.len());
        let mut out = Vec::new();
        let mut vi = 0;
        for &s in t {
            match s {
                Sym::Op(_) => {
                    order.push(vi);
                    vi += 1;
                    out.push(s);
                }
                Sym::Leaf(l) => {
                    order.push(nv + l as usize);
                    out.extend_from_slice(&subs[l as usize]);
                }
                Sym::Unit => {}
            }
        }
        (reorder_parity(&order, &degs), out)
    }

    /// Canonicalized linear combination of `coeff * t`.
    pub fn push(&self, map: &mut LinComb, t: &[Sym], coeff: Scalar) {
        if let Some((neg, c)) = self.canonical(t) {
            add_term(map, c, if neg { -coeff } else { coeff });
        }
    }
}

/// Grafts `s` into leaf `slot` (zero-based) of the operad tree `t`.
///
/// Leaves of `t` after `slot` are shifted by `arity(s) - 1`; the sign is
/// `(-1)^{|s| * (degree of the symbols of t after that leaf)}`.
pub fn compose_tree(g: &Grading, t: &[Sym], slot: usize, s: &[Sym]) -> Result<(bool, Tree), OperadError> {
    let arity = leaf_count(t);
    if slot >= arity {
        return Err(OperadError::SlotOutOfRange { slot, arity });
    }
    let k = leaf_count(s) as u16;
    let pos = t.iter().position(|&x| x == Sym::Leaf(slot as u16)).unwrap();
    let after = g.degree(&t[pos + 1..]);
    let neg = is_odd(g.degree(s)) && is_odd(after);
    let mut out = Vec::with_capacity(t.len() + s.len());
    for (i, &x) in t.iter().enumerate() {
        if i == pos {
            for &y in s {
                out.push(match y {
                    Sym::Leaf(l) => Sym::Leaf(l + slot as u16),
                    o => o,
                });
            }
        } else {
            out.push(match x {
                Sym::Leaf(l) if l as usize > slot => Sym::Leaf(l + k - 1),
                o => o,
            });
        }
    }
    Ok((neg, out))
}

/// Applies `f` to every leaf label.
pub fn relabel(t: &[Sym], f: impl Fn(u16) -> u16) -> Tree {
    t.iter()
        .map(|&s| match s {
            Sym::Leaf(l) => Sym::Leaf(f(l)),
            o => o,
        })
        .collect()
}

/// Canonical operad trees with leaves labeled by the bits of `mask`.
fn operad_trees_on(g: &Grading, mask: u32, memo: &mut HashMap<u32, Vec<Tree>>) -> Vec<Tree> {
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let mut out = Vec::new();
    if mask.count_ones() == 1 {
        out.push(vec![Sym::Leaf(mask.trailing_zeros() as u16)]);
    } else {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        // Enumerate splits with the lowest label on the left.
        let mut sub = rest;
        loop {
            let left = low | sub;
            let right = mask ^ left;
            if right != 0 {
                let ls = operad_trees_on(g, left, memo);
                let rs = operad_trees_on(g, right, memo);
                for op in 0..g.ops.len() {
                    for a in &ls {
                        for b in &rs {
                            let mut t = vec![Sym::Op(op as u8)];
                            t.extend_from_slice(a);
                            t.extend_from_slice(b);
                            if let Some((_, c)) = g.canonical(&t) {
                                out.push(c);
                            }
                        }
                    }
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        out.sort();
        out.dedup();
    }
    memo.insert(mask, out.clone());
    out
}

/// All canonical tree monomials of arity `k` in the free operad.
pub fn free_operad_trees(g: &Grading, k: usize) -> Vec<Tree> {
    if k == 0 {
        return Vec::new();
    }
    let mut memo = HashMap::new();
    operad_trees_on(g, (1u32 << k) - 1, &mut memo)
}

/// All nonvanishing canonical algebra trees with `w` leaves drawn from
/// generators `0..g.leaves.len()`.
pub fn free_algebra_trees(g: &Grading, w: usize) -> Vec<Tree> {
    free_weighted_trees(g, &vec![1; g.leaves.len()], w)
}

/// All nonvanishing canonical algebra trees whose leaf weights sum to `w`,
/// where generator `i` has weight `weights[i] ≥ 1`.
pub fn free_weighted_trees(g: &Grading, weights: &[usize], w: usize) -> Vec<Tree> {
    free_weighted_trees_upto(g, weights, w).swap_remove(w)
}

/// The same, for every total weight `0..=w` at once.
pub fn free_weighted_trees_upto(g: &Grading, weights: &[usize], w: usize) -> Vec<Vec<Tree>> {
    let mut by_weight: Vec<Vec<Tree>> = vec![Vec::new(); w + 1];
    for (i, &wi) in weights.iter().enumerate() {
        if wi >= 1 && wi <= w {
            by_weight[wi].push(vec![Sym::Leaf(i as u16)]);
        }
    }
    for m in 2..=w {
        let mut set: IndexSet<Tree> = IndexSet::new();
        for m1 in 1..=m / 2 {
            let m2 = m - m1;
            for a in &by_weight[m1] {
                for b in &by_weight[m2] {
                    if m1 == m2 && a > b {
                        continue;
                    }
                    for op in 0..g.ops.len() {
                        let mut t = vec![Sym::Op(op as u8)];
                        t.extend_from_slice(a);
                        t.extend_from_slice(b);
                        if let Some((_, c)) = g.canonical(&t) {
                            set.insert(c);
                        }
                    }
                }
            }
        }
        by_weight[m].extend(set);
        by_weight[m].sort();
    }
    by_weight
}

/// The three inputs around every internal edge of `t`: the block `[start, end)`
/// is the two-vertex piece with its inputs.
pub fn edge_contexts(t: &[Sym]) -> Vec<(usize, usize, u8, u8, bool, [Tree; 3])> {
    let mut out = Vec::new();
    for p in 0..t.len() {
        let Sym::Op(top) = t[p] else { continue };
        let (l, r, end) = children(t, p);
        if let Sym::Op(low) = t[l] {
            let (ll, lr, _) = children(t, l);
            out.push((p, end, top, low, true, [t[ll..lr].to_vec(), t[lr..r].to_vec(), t[r..end].to_vec()]));
        }
        if let Sym::Op(low) = t[r] {
            let (rl, rr, _) = children(t, r);
            out.push((p, end, top, low, false, [t[l..r].to_vec(), t[rl..rr].to_vec(), t[rr..end].to_vec()]));
        }
    }
    out
}

/// All relation instances obtained by replacing each internal edge of each tree
/// by each arity-three relation.
pub fn relation_instances(g_rel: &Grading, g: &Grading, trees: &[Tree], rels: &[LinComb]) -> Vec<LinComb> {
    let mut out = Vec::new();
    let mut seen: std::collections::HashSet<(Tree, Tree, [Tree; 3])> = std::collections::HashSet::new();
    for t in trees {
        for (start, end, _, _, _, inputs) in edge_contexts(t) {
            // The relation span is Σ₃-stable, so the input order is irrelevant.
            let mut key_inputs = inputs.clone();
            key_inputs.sort();
            if !seen.insert((t[..start].to_vec(), t[end..].to_vec(), key_inputs)) {
                continue;
            }
            for rho in rels {
                let mut comb = LinComb::new();
                for (rt, c) in rho {
                    let (neg, block) = g_rel_substitute(g_rel, g, rt, &inputs);
                    let mut full = t[..start].to_vec();
                    full.extend(block);
                    full.extend_from_slice(&t[end..]);
                    g.push(&mut comb, &full, if neg { -c.clone() } else { c.clone() });
                }
                if !comb.is_empty() {
                    out.push(comb);
                }
            }
        }
    }
    out
}

/// Substitution where `rt`'s vertex degrees come from `g_rel` and the
/// substituted blocks are read with `g`.
fn g_rel_substitute(g_rel: &Grading, g: &Grading, rt: &[Sym], subs: &[Tree]) -> (bool, Tree) {
    let mixed = Grading { ops: g_rel.ops.clone(), leaves: g.leaves.clone() };
    mixed.substitute(rt, subs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperadGenerator {
    pub id: String,
    pub arity: u8,
    pub degree: i64,
    /// Σ₂ character: `true` for the trivial character.
    pub symmetric: bool,
}

/// A presentation by binary generators and arity-three relations, optionally
/// with an arity-zero unit acting through `g(𝟙, x) = unit_action[g] · x`.
#[derive(Clone, Debug)]
pub struct OperadPresentation {
    pub name: String,
    pub generators: Vec<OperadGenerator>,
    /// Relations in arity three (leaf labels 0, 1, 2), spanning a Σ₃-stable subspace.
    pub relations: Vec<LinComb>,
    pub unit_action: Option<Vec<Scalar>>,
}

impl OperadPresentation {
    pub fn grading(&self) -> Grading {
        Grading::operadic(self.generators.iter().map(|g| (g.degree, g.symmetric)).collect())
    }

    pub fn is_unital(&self) -> bool {
        self.unit_action.is_some()
    }

    pub fn generator_index(&self, id: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.id == id)
    }

    /// The same presentation without its unit.
    pub fn augmented(&self) -> OperadPresentation {
        OperadPresentation { unit_action: None, ..self.clone() }
    }

    /// Basis of the Σ₃-orbit span of the relations, as canonical combinations.
    pub fn relation_basis(&self) -> Vec<LinComb> {
        let g = self.grading();
        let trees = free_operad_trees(&g, 3);
        let index: HashMap<&Tree, usize> = trees.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut e = Echelon::new();
        for rho in &self.relations {
            for perm in PERMS3 {
                let mut comb = LinComb::new();
                for (t, c) in rho {
                    let rt = relabel(t, |l| perm[l as usize]);
                    g.push(&mut comb, &rt, c.clone());
                }
                let v = SparseVec::from_pairs(comb.into_iter().map(|(t, c)| (index[&t], c)));
                e.insert(&v);
            }
        }
        e.reduced_rows()
            .into_iter()
            .map(|row| row.entries().iter().map(|(i, c)| (trees[*i].clone(), c.clone())).collect())
            .collect()
    }
}

const PERMS3: [[u16; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn t2(op: u8, a: Tree, b: Tree) -> Tree {
    let mut t = vec![Sym::Op(op)];
    t.extend(a);
    t.extend(b);
    t
}

fn lf(i: u16) -> Tree {
    vec![Sym::Leaf(i)]
}

fn comb(g: &Grading, terms: Vec<(Tree, i64)>) -> LinComb {
    let mut m = LinComb::new();
    for (t, c) in terms {
        g.push(&mut m, &t, q(c));
    }
    m
}

fn associativity(g: &Grading, op: u8) -> LinComb {
    comb(
        g,
        vec![(t2(op, t2(op, lf(0), lf(1)), lf(2)), 1), (t2(op, lf(0), t2(op, lf(1), lf(2))), -1)],
    )
}

/// The Σ₃-symmetrization of `λ(λ(0,1),2)` with the trivial or sign character,
/// whichever survives.
fn jacobi(g: &Grading, op: u8) -> LinComb {
    let base = t2(op, t2(op, lf(0), lf(1)), lf(2));
    for sign_char in [false, true] {
        let mut m = LinComb::new();
        for perm in PERMS3 {
            let odd_perm = {
                let mut inv = 0;
                for i in 0..3 {
                    for j in i + 1..3 {
                        if perm[i] > perm[j] {
                            inv += 1;
                        }
                    }
                }
                inv % 2 == 1
            };
            let c = if sign_char && odd_perm { q(-1) } else { q(1) };
            g.push(&mut m, &relabel(&base, |l| perm[l as usize]), c);
        }
        if !m.is_empty() {
            return m;
        }
    }
    LinComb::new()
}

/// `λ(2, μ(0,1)) − μ(λ(2,0), 1) − μ(0, λ(2,1))`.
fn leibniz(g: &Grading, mu: u8, la: u8) -> LinComb {
    comb(
        g,
        vec![
            (t2(la, lf(2), t2(mu, lf(0), lf(1))), 1),
            (t2(mu, t2(la, lf(2), lf(0)), lf(1)), -1),
            (t2(mu, lf(0), t2(la, lf(2), lf(1))), -1),
        ],
    )
}

fn gen(id: &str, degree: i64, symmetric: bool) -> OperadGenerator {
    OperadGenerator { id: id.into(), arity: 2, degree, symmetric }
}

pub fn com() -> OperadPresentation {
    let gens = vec![gen("mu", 0, true)];
    let g = Grading::operadic(vec![(0, true)]);
    OperadPresentation { name: "com".into(), relations: vec![associativity(&g, 0)], generators: gens, unit_action: None }
}

/// Lie bracket of degree `n − 1` with Σ₂ character `(−1)^n`.
pub fn lie_n(n: i64) -> OperadPresentation {
    let sym = !is_odd(n);
    let gens = vec![gen("lambda", n - 1, sym)];
    let g = Grading::operadic(vec![(n - 1, sym)]);
    OperadPresentation { name: format!("lie_{n}"), relations: vec![jacobi(&g, 0)], generators: gens, unit_action: None }
}

pub fn pois_n(n: i64) -> OperadPresentation {
    let sym = !is_odd(n);
    let gens = vec![gen("mu", 0, true), gen("lambda", n - 1, sym)];
    let g = Grading::operadic(vec![(0, true), (n - 1, sym)]);
    OperadPresentation {
        name: format!("pois_{n}"),
        relations: vec![associativity(&g, 0), jacobi(&g, 1), leibniz(&g, 0, 1)],
        generators: gens,
        unit_action: None,
    }
}

fn unital(mut p: OperadPresentation, name: String) -> OperadPresentation {
    let action = p.generators.iter().map(|g| if g.id == "mu" { q(1) } else { q(0) }).collect();
    p.unit_action = Some(action);
    p.name = name;
    p
}

pub fn ucom() -> OperadPresentation {
    unital(com(), "ucom".into())
}

pub fn clie_n(n: i64) -> OperadPresentation {
    unital(lie_n(n), format!("clie_{n}"))
}

pub fn upois_n(n: i64) -> OperadPresentation {
    unital(pois_n(n), format!("upois_{n}"))
}

/// Looks up a built-in presentation by name; `n` parametrizes the Lie and Poisson families.
pub fn builtin(name: &str, n: i64) -> Result<OperadPresentation, OperadError> {
    match name {
        "com" => Ok(com()),
        "ucom" => Ok(ucom()),
        "lie" => Ok(lie_n(1)),
        "lie_n" => Ok(lie_n(n)),
        "clie_n" => Ok(clie_n(n)),
        "pois_n" => Ok(pois_n(n)),
        "upois_n" => Ok(upois_n(n)),
        other => Err(OperadError::UnknownOperad(other.into())),
    }
}

/// A quotient of a finite span of tree monomials by a subspace, with a basis
/// of standard (non-pivot) monomials and a reduction map onto it.
#[derive(Clone, Debug)]
pub struct QuotientStratum {
    pub trees: IndexSet<Tree>,
    pub grading: Grading,
    ideal: Echelon,
    basis: Vec<usize>,
    basis_pos: HashMap<usize, usize>,
}

impl QuotientStratum {
    pub fn new(grading: Grading, trees: Vec<Tree>, relations: &[LinComb]) -> Self {
        let trees: IndexSet<Tree> = trees.into_iter().collect();
        let mut ideal = Echelon::new();
        for r in relations {
            let v = SparseVec::from_pairs(r.iter().filter_map(|(t, c)| trees.get_index_of(t).map(|i| (i, c.clone()))));
            ideal.insert(&v);
        }
        let basis: Vec<usize> = (0..trees.len()).filter(|&i| !ideal.is_pivot(i)).collect();
        let basis_pos = basis.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        QuotientStratum { trees, grading, ideal, basis, basis_pos }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn free_dim(&self) -> usize {
        self.trees.len()
    }

    pub fn basis_tree(&self, k: usize) -> &Tree {
        &self.trees[self.basis[k]]
    }

    pub fn basis_trees(&self) -> Vec<Tree> {
        self.basis.iter().map(|&i| self.trees[i].clone()).collect()
    }

    pub fn basis_degree(&self, k: usize) -> i64 {
        self.grading.degree(self.basis_tree(k))
    }

    /// Coordinates of a combination of canonical trees in tree coordinates.
    pub fn tree_vector(&self, c: &LinComb) -> SparseVec {
        SparseVec::from_pairs(c.iter().map(|(t, x)| {
            let i = self.trees.get_index_of(t).unwrap_or_else(|| panic!("tree {t:?} outside stratum"));
            (i, x.clone())
        }))
    }

    /// Reduces a combination of canonical trees to standard-monomial coordinates.
    pub fn normal_form(&self, c: &LinComb) -> SparseVec {
        self.reduce_vector(&self.tree_vector(c))
    }

    pub fn reduce_vector(&self, v: &SparseVec) -> SparseVec {
        let r = self.ideal.reduce(v);
        SparseVec::from_pairs(r.entries().iter().map(|(i, c)| (self.basis_pos[i], c.clone())))
    }

    /// Combination of trees for a vector in standard-monomial coordinates.
    pub fn to_comb(&self, v: &SparseVec) -> LinComb {
        v.entries().iter().map(|(k, c)| (self.basis_tree(*k).clone(), c.clone())).collect()
    }

    pub fn is_in_ideal(&self, c: &LinComb) -> bool {
        self.normal_form(c).is_zero()
    }
}

pub const DEFAULT_MAX_ARITY: usize = 6;
pub const DEFAULT_MAX_WEIGHT: usize = 6;

/// Arity-`k` component of the operad, as free trees modulo the relation ideal.
pub fn operad_stratum(p: &OperadPresentation, k: usize, max_arity: usize) -> Result<QuotientStratum, OperadError> {
    if k > max_arity {
        return Err(OperadError::TruncationExceeded { what: "arity", requested: k, bound: max_arity });
    }
    let g = p.grading();
    let trees = free_operad_trees(&g, k);
    let rels = relation_instances(&g, &g, &trees, &p.relation_basis());
    Ok(QuotientStratum::new(g, trees, &rels))
}

/// Weight-`w` component of the free algebra on generators with the given degrees.
pub fn free_algebra_stratum(
    p: &OperadPresentation,
    gen_degrees: &[i64],
    w: usize,
    max_weight: usize,
) -> Result<QuotientStratum, OperadError> {
    if w > max_weight {
        return Err(OperadError::TruncationExceeded { what: "weight", requested: w, bound: max_weight });
    }
    let g_rel = p.grading();
    let g = g_rel.with_leaves(gen_degrees.to_vec());
    let trees = free_algebra_trees(&g, w);
    let rels = relation_instances(&g_rel, &g, &trees, &p.relation_basis());
    Ok(QuotientStratum::new(g, trees, &rels))
}

/// Applies the unit rules until no unit remains below a vertex.
pub fn eliminate_units(p: &OperadPresentation, g: &Grading, t: &[Sym]) -> LinComb {
    let action = p.unit_action.as_ref().expect("unit rules need a unital presentation");
    let mut out = LinComb::new();
    let mut stack = vec![(t.to_vec(), Scalar::one())];
    while let Some((t, c)) = stack.pop() {
        let pos = (0..t.len()).find(|&i| {
            matches!(t[i], Sym::Op(_)) && {
                let (l, r, _) = children(&t, i);
                t[l] == Sym::Unit || t[r] == Sym::Unit
            }
        });
        match pos {
            None => g.push(&mut out, &t, c),
            Some(i) => {
                let Sym::Op(op) = t[i] else { unreachable!() };
                let (l, r, end) = children(&t, i);
                let u = &action[op as usize];
                if u.is_zero() {
                    continue;
                }
                let (keep, factor) = if t[l] == Sym::Unit {
                    (t[r..end].to_vec(), u.clone())
                } else {
                    (t[l..r].to_vec(), if g.ops[op as usize].1 { u.clone() } else { -u.clone() })
                };
                let mut nt = t[..i].to_vec();
                nt.extend(keep);
                nt.extend_from_slice(&t[end..]);
                stack.push((nt, c * factor));
            }
        }
    }
    out
}

/// A quadratic-linear-constant relation: `quadratic + linear + constant · 𝟙`.
#[derive(Clone, Debug, Default)]
pub struct QlcRelation {
    pub quadratic: LinComb,
    pub linear: BTreeMap<u16, Scalar>,
    pub constant: Scalar,
}

impl QlcRelation {
    pub fn check_shape(&self, g: &Grading) -> Result<(), OperadError> {
        for t in self.quadratic.keys() {
            if vertex_count(t) != 1 || leaf_count(t) != 2 || t.contains(&Sym::Unit) {
                return Err(OperadError::RelationOutsideQlcShape(format!("{t:?} is not a single generator on two inputs")));
            }
            let _ = g;
        }
        Ok(())
    }
}

/// Weight-filtered strata of a quotient of the free unital algebra.
#[derive(Clone, Debug)]
pub struct FilteredQuotient {
    /// `dims[w]` is the dimension of the image of weight ≤ w elements.
    pub filtered_dims: Vec<usize>,
    /// Standard monomials of each graded piece, with their degrees.
    pub graded_basis: Vec<Vec<(Tree, i64)>>,
}

impl FilteredQuotient {
    pub fn graded_dim(&self, w: usize) -> usize {
        self.filtered_dims[w] - if w == 0 { 0 } else { self.filtered_dims[w - 1] }
    }
}

/// Filtered pieces of `u𝒫(V)/(S)` up to weight `w`.
///
/// The ideal is saturated with elements of weight up to `w + 1`; the pieces are
/// read off from an elimination in which heavier monomials are eliminated first.
pub fn quotient_algebra_stratum(
    p: &OperadPresentation,
    gen_degrees: &[i64],
    relations: &[QlcRelation],
    w: usize,
    max_weight: usize,
) -> Result<FilteredQuotient, OperadError> {
    if w + 1 > max_weight {
        return Err(OperadError::TruncationExceeded { what: "weight", requested: w + 1, bound: max_weight });
    }
    let g_rel = p.grading();
    let g = g_rel.with_leaves(gen_degrees.to_vec());
    for s in relations {
        s.check_shape(&g)?;
    }
    let top = w + 1;
    let unit_tree: Tree = vec![Sym::Unit];
    // Columns ordered by decreasing weight.
    let mut by_weight: Vec<Vec<Tree>> = vec![Vec::new(); top + 1];
    by_weight[0] = vec![unit_tree.clone()];
    for m in 1..=top {
        by_weight[m] = free_algebra_trees(&g, m);
    }
    let mut cols: IndexSet<Tree> = IndexSet::new();
    let mut weight_of_col = Vec::new();
    for m in (0..=top).rev() {
        for t in &by_weight[m] {
            cols.insert(t.clone());
            weight_of_col.push(m);
        }
    }
    let to_vec = |c: &LinComb| SparseVec::from_pairs(c.iter().map(|(t, x)| (cols.get_index_of(t).expect("tree outside truncation"), x.clone())));
    let mut e = Echelon::new();
    let rel_basis = p.relation_basis();
    for m in 3..=top {
        for r in relation_instances(&g_rel, &g, &by_weight[m], &rel_basis) {
            e.insert(&to_vec(&r));
        }
    }
    // Contexts: a tree of weight m ≤ top − 1 with one leaf replaced by a relation.
    for m in 1..top {
        for t in &by_weight[m] {
            for pos in 0..t.len() {
                if !matches!(t[pos], Sym::Leaf(_)) {
                    continue;
                }
                for s in relations {
                    let mut c = LinComb::new();
                    for (qt, x) in &s.quadratic {
                        let mut full = t[..pos].to_vec();
                        full.extend_from_slice(qt);
                        full.extend_from_slice(&t[pos + 1..]);
                        g.push(&mut c, &full, x.clone());
                    }
                    for (v, x) in &s.linear {
                        let mut full = t.clone();
                        full[pos] = Sym::Leaf(*v);
                        g.push(&mut c, &full, x.clone());
                    }
                    if !s.constant.is_zero() {
                        let mut full = t.clone();
                        full[pos] = Sym::Unit;
                        add_comb(&mut c, &eliminate_units(p, &g, &full), &s.constant);
                    }
                    if !c.is_empty() {
                        e.insert(&to_vec(&c));
                    }
                }
            }
        }
    }
    // Pivots sitting in weight ≤ m columns span the ideal inside the weight ≤ m filtration.
    let pivots = e.pivots();
    let mut filtered_dims = Vec::with_capacity(w + 1);
    let mut graded_basis = Vec::with_capacity(w + 1);
    for m in 0..=w {
        let ncols = weight_of_col.iter().filter(|&&x| x <= m).count();
        let npiv = pivots.iter().filter(|&&pc| weight_of_col[pc] <= m).count();
        filtered_dims.push(ncols - npiv);
        let basis: Vec<(Tree, i64)> = (0..cols.len())
            .filter(|&i| weight_of_col[i] == m && !e.is_pivot(i))
            .map(|i| (cols[i].clone(), g.degree(&cols[i])))
            .collect();
        graded_basis.push(basis);
    }
    Ok(FilteredQuotient { filtered_dims, graded_basis })
}

/// Dimensions of the quadratic reduction of the unital operad in arity `k`
/// with `units` unit leaves: the unit rules lose their identity term, so every
/// tree with a unit below a vertex lies in the ideal.
pub fn quadratic_unital_dim(p: &OperadPresentation, k: usize, units: usize) -> usize {
    let g = p.grading();
    let total = k + units;
    if total == 0 {
        return 0;
    }
    // Leaves k..k+units are units; generate trees on all labels and convert.
    let raw = free_operad_trees(&g, total);
    let mut trees: IndexSet<Tree> = IndexSet::new();
    for t in &raw {
        // Unit leaves are indistinguishable: relabel them to the unit symbol.
        let u: Tree = t.iter().map(|&s| match s {
            Sym::Leaf(l) if l as usize >= k => Sym::Unit,
            o => o,
        }).collect();
        if let Some((_, c)) = g.canonical(&u) {
            trees.insert(c);
        }
    }
    let trees: Vec<Tree> = trees.into_iter().collect();
    let mut rels: Vec<LinComb> = relation_instances(&g, &g, &trees, &p.relation_basis());
    for t in &trees {
        let has_unit_child = (0..t.len()).any(|i| {
            matches!(t[i], Sym::Op(_)) && {
                let (l, r, _) = children(t, i);
                t[l] == Sym::Unit || t[r] == Sym::Unit
            }
        });
        if has_unit_child {
            rels.push(std::iter::once((t.clone(), q(1))).collect());
        }
    }
    QuotientStratum::new(g, trees, &rels).dim()
}

/// Parses trees like `mu(lambda(1,2),3)`; numerals are one-based leaves and
/// `unit_id` denotes the unit.
pub fn parse_tree(p: &OperadPresentation, s: &str, unit_id: &str) -> Result<Tree, OperadError> {
    let toks = tokenize(s);
    let mut pos = 0;
    let t = parse_node(p, &toks, &mut pos, unit_id)?;
    if pos != toks.len() {
        return Err(OperadError::Parse(format!("trailing input in `{s}`")));
    }
    Ok(t)
}

fn tokenize(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in s.chars() {
        if ch == '(' || ch == ')' || ch == ',' {
            if !cur.trim().is_empty() {
                out.push(cur.trim().to_string());
            }
            cur.clear();
            out.push(ch.to_string());
        } else {
            cur.push(ch);
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

fn parse_node(p: &OperadPresentation, toks: &[String], pos: &mut usize, unit_id: &str) -> Result<Tree, OperadError> {
    let tok = toks.get(*pos).ok_or_else(|| OperadError::Parse("unexpected end of tree".into()))?.clone();
    *pos += 1;
    if let Ok(n) = tok.parse::<u16>() {
        if n == 0 {
            return Err(OperadError::Parse("leaf labels are one-based".into()));
        }
        return Ok(vec![Sym::Leaf(n - 1)]);
    }
    if tok == unit_id {
        return Ok(vec![Sym::Unit]);
    }
    let g = p.generator_index(&tok).ok_or_else(|| OperadError::Parse(format!("unknown generator `{tok}`")))?;
    let expect = |pos: &mut usize, want: &str| -> Result<(), OperadError> {
        if toks.get(*pos).map(String::as_str) != Some(want) {
            return Err(OperadError::Parse(format!("expected `{want}`")));
        }
        *pos += 1;
        Ok(())
    };
    expect(pos, "(")?;
    let a = parse_node(p, toks, pos, unit_id)?;
    expect(pos, ",")?;
    let b = parse_node(p, toks, pos, unit_id)?;
    expect(pos, ")")?;
    let mut t = vec![Sym::Op(g as u8)];
    t.extend(a);
    t.extend(b);
    Ok(t)
}

pub fn format_tree(p: &OperadPresentation, t: &[Sym]) -> String {
    fn rec(p: &OperadPresentation, t: &[Sym], i: usize, out: &mut String) {
        match t[i] {
            Sym::Op(g) => {
                let (l, r, _) = children(t, i);
                out.push_str(&p.generators[g as usize].id);
                out.push('(');
                rec(p, t, l, out);
                out.push(',');
                rec(p, t, r, out);
                out.push(')');
            }
            Sym::Leaf(l) => out.push_str(&(l + 1).to_string()),
            Sym::Unit => out.push_str("unit"),
        }
    }
    let mut s = String::new();
    rec(p, t, 0, &mut s);
    s
}

#[derive(Debug, Deserialize)]
struct JsonGenerator {
    id: String,
    arity: u8,
    degree: i64,
    #[serde(default = "default_symmetry")]
    symmetry: i8,
}

fn default_symmetry() -> i8 {
    1
}

#[derive(Debug, Deserialize)]
struct JsonTerm {
    tree: String,
    coeff: serde_json::Value,
}

#[derive(Debug, Deserialize)]
struct JsonPresentation {
    #[serde(default)]
    name: Option<String>,
    generators: Vec<JsonGenerator>,
    relations: Vec<Vec<JsonTerm>>,
}

pub fn parse_scalar(v: &serde_json::Value) -> Result<Scalar, OperadError> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(q)
            .ok_or_else(|| OperadError::Parse(format!("non-integer numeric coefficient {n}; use a \"p/q\" string"))),
        serde_json::Value::String(s) => s.trim().parse::<Scalar>().map_err(|e| OperadError::Parse(format!("bad rational `{s}`: {e}"))),
        other => Err(OperadError::Parse(format!("bad coefficient {other}"))),
    }
}

/// Reads a presentation from the documented JSON schema.
///
/// Binary generators become vertices; an arity-zero generator becomes the unit
/// and relations of the form `g(unit, 1) − c · 1` set its action.
pub fn presentation_from_json(text: &str) -> Result<OperadPresentation, OperadError> {
    let raw: JsonPresentation = serde_json::from_str(text).map_err(|e| OperadError::Parse(e.to_string()))?;
    let mut gens = Vec::new();
    let mut unit_id = None;
    for g in &raw.generators {
        match g.arity {
            2 => gens.push(OperadGenerator { id: g.id.clone(), arity: 2, degree: g.degree, symmetric: g.symmetry >= 0 }),
            0 => {
                if g.degree != 0 {
                    return Err(OperadError::Parse("the unit must have degree 0".into()));
                }
                unit_id = Some(g.id.clone());
            }
            a => return Err(OperadError::Parse(format!("generator `{}` has unsupported arity {a}", g.id))),
        }
    }
    let mut p = OperadPresentation {
        name: raw.name.unwrap_or_else(|| "custom".into()),
        generators: gens,
        relations: Vec::new(),
        unit_action: unit_id.as_ref().map(|_| Vec::new()),
    };
    let unit_name = unit_id.clone().unwrap_or_else(|| "\u{0}".into());
    let g = p.grading();
    let mut unit_action = vec![Scalar::zero(); p.generators.len()];
    for rel in &raw.relations {
        let mut terms = Vec::new();
        for term in rel {
            terms.push((parse_tree(&p, &term.tree, &unit_name)?, parse_scalar(&term.coeff)?));
        }
        let has_unit = terms.iter().any(|(t, _)| t.contains(&Sym::Unit));
        if has_unit {
            // g(unit, 1) - c * 1  or  g(1, unit) - c * 1
            let mut op = None;
            let mut lhs = Scalar::zero();
            let mut rhs = Scalar::zero();
            for (t, c) in &terms {
                match t.as_slice() {
                    [Sym::Op(o), Sym::Unit, Sym::Leaf(0)] => {
                        op = Some(*o);
                        lhs = c.clone();
                    }
                    [Sym::Op(o), Sym::Leaf(0), Sym::Unit] => {
                        op = Some(*o);
                        lhs = if g.ops[*o as usize].1 { c.clone() } else { -c.clone() };
                    }
                    [Sym::Leaf(0)] => rhs = c.clone(),
                    _ => return Err(OperadError::Parse("unit relations must have the form g(unit,1) - c*1".into())),
                }
            }
            let op = op.ok_or_else(|| OperadError::Parse("unit relation without a generator".into()))?;
            if lhs.is_zero() {
                return Err(OperadError::Parse("degenerate unit relation".into()));
            }
            unit_action[op as usize] = -rhs / lhs;
        } else {
            let mut c = LinComb::new();
            for (t, x) in terms {
                if leaf_count(&t) != 3 || vertex_count(&t) != 2 {
                    return Err(OperadError::NotQuadratic(format!("relation term {} is not a two-vertex tree", format_tree(&p, &t))));
                }
                g.push(&mut c, &t, x);
            }
            p.relations.push(c);
        }
    }
    if unit_id.is_some() {
        p.unit_action = Some(unit_action);
    }
    Ok(p)
}

/// Multiplicity vector of leaves, used to split algebra strata by generator content.
pub fn leaf_content(t: &[Sym], ngens: usize) -> Vec<u8> {
    let mut c = vec![0u8; ngens];
    for s in t {
        if let Sym::Leaf(l) = s {
            c[*l as usize] += 1;
        }
    }
    c
}

/// Accumulates a combination into coordinates indexed by an [`IndexSet`].
pub fn comb_to_vec(index: &IndexSet<Tree>, c: &LinComb) -> Option<SparseVec> {
    let mut b = VecBuilder::new();
    for (t, x) in c {
        b.add(index.get_index_of(t)?, x.clone());
    }
    Some(b.finish())
}

/// `(−1)^{neg}·c`.
pub fn signed(neg: bool, c: Scalar) -> Scalar {
    c * sign_scalar(neg)
}
