//! Exact rational linear algebra over sparse vectors and matrices.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number.
pub type Scalar = BigRational;

pub fn q(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn qf(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// Sign `(-1)^k` as a scalar.
pub fn sign_scalar(negative: bool) -> Scalar {
    if negative {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("composition d_out * d_in is nonzero (first nonzero entry at row {row}, column {col})")]
    CompositionNonzero { row: usize, col: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i, Scalar::one())] }
    }

    /// Builds from unsorted pairs, summing duplicates and dropping zeros.
    pub fn from_pairs<I: IntoIterator<Item = (usize, Scalar)>>(pairs: I) -> Self {
        let mut map: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, c) in pairs {
            if c.is_zero() {
                continue;
            }
            let slot = map.entry(i).or_insert_with(Scalar::zero);
            *slot += c;
        }
        Self::from_map(map)
    }

    pub fn from_map(map: BTreeMap<usize, Scalar>) -> Self {
        SparseVec {
            entries: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn from_dense(v: &[Scalar]) -> Self {
        SparseVec {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); len];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, Scalar)> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn leading(&self) -> Option<usize> {
        self.entries.first().map(|(i, _)| *i)
    }

    pub fn get(&self, i: usize) -> Scalar {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect(),
        }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().map(|(i, x)| (*i, -x)).collect(),
        }
    }

    /// `self + c * other`, merged in one pass.
    pub fn axpy(&self, c: &Scalar, other: &SparseVec) -> SparseVec {
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() || b < other.entries.len() {
            let ia = self.entries.get(a).map(|e| e.0);
            let ib = other.entries.get(b).map(|e| e.0);
            match (ia, ib) {
                (Some(x), Some(y)) if x == y => {
                    let v = &self.entries[a].1 + c * &other.entries[b].1;
                    if !v.is_zero() {
                        out.push((x, v));
                    }
                    a += 1;
                    b += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    out.push(self.entries[a].clone());
                    a += 1;
                }
                (Some(_), None) => {
                    out.push(self.entries[a].clone());
                    a += 1;
                }
                _ => {
                    let (j, v) = &other.entries[b];
                    out.push((*j, c * v));
                    b += 1;
                }
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&Scalar::one(), other)
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&-Scalar::one(), other)
    }

    pub fn dot(&self, other: &SparseVec) -> Scalar {
        let mut acc = Scalar::zero();
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() && b < other.entries.len() {
            let (ia, ib) = (self.entries[a].0, other.entries[b].0);
            if ia == ib {
                acc += &self.entries[a].1 * &other.entries[b].1;
                a += 1;
                b += 1;
            } else if ia < ib {
                a += 1;
            } else {
                b += 1;
            }
        }
        acc
    }

    /// Reindexes through `f`; entries mapped to `None` are dropped.
    pub fn remap<F: Fn(usize) -> Option<usize>>(&self, f: F) -> SparseVec {
        SparseVec::from_pairs(self.entries.iter().filter_map(|(i, c)| f(*i).map(|j| (j, c.clone()))))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }
}

impl fmt::Display for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, (i, c)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", i, c)?;
        }
        write!(f, "]")
    }
}

/// Accumulator for building sparse vectors term by term.
#[derive(Clone, Debug, Default)]
pub struct VecBuilder {
    map: BTreeMap<usize, Scalar>,
}

impl VecBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, i: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.map.entry(i).or_insert_with(Scalar::zero);
        *slot += c;
    }

    pub fn add_vec(&mut self, v: &SparseVec, c: &Scalar) {
        for (i, x) in v.entries() {
            self.add(*i, x * c);
        }
    }

    pub fn finish(self) -> SparseVec {
        SparseVec::from_map(self.map)
    }
}

/// Sparse matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![SparseVec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix { rows: n, cols: n, data: (0..n).map(SparseVec::unit).collect() }
    }

    pub fn from_rows(cols: usize, data: Vec<SparseVec>) -> Self {
        debug_assert!(data.iter().all(|r| r.max_index().map_or(true, |m| m < cols)));
        SparseMatrix { rows: data.len(), cols, data }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[SparseVec]) -> Self {
        let mut builders: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); rows];
        for (j, col) in columns.iter().enumerate() {
            for (i, c) in col.entries() {
                builders[*i].push((j, c.clone()));
            }
        }
        SparseMatrix {
            rows,
            cols: columns.len(),
            data: builders.into_iter().map(|e| SparseVec { entries: e }).collect(),
        }
    }

    pub fn from_triplets(rows: usize, cols: usize, entries: &[(usize, usize, Scalar)]) -> Self {
        let mut per_row: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); rows];
        for (r, c, v) in entries {
            assert!(*r < rows && *c < cols, "triplet out of range");
            per_row[*r].push((*c, v.clone()));
        }
        SparseMatrix {
            rows,
            cols,
            data: per_row.into_iter().map(SparseVec::from_pairs).collect(),
        }
    }

    pub fn from_dense(rows: &[Vec<Scalar>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        SparseMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().map(|r| SparseVec::from_dense(r)).collect(),
        }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let dense: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        Self::from_dense(&dense)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.data[i]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &SparseVec> {
        self.data.iter()
    }

    pub fn entries(&self) -> Vec<(usize, usize, Scalar)> {
        let mut out = Vec::new();
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row.entries() {
                out.push((r, *c, v.clone()));
            }
        }
        out
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.nnz()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_zero())
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.data[r].get(c)
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row.entries() {
                cols[*c].push((r, v.clone()));
            }
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            data: cols.into_iter().map(|e| SparseVec { entries: e }).collect(),
        }
    }

    /// Column `j` as a sparse vector.
    pub fn column(&self, j: usize) -> SparseVec {
        SparseVec::from_pairs(
            self.data
                .iter()
                .enumerate()
                .filter_map(|(r, row)| {
                    let v = row.get(j);
                    if v.is_zero() {
                        None
                    } else {
                        Some((r, v))
                    }
                }),
        )
    }

    /// Matrix applied to a column vector.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        SparseVec::from_pairs(self.data.iter().enumerate().filter_map(|(r, row)| {
            let d = row.dot(v);
            if d.is_zero() {
                None
            } else {
                Some((r, d))
            }
        }))
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut b = VecBuilder::new();
                for (k, c) in row.entries() {
                    b.add_vec(&other.data[*k], c);
                }
                b.finish()
            })
            .collect();
        Ok(SparseMatrix { rows: self.rows, cols: other.cols, data })
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| r.scale(c)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(self.data.iter().cloned())
    }
}

/// Incremental row-echelon basis of a subspace. Every stored row has a
/// leading coefficient of one at a column no other row leads at; entries after
/// the leading one are not back-substituted until [`Echelon::reduced_rows`].
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    pivot_of: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Stored rows in insertion order.
    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.pivot_of.keys().copied().collect()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_of.contains_key(&col)
    }

    pub fn pivot_row(&self, col: usize) -> Option<&SparseVec> {
        self.pivot_of.get(&col).map(|&r| &self.rows[r])
    }

    fn eliminate(&self, v: &SparseVec, coords: Option<&mut VecBuilder>) -> (SparseVec, bool) {
        let mut coords = coords;
        let mut work: BTreeMap<usize, Scalar> = v.entries().iter().cloned().collect();
        let mut out = Vec::new();
        let mut left_span = false;
        while let Some((col, c)) = work.pop_first() {
            if let Some(&r) = self.pivot_of.get(&col) {
                for (j, x) in self.rows[r].entries().iter().skip(1) {
                    let slot = work.entry(*j).or_insert_with(Scalar::zero);
                    *slot -= &c * x;
                    if slot.is_zero() {
                        work.remove(j);
                    }
                }
                if let Some(b) = coords.as_deref_mut() {
                    b.add(r, c);
                }
            } else {
                left_span = true;
                out.push((col, c));
            }
        }
        (SparseVec::from_pairs(out), left_span)
    }

    /// Reduces `v` modulo the span; the result has no entries in pivot columns.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        if self.rows.is_empty() {
            return v.clone();
        }
        self.eliminate(v, None).0
    }

    /// Coordinates of `v` in terms of the stored rows, if `v` lies in the span.
    pub fn coordinates(&self, v: &SparseVec) -> Option<SparseVec> {
        let mut b = VecBuilder::new();
        let (_, outside) = self.eliminate(v, Some(&mut b));
        if outside {
            None
        } else {
            Some(b.finish())
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    fn reduce_leading(&self, mut v: SparseVec) -> SparseVec {
        while let Some(lead) = v.leading() {
            match self.pivot_of.get(&lead) {
                Some(&r) => {
                    let c = v.get(lead);
                    v = v.axpy(&-c, &self.rows[r]);
                }
                None => break,
            }
        }
        v
    }

    /// Inserts `v`; returns true if it enlarged the span.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce_leading(v.clone());
        let Some(lead) = r.leading() else { return false };
        let inv = Scalar::one() / r.get(lead);
        self.pivot_of.insert(lead, self.rows.len());
        self.rows.push(r.scale(&inv));
        true
    }

    /// Rows of the reduced row echelon form, sorted by pivot column.
    pub fn reduced_rows(&self) -> Vec<SparseVec> {
        let order: Vec<usize> = self.pivot_of.values().copied().collect();
        let mut done: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for &r in order.iter().rev() {
            let row = &self.rows[r];
            let lead = row.leading().unwrap();
            let mut work: BTreeMap<usize, Scalar> = row.entries().iter().skip(1).cloned().collect();
            let mut out = vec![(lead, Scalar::one())];
            while let Some((col, c)) = work.pop_first() {
                if let Some(prow) = done.get(&col) {
                    for (j, x) in prow.entries().iter().skip(1) {
                        let slot = work.entry(*j).or_insert_with(Scalar::zero);
                        *slot -= &c * x;
                        if slot.is_zero() {
                            work.remove(j);
                        }
                    }
                } else {
                    out.push((col, c));
                }
            }
            done.insert(lead, SparseVec::from_pairs(out));
        }
        done.into_values().collect()
    }
}

/// Rank of the span of the given vectors.
pub fn rank_of_rows<I: IntoIterator<Item = SparseVec>>(rows: I) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(&r);
    }
    e.rank()
}

/// Reduced row echelon form and the strictly increasing pivot columns.
pub fn rref(m: &SparseMatrix) -> (SparseMatrix, Vec<usize>) {
    let mut e = Echelon::new();
    for row in m.rows_iter() {
        e.insert(row);
    }
    let mut rows = e.reduced_rows();
    let pivots = e.pivots();
    rows.resize(m.nrows(), SparseVec::new());
    (SparseMatrix::from_rows(m.ncols(), rows), pivots)
}

/// Basis of the kernel of `m` (as column vectors), one per free column.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVec> {
    let mut e = Echelon::new();
    for row in m.rows_iter() {
        e.insert(row);
    }
    kernel_from_echelon(&e, m.ncols())
}

pub fn kernel_from_echelon(e: &Echelon, cols: usize) -> Vec<SparseVec> {
    // Column-major view of the reduced rows: free column -> (pivot, coeff).
    let mut by_free: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
    for row in &e.reduced_rows() {
        let p = row.leading().unwrap();
        for (j, c) in row.entries().iter().skip(1) {
            by_free.entry(*j).or_default().push((p, -c.clone()));
        }
    }
    (0..cols)
        .filter(|j| !e.is_pivot(*j))
        .map(|j| {
            let mut pairs = by_free.remove(&j).unwrap_or_default();
            pairs.push((j, Scalar::one()));
            SparseVec::from_pairs(pairs)
        })
        .collect()
}

/// Basis of the column space (image) of `m`.
pub fn image_basis(m: &SparseMatrix) -> Vec<SparseVec> {
    let t = m.transpose();
    let mut e = Echelon::new();
    for row in t.rows_iter() {
        e.insert(row);
    }
    e.reduced_rows()
}

/// `dim ker(d_out) - rank(d_in)` after checking `d_out * d_in = 0`.
pub fn homology_dim(d_out: &SparseMatrix, d_in: &SparseMatrix) -> Result<usize, LinalgError> {
    check_composition(d_out, d_in)?;
    let ker = d_out.ncols() - d_out.rank();
    Ok(ker - d_in.rank())
}

pub fn check_composition(d_out: &SparseMatrix, d_in: &SparseMatrix) -> Result<(), LinalgError> {
    if d_out.ncols() != d_in.nrows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "d_out has {} columns but d_in has {} rows",
            d_out.ncols(),
            d_in.nrows()
        )));
    }
    let prod = d_out.mul(d_in)?;
    for (r, row) in prod.rows_iter().enumerate() {
        if let Some(c) = row.leading() {
            return Err(LinalgError::CompositionNonzero { row: r, col: c });
        }
    }
    Ok(())
}

/// Rank of the map induced on homology by a chain map.
///
/// Given `d_in: C_{k+1} -> C_k`, `d_out: C_k -> C_{k-1}` on the source, the
/// analogous target maps, and `f: C_k -> D_k`, returns the rank of
/// `H_k(C) -> H_k(D)`.
pub fn induced_rank(
    f: &SparseMatrix,
    src_out: &SparseMatrix,
    tgt_in: &SparseMatrix,
) -> usize {
    // Cycles of the source.
    let cycles = kernel_basis(src_out);
    // Images of cycles modulo target boundaries.
    let mut bound = Echelon::new();
    for col in image_basis(tgt_in) {
        bound.insert(&col);
    }
    let base = bound.rank();
    let mut e = bound;
    for z in cycles {
        e.insert(&f.apply(&z));
    }
    e.rank() - base
}

pub fn is_integer(x: &Scalar) -> bool {
    x.is_integer()
}

pub fn abs(x: &Scalar) -> Scalar {
    x.abs()
}
