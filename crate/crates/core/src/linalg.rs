//! Exact sparse linear algebra over `ℚ`.
//!
//! Vectors are `BTreeMap<usize, Rational>` with no stored zeros. Elimination
//! is deterministic: rows are consumed in index order and each new pivot sits
//! in the lowest column still nonzero after reduction, so every basis this
//! module returns is reproducible bit for bit.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub type Rational = BigRational;

/// Sparse vector; absent keys are zero.
pub type SparseVec = BTreeMap<usize, Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("subspace vector {index} is not in the span of the cocycles")]
    SubspaceNotContained { index: usize },
    #[error("vector is not in the span of the cocycles")]
    NotInSpan,
    #[error("index {index} out of bounds for dimension {dim}")]
    IndexOutOfBounds { index: usize, dim: usize },
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `target += factor * source`, dropping entries that cancel.
pub fn axpy(target: &mut SparseVec, factor: &Rational, source: &SparseVec) {
    if factor.is_zero() {
        return;
    }
    for (&i, v) in source {
        add_entry(target, i, factor * v);
    }
}

pub fn add_entry(target: &mut SparseVec, index: usize, value: Rational) {
    if value.is_zero() {
        return;
    }
    let slot = target.entry(index).or_insert_with(Rational::zero);
    *slot += value;
    if slot.is_zero() {
        target.remove(&index);
    }
}

pub fn scaled(v: &SparseVec, factor: &Rational) -> SparseVec {
    if factor.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(&i, x)| (i, x * factor)).collect()
}

pub fn unit_vector(index: usize) -> SparseVec {
    SparseVec::from([(index, Rational::one())])
}

/// Sparse matrix keyed by `(row, col)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rational>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = SparseMatrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (c, &x) in row.iter().enumerate() {
                m.set(r, c, rat(x));
            }
        }
        m
    }

    /// Builds a matrix whose `c`-th column is `columns[c]`.
    pub fn from_columns(rows: usize, columns: &[SparseVec]) -> Result<Self, LinalgError> {
        let mut m = SparseMatrix::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for (&r, x) in col {
                if r >= rows {
                    return Err(LinalgError::IndexOutOfBounds { index: r, dim: rows });
                }
                m.set(r, c, x.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Stores `value`, or removes the entry when it is zero.
    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        assert!(row < self.rows && col < self.cols, "index ({row},{col}) out of bounds");
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    pub fn add_to(&mut self, row: usize, col: usize, value: Rational) {
        assert!(row < self.rows && col < self.cols, "index ({row},{col}) out of bounds");
        let key = (row, col);
        let slot = self.entries.entry(key).or_insert_with(Rational::zero);
        *slot += value;
        if slot.is_zero() {
            self.entries.remove(&key);
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Rational {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn row_vectors(&self) -> Vec<SparseVec> {
        let mut rows = vec![SparseVec::new(); self.rows];
        for (&(r, c), v) in &self.entries {
            rows[r].insert(c, v.clone());
        }
        rows
    }

    pub fn column_vectors(&self) -> Vec<SparseVec> {
        let mut cols = vec![SparseVec::new(); self.cols];
        for (&(r, c), v) in &self.entries {
            cols[c].insert(r, v.clone());
        }
        cols
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&(r, c), x) in &self.entries {
            if let Some(y) = v.get(&c) {
                add_entry(&mut out, r, x * y);
            }
        }
        out
    }

    /// `self · rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let rhs_rows = rhs.row_vectors();
        let mut out = SparseMatrix::zeros(self.rows, rhs.cols);
        for (&(r, k), x) in &self.entries {
            for (&c, y) in &rhs_rows[k] {
                out.add_to(r, c, x * y);
            }
        }
        out
    }
}

/// Row echelon form built one vector at a time.
///
/// Every stored row has leading coefficient one in its pivot column.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Reduces `v` against the stored pivots, calling `record(pivot, factor)`
    /// for each row subtracted. Returns the remainder.
    fn reduce_with(&self, mut v: SparseVec, mut record: impl FnMut(usize, &Rational)) -> SparseVec {
        let mut cursor = 0usize;
        loop {
            let next = v
                .range(cursor..)
                .map(|(&c, _)| c)
                .find(|c| self.pivots.contains_key(c));
            let Some(col) = next else { break };
            let factor = v[&col].clone();
            let row = &self.pivots[&col];
            axpy(&mut v, &-factor.clone(), row);
            record(col, &factor);
            cursor = col + 1;
        }
        v
    }

    pub fn reduce(&self, v: SparseVec) -> SparseVec {
        self.reduce_with(v, |_, _| {})
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Inserts `v`; returns the new pivot column if `v` was independent.
    pub fn insert(&mut self, v: SparseVec) -> Option<usize> {
        let rem = self.reduce(v);
        let (&lead, lc) = rem.iter().next()?;
        let inv = lc.recip();
        self.pivots.insert(lead, scaled(&rem, &inv));
        Some(lead)
    }

    /// Clears every pivot column from every other row.
    pub fn into_reduced(mut self) -> BTreeMap<usize, SparseVec> {
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for &p in &cols {
            let mut row = self.pivots.remove(&p).expect("pivot row");
            let hits: Vec<usize> = row
                .keys()
                .copied()
                .filter(|&c| c > p && self.pivots.contains_key(&c))
                .collect();
            for c in hits {
                let factor = row.get(&c).cloned().unwrap_or_else(Rational::zero);
                axpy(&mut row, &-factor, &self.pivots[&c]);
            }
            self.pivots.insert(p, row);
        }
        self.pivots
    }
}

pub fn rank(m: &SparseMatrix) -> usize {
    let mut e = Echelon::new();
    for row in m.row_vectors() {
        e.insert(row);
    }
    e.rank()
}

pub fn rank_of(vectors: &[SparseVec]) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v.clone());
    }
    e.rank()
}

/// Basis of `{v : M v = 0}`, one vector per non-pivot column in increasing
/// column order, with a one in that column.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVec> {
    let mut e = Echelon::new();
    for row in m.row_vectors() {
        e.insert(row);
    }
    let rref = e.into_reduced();
    (0..m.cols())
        .filter(|c| !rref.contains_key(c))
        .map(|free| {
            let mut v = unit_vector(free);
            for (&p, row) in &rref {
                if let Some(x) = row.get(&free) {
                    v.insert(p, -x.clone());
                }
            }
            v
        })
        .collect()
}

/// A solution of `M x = b` supported on pivot columns, or `None` when `b`
/// is outside the column space.
pub fn solve(m: &SparseMatrix, b: &SparseVec) -> Result<Option<SparseVec>, LinalgError> {
    check_bounds(b, m.rows())?;
    let last = m.cols();
    let mut aug = SparseMatrix::zeros(m.rows(), last + 1);
    for (r, c, x) in m.entries() {
        aug.set(r, c, x.clone());
    }
    for (&r, x) in b {
        aug.set(r, last, -x.clone());
    }
    Ok(kernel_basis(&aug).into_iter().find(|v| v.contains_key(&last)).map(|mut v| {
        v.remove(&last);
        v
    }))
}

/// Basis of `span(cocycles) / span(subspace)` together with a coordinate map.
#[derive(Debug, Clone)]
pub struct QuotientBasis {
    ambient_dim: usize,
    representatives: Vec<SparseVec>,
    /// pivot column -> (row, coordinates of the row modulo the subspace)
    rows: BTreeMap<usize, (SparseVec, SparseVec)>,
}

impl QuotientBasis {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn representatives(&self) -> &[SparseVec] {
        &self.representatives
    }

    /// Coordinates of a cocycle in the representative basis, modulo the
    /// subspace.
    pub fn coordinates(&self, v: &SparseVec) -> Result<Vec<Rational>, LinalgError> {
        check_bounds(v, self.ambient_dim)?;
        let mut v = v.clone();
        let mut coords = SparseVec::new();
        let mut cursor = 0usize;
        loop {
            let next = v
                .range(cursor..)
                .map(|(&c, _)| c)
                .find(|c| self.rows.contains_key(c));
            let Some(col) = next else { break };
            let factor = v[&col].clone();
            let (row, tag) = &self.rows[&col];
            axpy(&mut v, &-factor.clone(), row);
            axpy(&mut coords, &factor, tag);
            cursor = col + 1;
        }
        if !v.is_empty() {
            return Err(LinalgError::NotInSpan);
        }
        Ok((0..self.dim())
            .map(|k| coords.get(&k).cloned().unwrap_or_else(Rational::zero))
            .collect())
    }
}

fn check_bounds(v: &SparseVec, dim: usize) -> Result<(), LinalgError> {
    match v.keys().next_back() {
        Some(&i) if i >= dim => Err(LinalgError::IndexOutOfBounds { index: i, dim }),
        _ => Ok(()),
    }
}

/// Chooses representatives for `span(cocycles) / span(subspace)`.
///
/// Cocycles are scanned in the given order; a cocycle becomes a
/// representative exactly when it is independent of the subspace and of the
/// representatives already chosen. Representatives are the input vectors
/// themselves.
pub fn quotient_basis(
    ambient_dim: usize,
    subspace: &[SparseVec],
    cocycles: &[SparseVec],
) -> Result<QuotientBasis, LinalgError> {
    for v in subspace.iter().chain(cocycles) {
        check_bounds(v, ambient_dim)?;
    }
    let mut span = Echelon::new();
    for z in cocycles {
        span.insert(z.clone());
    }
    if let Some(index) = subspace.iter().position(|b| !span.contains(b)) {
        return Err(LinalgError::SubspaceNotContained { index });
    }

    let mut q = QuotientBasis { ambient_dim, representatives: Vec::new(), rows: BTreeMap::new() };
    let insert = |q: &mut QuotientBasis, v: &SparseVec, mut tag: SparseVec| -> bool {
        let mut v = v.clone();
        let mut cursor = 0usize;
        loop {
            let next = v
                .range(cursor..)
                .map(|(&c, _)| c)
                .find(|c| q.rows.contains_key(c));
            let Some(col) = next else { break };
            let factor = v[&col].clone();
            let (row, row_tag) = &q.rows[&col];
            axpy(&mut v, &-factor.clone(), row);
            axpy(&mut tag, &-factor, row_tag);
            cursor = col + 1;
        }
        let Some((&lead, lc)) = v.iter().next() else { return false };
        let inv = lc.recip();
        q.rows.insert(lead, (scaled(&v, &inv), scaled(&tag, &inv)));
        true
    };
    for b in subspace {
        insert(&mut q, b, SparseVec::new());
    }
    for z in cocycles {
        let k = q.representatives.len();
        if insert(&mut q, z, unit_vector(k)) {
            q.representatives.push(z.clone());
        }
    }
    Ok(q)
}
