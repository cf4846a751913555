//! Dense rational matrices and exact elimination.
//!
//! Elimination runs on integer rows: each row is cleared of denominators,
//! combined with `p*r - e*q` steps, and divided by its content afterwards.
//! Rows are stored sparsely, so zero entries cost nothing.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{denom_lcm, Rational};

pub type Vector = Vec<Rational>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![Rational::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::ONE);
        }
        m
    }

    pub fn scalar(n: usize, s: &Rational) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, s.clone());
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor for integer literals; panics on ragged input.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let v = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| Rational::from_int(x)).collect())
            .collect();
        Self::from_rows(v).expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rational::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    fn zip_with(
        &self,
        other: &Matrix,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} and {}x{} differ in shape",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn block(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Result<Matrix> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::Shape("incompatible blocks".into()));
        }
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = match (i < a.rows, j < a.cols) {
                    (true, true) => a.get(i, j),
                    (true, false) => b.get(i, j - a.cols),
                    (false, true) => c.get(i - a.rows, j),
                    (false, false) => d.get(i - a.rows, j - a.cols),
                };
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    /// Rows `r0..r1` and columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        let mut m = Matrix::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                m.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        m
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Rational>>::deserialize(d)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Sparse vector: strictly increasing column indices with nonzero values.
pub type SparseVec = Vec<(usize, Rational)>;

pub fn to_sparse(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

type IntRow = Vec<(usize, BigInt)>;

fn integer_row(v: &SparseVec) -> IntRow {
    let l = denom_lcm(v.iter().map(|(_, x)| x));
    let mut row: IntRow = v
        .iter()
        .map(|(j, x)| {
            let s = x.numer() * (&l / x.denom());
            (*j, s)
        })
        .collect();
    normalize(&mut row, None);
    row
}

/// Divide by the content, making the entry in column `lead` positive.
fn normalize(row: &mut IntRow, lead: Option<usize>) {
    let mut g = BigInt::zero();
    for (_, x) in row.iter() {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() {
        return;
    }
    let neg = match lead {
        Some(c) => entry(row, c).is_some_and(|x| x.is_negative()),
        None => row[0].1.is_negative(),
    };
    if !g.is_one() || neg {
        let g = if neg { -g } else { g };
        for (_, x) in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

fn entry(row: &IntRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |(j, _)| *j)
        .ok()
        .map(|k| &row[k].1)
}

/// `p*r - e*q`, dropping cancelled entries.
fn combine(r: &IntRow, p: &BigInt, q: &IntRow, e: &BigInt) -> IntRow {
    let mut out = Vec::with_capacity(r.len() + q.len());
    let (mut a, mut b) = (0, 0);
    while a < r.len() || b < q.len() {
        let ja = r.get(a).map_or(usize::MAX, |x| x.0);
        let jb = q.get(b).map_or(usize::MAX, |x| x.0);
        let (j, v) = if ja < jb {
            a += 1;
            (ja, p * &r[a - 1].1)
        } else if jb < ja {
            b += 1;
            (jb, -(e * &q[b - 1].1))
        } else {
            a += 1;
            b += 1;
            (ja, p * &r[a - 1].1 - e * &q[b - 1].1)
        };
        if !v.is_zero() {
            out.push((j, v));
        }
    }
    out
}

/// Reduced row-echelon form over the integers, built one row at a time.
///
/// Every stored row has a positive entry in its pivot column and zeros in
/// all other pivot columns.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: Vec<(usize, IntRow)>,
    pivot_of: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut r: IntRow) -> IntRow {
        let hits: Vec<usize> = r
            .iter()
            .filter(|(j, _)| self.pivot_of.contains_key(j))
            .map(|(j, _)| *j)
            .collect();
        for col in hits {
            let Some(e) = entry(&r, col).cloned() else {
                continue;
            };
            let q = &self.rows[self.pivot_of[&col]].1;
            let p = entry(q, col).expect("pivot entry");
            let g = p.gcd(&e);
            r = combine(&r, &(p / &g), q, &(&e / &g));
            normalize(&mut r, None);
        }
        r
    }

    /// Inserts a row; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(integer_row(v));
        if r.is_empty() {
            return false;
        }
        let mut r = r;
        let col = r[0].0;
        normalize(&mut r, Some(col));
        let p = r[0].1.clone();
        for (qc, q) in self.rows.iter_mut() {
            if let Some(e) = entry(q, col).cloned() {
                let g = p.gcd(&e);
                *q = combine(q, &(&p / &g), &r, &(&e / &g));
                normalize(q, Some(*qc));
            }
        }
        self.pivot_of.insert(col, self.rows.len());
        self.rows.push((col, r));
        true
    }

    /// Whether `v` lies in the span of the inserted rows.
    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(integer_row(v)).is_empty()
    }

    /// Pivot column, pivot value, and row, in column order.
    fn pivots(&self) -> impl Iterator<Item = (usize, &BigInt, &IntRow)> {
        self.pivot_of.iter().map(|(c, &k)| {
            let row = &self.rows[k].1;
            (*c, entry(row, *c).expect("pivot entry"), row)
        })
    }
}

pub fn rank_of_rows(rows: &[SparseVec]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

fn sparse_rows(m: &Matrix) -> Vec<SparseVec> {
    (0..m.rows()).map(|i| to_sparse(m.row(i))).collect()
}

pub fn rank(m: &Matrix) -> usize {
    rank_of_rows(&sparse_rows(m))
}

fn kernel_from_rows(rows: &[SparseVec], cols: usize) -> Vec<Vector> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !e.pivot_of.contains_key(c)) {
        let mut v = vec![Rational::ZERO; cols];
        v[free] = Rational::ONE;
        for (pc, p, row) in e.pivots() {
            if let Some(x) = entry(row, free) {
                v[pc] = -Rational::from_bigint(x.clone()) / Rational::from_bigint(p.clone());
            }
        }
        basis.push(v);
    }
    basis
}

/// Basis of the right null space, one vector per non-pivot column.
pub fn kernel_basis(m: &Matrix) -> Vec<Vector> {
    kernel_from_rows(&sparse_rows(m), m.cols())
}

pub fn kernel_basis_sparse(rows: &[SparseVec], cols: usize) -> Vec<Vector> {
    kernel_from_rows(rows, cols)
}

/// Some `x` with `m x = rhs`, or `None` when the system is inconsistent.
pub fn solve_linear(m: &Matrix, rhs: &[Rational]) -> Result<Option<Vector>> {
    if rhs.len() != m.rows() {
        return Err(Error::Shape(format!(
            "right-hand side of length {} for {} rows",
            rhs.len(),
            m.rows()
        )));
    }
    let rows: Vec<SparseVec> = (0..m.rows())
        .map(|i| {
            let mut r = to_sparse(m.row(i));
            if !rhs[i].is_zero() {
                r.push((m.cols(), rhs[i].clone()));
            }
            r
        })
        .collect();
    Ok(solve_augmented(&rows, m.cols()))
}

/// Solves a system whose rows carry the right-hand side in column `cols`.
pub fn solve_augmented(rows: &[SparseVec], cols: usize) -> Option<Vector> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    if e.pivot_of.contains_key(&cols) {
        return None;
    }
    let mut x = vec![Rational::ZERO; cols];
    for (pc, p, row) in e.pivots() {
        if let Some(b) = entry(row, cols) {
            x[pc] = Rational::from_bigint(b.clone()) / Rational::from_bigint(p.clone());
        }
    }
    Some(x)
}

/// Coefficients `c` with `sum_b c_b * vectors[b] = target`, if any.
pub fn solve_combination(vectors: &[SparseVec], target: &SparseVec) -> Option<Vector> {
    let k = vectors.len();
    let mut by_coord: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for (b, v) in vectors.iter().enumerate() {
        for (j, x) in v {
            by_coord.entry(*j).or_default().push((b, x.clone()));
        }
    }
    for (j, x) in target {
        by_coord.entry(*j).or_default().push((k, x.clone()));
    }
    let rows: Vec<SparseVec> = by_coord.into_values().collect();
    solve_augmented(&rows, k)
}

/// Rank of a family given as a generator, assembled in parallel.
pub fn rank_of_images<F>(count: usize, image: F) -> usize
where
    F: Fn(usize) -> SparseVec + Sync + Send,
{
    let rows: Vec<SparseVec> = (0..count).into_par_iter().map(image).collect();
    rank_of_rows(&rows)
}
