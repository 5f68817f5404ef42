//! Dense matrices over a finite field with Gauss-Jordan elimination.
//!
//! Matrices carry no field; every arithmetic routine takes the [`Field`]
//! explicitly. Pivot search always takes the lowest row index first, so
//! reduced forms and kernel bases are deterministic.

use std::ops::{Index, IndexMut};

use thiserror::Error;

use crate::field::{Fe, Field};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("shape mismatch: {left:?} vs {right:?}")]
pub struct ShapeMismatch {
    pub left: (usize, usize),
    pub right: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Fe>, // row-major
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Fe>) -> Self {
        assert_eq!(rows * cols, data.len());
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Fe::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Fe::ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Fe>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Self {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(nrows: usize, cols: &[Vec<Fe>]) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), nrows);
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = *x;
            }
        }
        m
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Fe> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn map(&self, mut f: impl FnMut(Fe) -> Fe) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| f(*x)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Entrywise `x -> x^{p^t}`.
    pub fn frobenius(&self, field: &Field, t: i64) -> Self {
        self.map(|x| field.frobenius(x, t))
    }

    pub fn mul(&self, other: &Matrix, field: &Field) -> Result<Matrix, ShapeMismatch> {
        if self.cols != other.rows {
            return Err(ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = field.add(out[(i, j)], field.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix, field: &Field) -> Result<Matrix, ShapeMismatch> {
        if self.shape() != other.shape() {
            return Err(ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| field.add(*a, *b))
                .collect(),
        })
    }

    pub fn scale(&self, c: Fe, field: &Field) -> Matrix {
        self.map(|x| field.mul(c, x))
    }

    pub fn apply(&self, v: &[Fe], field: &Field) -> Vec<Fe> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Fe::ZERO, |acc, (a, b)| field.add(acc, field.mul(*a, *b)))
            })
            .collect()
    }

    /// Kronecker product `self (x) other`.
    pub fn kron(&self, other: &Matrix, field: &Field) -> Matrix {
        let (r1, c1) = self.shape();
        let (r2, c2) = other.shape();
        let mut out = Matrix::zeros(r1 * r2, c1 * c2);
        for i in 0..r1 {
            for j in 0..c1 {
                let a = self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..r2 {
                    for l in 0..c2 {
                        out[(i * r2 + k, j * c2 + l)] = field.mul(a, other[(k, l)]);
                    }
                }
            }
        }
        out
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self, field: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = field.inv(self[(r, c)]).unwrap();
            for j in c..self.cols {
                self[(r, j)] = field.mul(self[(r, j)], inv);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self[(i, c)];
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let t = field.mul(factor, self[(r, j)]);
                    self[(i, j)] = field.sub(self[(i, j)], t);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self, field: &Field) -> usize {
        self.clone().rref(field).len()
    }

    /// Basis of `{v : M v = 0}`, one vector per free column in increasing order.
    pub fn nullspace(&self, field: &Field) -> Vec<Vec<Fe>> {
        let mut m = self.clone();
        let pivots = m.rref(field);
        let mut is_pivot = vec![None; self.cols];
        for (r, c) in pivots.iter().enumerate() {
            is_pivot[*c] = Some(r);
        }
        (0..self.cols)
            .filter(|c| is_pivot[*c].is_none())
            .map(|free| {
                let mut v = vec![Fe::ZERO; self.cols];
                v[free] = Fe::ONE;
                for (r, pc) in pivots.iter().enumerate() {
                    v[*pc] = field.neg(m[(r, free)]);
                }
                v
            })
            .collect()
    }

    /// Solves `M x = b`. Returns a particular solution and a nullspace basis.
    pub fn solve(&self, b: &[Fe], field: &Field) -> Option<(Vec<Fe>, Vec<Vec<Fe>>)> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, self.cols)] = b[i];
        }
        let pivots = aug.rref(field);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Fe::ZERO; self.cols];
        for (r, c) in pivots.iter().enumerate() {
            x[*c] = aug[(r, self.cols)];
        }
        Some((x, self.nullspace(field)))
    }

    pub fn inverse(&self, field: &Field) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = Fe::ONE;
        }
        let pivots = aug.rref(field);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)];
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self, field: &Field) -> bool {
        self.rows == self.cols && self.rank(field) == self.rows
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Fe;
    fn index(&self, (i, j): (usize, usize)) -> &Fe {
        assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Fe {
        assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Incrementally maintained echelon basis of a subspace of `F^n`.
///
/// Each stored vector has a pivot coordinate at which it is 1 and every
/// other stored vector is 0, so coordinates of members are read off pivots.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    dim: usize,
    vectors: Vec<Vec<Fe>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            vectors: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[Vec<Fe>] {
        &self.vectors
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis (zeroing every pivot coordinate).
    pub fn reduce(&self, v: &[Fe], field: &Field) -> Vec<Fe> {
        let mut v = v.to_vec();
        for (b, &pc) in self.vectors.iter().zip(&self.pivots) {
            let c = v[pc];
            if c.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x = field.sub(*x, field.mul(c, *y));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Fe], field: &Field) -> bool {
        self.reduce(v, field).iter().all(|x| x.is_zero())
    }

    /// Adds `v` if independent; returns whether the span grew.
    ///
    /// The new pivot is the first nonzero coordinate of the reduced vector.
    pub fn insert(&mut self, v: &[Fe], field: &Field) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut r = self.reduce(v, field);
        let Some(pc) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = field.inv(r[pc]).unwrap();
        for x in r.iter_mut() {
            *x = field.mul(*x, inv);
        }
        for b in self.vectors.iter_mut() {
            let c = b[pc];
            if c.is_zero() {
                continue;
            }
            for (x, y) in b.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x = field.sub(*x, field.mul(c, *y));
                }
            }
        }
        self.vectors.push(r);
        self.pivots.push(pc);
        true
    }

    /// Coordinates of a member of the span with respect to the stored vectors.
    pub fn coordinates(&self, v: &[Fe], field: &Field) -> Option<Vec<Fe>> {
        if !self.contains(v, field) {
            return None;
        }
        Some(self.pivots.iter().map(|pc| v[*pc]).collect())
    }
}
