//! Dense matrices over an exact field and row reduction.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::{fma, Field, Scalar};
use crate::error::{Error, Result};

/// A dense row-major matrix. Entries are always canonical scalars of `field`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Mat {
        Mat { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { field, rows, cols, data }
    }

    /// Build from integer rows; handy in tests and bundled examples.
    pub fn from_i64(field: Field, rows: &[Vec<i64>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Mat::from_fn(field, r, c, |i, j| field.from_i64(rows[i][j]))
    }

    pub fn from_rows(field: Field, cols: usize, rows: &[Vec<Scalar>]) -> Mat {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row.iter().cloned());
        }
        Mat { field, rows: rows.len(), cols, data }
    }

    pub fn from_cols(field: Field, rows: usize, cols: &[Vec<Scalar>]) -> Mat {
        let mut m = Mat::zeros(field, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged columns");
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn column_vector(field: Field, v: &[Scalar]) -> Mat {
        Mat { field, rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn field(&self) -> Field {
        self.field
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
    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| if i == j { self[(i, j)].is_one() } else { self[(i, j)].is_zero() })
            })
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.field, self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        Mat { field: self.field, rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    fma(&mut acc, a, b);
                }
                acc
            })
            .collect()
    }

    /// Checked product.
    pub fn try_mul(&self, rhs: &Mat) -> Result<Mat> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(self * rhs)
    }

    /// Kronecker product, index `(i, k)` maps to `i * rhs.dim + k`.
    pub fn kron(&self, rhs: &Mat) -> Mat {
        let mut out = Mat::zeros(self.field, self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        let b = &rhs[(k, l)];
                        if !b.is_zero() {
                            out[(i * rhs.rows + k, j * rhs.cols + l)] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(field: Field, rows: usize, blocks: &[&Mat]) -> Mat {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            out.set_block(0, off, b);
            off += b.cols;
        }
        out
    }

    pub fn vstack(field: Field, cols: usize, blocks: &[&Mat]) -> Mat {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            out.set_block(off, 0, b);
            off += b.rows;
        }
        out
    }

    /// Block-diagonal matrix.
    pub fn block_diag(field: Field, blocks: &[&Mat]) -> Mat {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        Mat::from_fn(self.field, rows, cols, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(self.field, idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(self.field, self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    /// Entries flattened row-major into a vector (used to turn linear
    /// equations in matrix unknowns into a column).
    pub fn flatten(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn unflatten(field: Field, rows: usize, cols: usize, v: &[Scalar]) -> Mat {
        assert_eq!(v.len(), rows * cols);
        Mat { field, rows, cols, data: v.to_vec() }
    }

    pub fn trace(&self) -> Scalar {
        let mut t = self.field.zero();
        for i in 0..self.rows.min(self.cols) {
            t += &self[(i, i)];
        }
        t
    }

    pub fn rank(&self) -> usize {
        rref(self).pivots.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = Mat::hstack(self.field, n, &[self, &Mat::identity(self.field, n)]);
        let r = rref(&aug);
        if r.pivots.len() < n || r.pivots[n - 1] >= n {
            return None;
        }
        Some(r.mat.block(0, n, n, n))
    }

    pub fn det(&self) -> Scalar {
        assert!(self.is_square());
        let mut a = self.clone();
        let n = self.rows;
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[(r, c)].is_zero()) else {
                return self.field.zero();
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let piv = a[(c, c)].clone();
            det = &det * &piv;
            let inv = piv.inv().unwrap();
            for r in c + 1..n {
                if a[(r, c)].is_zero() {
                    continue;
                }
                let f = &a[(r, c)] * &inv;
                for j in c..n {
                    let t = &f * &a[(c, j)];
                    a[(r, j)] -= &t;
                }
            }
        }
        det
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Kernel of `self` as a subspace of the column space `k^cols`.
    pub fn kernel(&self) -> super::Subspace {
        super::Subspace::kernel_of(self)
    }

    /// Column space as a subspace of `k^rows`.
    pub fn image(&self) -> super::Subspace {
        super::Subspace::span_of_cols(self)
    }

    pub fn pow(&self, mut e: u32) -> Mat {
        let mut base = self.clone();
        let mut acc = Mat::identity(self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Mul<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = Mat::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs.data[k * rhs.cols + j];
                    if !b.is_zero() {
                        fma(&mut out.data[i * rhs.cols + j], a, b);
                    }
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum dimension mismatch");
        Mat {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference dimension mismatch");
        Mat {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat { field: self.field, rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}{}", self.rows, self.cols, self)
    }
}

/// Reduced row echelon form with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub mat: Mat,
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form. Over the rationals the forward pass is the
/// fraction-free (Bareiss) elimination on integer rows; the result is
/// identical to ordinary Gauss-Jordan since the RREF is unique.
pub fn rref(a: &Mat) -> Rref {
    match a.field {
        Field::Prime(_) => rref_prime(a),
        Field::Rationals => rref_rational(a),
    }
}

fn rref_prime(a: &Mat) -> Rref {
    let mut m = a.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(p, r);
        let inv = m[(r, c)].inv().unwrap();
        for j in c..cols {
            m.data[r * cols + j] *= &inv;
        }
        let pivot_row: Vec<Scalar> = m.row(r)[c..].to_vec();
        for i in 0..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone();
            for (off, pv) in pivot_row.iter().enumerate() {
                if pv.is_zero() {
                    continue;
                }
                let t = &f * pv;
                m.data[i * cols + c + off] -= &t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { mat: m, pivots }
}

#[allow(clippy::needless_range_loop)]
fn rref_rational(a: &Mat) -> Rref {
    let (rows, cols) = (a.rows, a.cols);
    // Clear denominators row by row.
    let mut m: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            let row = a.row(i);
            let mut l = BigInt::one();
            for x in row {
                if let Scalar::Q(q) = x {
                    l = l.lcm(q.denom());
                }
            }
            row.iter()
                .map(|x| match x {
                    Scalar::Q(q) => q.numer() * (&l / q.denom()),
                    Scalar::Fp(..) => unreachable!(),
                })
                .collect()
        })
        .collect();
    // Bareiss forward elimination.
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let piv = m[r][c].clone();
        for i in r + 1..rows {
            let f = m[i][c].clone();
            for j in 0..cols {
                let v = (&piv * &m[i][j] - &f * &m[r][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    // Integer back-substitution with content removal.
    for row in m.iter_mut().take(pivots.len()) {
        primitive_row(row);
    }
    for k in (0..pivots.len()).rev() {
        let c = pivots[k];
        for i in 0..k {
            if m[i][c].is_zero() {
                continue;
            }
            let (pk, fi) = (m[k][c].clone(), m[i][c].clone());
            for j in 0..cols {
                m[i][j] = &pk * &m[i][j] - &fi * &m[k][j];
            }
            primitive_row(&mut m[i]);
        }
    }
    let mut out = Mat::zeros(Field::Rationals, rows, cols);
    for (k, &c) in pivots.iter().enumerate() {
        let piv = m[k][c].clone();
        for j in 0..cols {
            if !m[k][j].is_zero() {
                out[(k, j)] = Scalar::Q(BigRational::new(m[k][j].clone(), piv.clone()));
            }
        }
    }
    Rref { mat: out, pivots }
}

fn primitive_row(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        *x = &*x / &g;
    }
}

/// Result of solving `A x = b`.
#[derive(Clone, Debug)]
pub struct Solution {
    /// A particular solution (free variables set to zero).
    pub particular: Vec<Scalar>,
    /// Kernel of `A`, basis rows in reduced echelon form.
    pub kernel: super::Subspace,
}

/// Solve `A x = b` exactly. Returns `Ok(None)` when inconsistent.
pub fn solve(a: &Mat, b: &[Scalar]) -> Result<Option<Solution>> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} entries, matrix has {} rows",
            b.len(),
            a.rows
        )));
    }
    match solve_particular(a, b) {
        Some(x) => Ok(Some(Solution { particular: x, kernel: super::Subspace::span_of_cols(a.kernel().basis()) })),
        None => Ok(None),
    }
}

/// Particular solution only (no kernel computation).
pub fn solve_particular(a: &Mat, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = a.cols;
    let aug = Mat::hstack(a.field, a.rows, &[a, &Mat::column_vector(a.field, b)]);
    let r = rref(&aug);
    if r.pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![a.field.zero(); n];
    for (k, &c) in r.pivots.iter().enumerate() {
        x[c] = r.mat[(k, n)].clone();
    }
    Some(x)
}

/// Solve `A X = B` for a matrix unknown, column by column in one reduction.
pub fn solve_matrix(a: &Mat, b: &Mat) -> Option<Mat> {
    assert_eq!(a.rows, b.rows);
    let n = a.cols;
    let aug = Mat::hstack(a.field, a.rows, &[a, b]);
    let r = rref(&aug);
    if r.pivots.iter().any(|&c| c >= n) {
        return None;
    }
    let mut x = Mat::zeros(a.field, n, b.cols);
    for (k, &c) in r.pivots.iter().enumerate() {
        for j in 0..b.cols {
            x[(c, j)] = r.mat[(k, n + j)].clone();
        }
    }
    Some(x)
}
