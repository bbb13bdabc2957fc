//! Dense column-major matrices over `f64` and `Complex64`.
//!
//! Snapshot matrices are tall and skinny, so storage is column-major: a
//! column is a contiguous slice and the hot kernels (multiply, reflectors,
//! rotations) stream through columns. Parallel builds split work by output
//! column only, so results are bit-identical to the sequential build.

use crate::error::{Error, Result};
use crate::par;
use num_complex::Complex64;

/// Dense real matrix, column-major, 64-bit entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be at least 1x1");
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from a column-major buffer of length `rows * cols`.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "buffer length mismatch");
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be at least 1x1");
        Matrix { rows, cols, data }
    }

    /// Build from row slices; convenient in tests.
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        Matrix::from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for i in 0..self.rows {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// `self * rhs`, parallelized over output columns.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let rows = self.rows;
        let inner = self.cols;
        let mut out = Matrix::zeros(rows, rhs.cols);
        par::for_each_chunk_mut(&mut out.data, rows, |j, col| {
            for k in 0..inner {
                let w = rhs[(k, j)];
                let a = self.col(k);
                for i in 0..rows {
                    col[i] += w * a[i];
                }
            }
        });
        out
    }

    /// `self^T * rhs` without forming the transpose.
    pub fn tr_mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows, "row counts must agree");
        let mut out = Matrix::zeros(self.cols, rhs.cols);
        let rows = self.cols;
        par::for_each_chunk_mut(&mut out.data, rows, |j, col| {
            let b = rhs.col(j);
            for (k, slot) in col.iter_mut().enumerate() {
                let a = self.col(k);
                let mut acc = 0.0;
                for i in 0..a.len() {
                    acc += a[i] * b[i];
                }
                *slot = acc;
            }
        });
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        let mut out = vec![0.0; self.rows];
        for (k, &w) in v.iter().enumerate() {
            let a = self.col(k);
            for i in 0..self.rows {
                out[i] += w * a[i];
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Copy of columns `start..end`.
    pub fn columns(&self, start: usize, end: usize) -> Matrix {
        assert!(start < end && end <= self.cols);
        Matrix::from_col_major(self.rows, end - start, self.data[start * self.rows..end * self.rows].to_vec())
    }

    /// Copy of rows `start..end`.
    pub fn row_block(&self, start: usize, end: usize) -> Matrix {
        assert!(start < end && end <= self.rows);
        Matrix::from_fn(end - start, self.cols, |i, j| self[(start + i, j)])
    }

    /// Stack blocks vertically; all must share the column count.
    pub fn vstack(blocks: &[&Matrix]) -> Matrix {
        assert!(!blocks.is_empty());
        let cols = blocks[0].cols;
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = Matrix::zeros(rows, cols);
        for j in 0..cols {
            let dst = out.col_mut(j);
            let mut off = 0;
            for b in blocks {
                assert_eq!(b.cols, cols, "vstack column mismatch");
                dst[off..off + b.rows].copy_from_slice(b.col(j));
                off += b.rows;
            }
        }
        out
    }

    /// Scale column `j` by `s[j]` in place.
    pub fn scale_columns(&mut self, s: &[f64]) {
        assert_eq!(s.len(), self.cols);
        for j in 0..self.cols {
            let sj = s[j];
            for x in self.col_mut(j) {
                *x *= sj;
            }
        }
    }

    /// Ensure every entry is finite, otherwise report which is not.
    pub fn check_finite(&self, what: &str) -> Result<()> {
        for j in 0..self.cols {
            for (i, x) in self.col(j).iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::invalid(format!("{what} has non-finite entry at ({i}, {j})")));
                }
            }
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.data[c * self.rows + r]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.data[c * self.rows + r]
    }
}

/// Dense complex matrix, column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be at least 1x1");
        CMatrix { rows, cols, data: vec![Complex64::ZERO; rows * cols] }
    }

    pub fn from_real(m: &Matrix) -> Self {
        CMatrix {
            rows: m.rows(),
            cols: m.cols(),
            data: m.data().iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMatrix::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [Complex64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            let dst = out.col_mut(j);
            for k in 0..self.cols {
                let w = rhs[(k, j)];
                let a = self.col(k);
                for i in 0..a.len() {
                    dst[i] += w * a[i];
                }
            }
        }
        out
    }

    /// `real * self` lifted as two real multiplies.
    pub fn left_mul_real(&self, lhs: &Matrix) -> CMatrix {
        assert_eq!(lhs.cols(), self.rows, "inner dimensions must agree");
        let rows = lhs.rows();
        let mut out = CMatrix::zeros(rows, self.cols);
        for j in 0..self.cols {
            let src = self.col(j);
            let dst = out.col_mut(j);
            for (k, w) in src.iter().enumerate() {
                let a = lhs.col(k);
                for i in 0..rows {
                    dst[i] += Complex64::new(w.re * a[i], w.im * a[i]);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        let mut out = vec![Complex64::ZERO; self.rows];
        for (k, &w) in v.iter().enumerate() {
            let a = self.col(k);
            for i in 0..self.rows {
                out[i] += w * a[i];
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> CMatrix {
        let mut t = CMatrix::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for i in 0..self.rows {
                t[(j, i)] = self[(i, j)].conj();
            }
        }
        t
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// One-norm (max absolute column sum).
    pub fn one_norm(&self) -> f64 {
        (0..self.cols)
            .map(|j| self.col(j).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0_f64, f64::max)
    }

    pub fn row_block(&self, start: usize, end: usize) -> CMatrix {
        assert!(start < end && end <= self.rows);
        CMatrix::from_fn(end - start, self.cols, |i, j| self[(start + i, j)])
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[c * self.rows + r]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[c * self.rows + r]
    }
}
