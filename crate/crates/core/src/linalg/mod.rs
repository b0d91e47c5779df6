//! Dense symmetric linear algebra.
//!
//! Everything in the crate is small and dense (`kn` in the tens or low
//! hundreds), so matrices are plain row-major `Vec<f64>` buffers.

mod eigen;
mod ops;

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Index, Sub};

pub use eigen::{eigh, Spectrum};
pub use ops::{cluster_count, inverse, is_psd, kernel_dim, loewner_leq, pseudo_sqrt_inv, rank, spectral_norm};

use crate::error::{Error, Result};

pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// Numerical tolerances shared by every check in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tolerances {
    /// Largest accepted `|M[i][j] − M[j][i]|` on ingestion.
    pub sym: f64,
    /// Relative slack on the smallest eigenvalue in PSD tests.
    pub psd: f64,
    /// Relative eigenvalue cutoff separating kernel from image.
    pub rank_rel: f64,
    /// Relative slack for Loewner-order comparisons.
    pub loewner: f64,
    /// Residual tolerance for identities such as `M v = λ v` or `Σ D_v = 2 Σ W_e`.
    pub resid: f64,
    /// Orthonormality tolerance for eigenvector bases.
    pub ortho: f64,
    /// A bound report holds iff its slack is at least `-check`.
    pub check: f64,
    /// Detection tolerance for "the bound is attained".
    pub attain: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            sym: 1e-9,
            psd: 1e-9,
            rank_rel: 1e-10,
            loewner: 1e-9,
            resid: 1e-8,
            ortho: 1e-8,
            check: 1e-8,
            attain: 1e-7,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("sym", self.sym),
            ("psd", self.psd),
            ("rank_rel", self.rank_rel),
            ("loewner", self.loewner),
            ("resid", self.resid),
            ("ortho", self.ortho),
            ("check", self.check),
            ("attain", self.attain),
        ];
        for (name, value) in fields {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidTolerance(name));
            }
        }
        Ok(())
    }
}

/// A real symmetric matrix, stored row-major and kept exactly symmetric.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![0.0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scaled_identity(dim, 1.0)
    }

    pub fn scaled_identity(dim: usize, s: f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = s;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let dim = values.len();
        let mut m = Self::zeros(dim);
        for (i, &x) in values.iter().enumerate() {
            m.data[i * dim + i] = x;
        }
        m
    }

    /// Ingests a row-major buffer. Entries must be finite and symmetric to
    /// within `sym_tol`; the stored matrix is `(M + Mᵀ)/2`.
    pub fn from_row_major(dim: usize, data: Vec<f64>, sym_tol: f64) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimMismatch { expected: dim * dim, found: data.len() });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in (i + 1)..dim {
                worst = worst.max(abs(data[i * dim + j] - data[j * dim + i]));
            }
        }
        if worst > sym_tol {
            return Err(Error::NotSymmetric { max_asymmetry: worst });
        }
        Ok(Self::symmetrized(dim, data))
    }

    /// Builds `(M + Mᵀ)/2` from an arbitrary square buffer without checks.
    pub(crate) fn symmetrized(dim: usize, mut data: Vec<f64>) -> Self {
        for i in 0..dim {
            for j in (i + 1)..dim {
                let avg = 0.5 * (data[i * dim + j] + data[j * dim + i]);
                data[i * dim + j] = avg;
                data[j * dim + i] = avg;
            }
        }
        Self { dim, data }
    }

    /// Entries `f(i, j)` for `i ≤ j`, mirrored below the diagonal.
    pub fn from_upper_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let x = f(i, j);
                m.data[i * dim + j] = x;
                m.data[j * dim + i] = x;
            }
        }
        m
    }

    /// The rank-one matrix `s · u uᵀ`.
    pub fn outer(u: &[f64], s: f64) -> Self {
        Self::from_upper_fn(u.len(), |i, j| s * u[i] * u[j])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Sets `M[i][j]` and `M[j][i]`.
    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.data[i * self.dim + j] = x;
        self.data[j * self.dim + i] = x;
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|x| s * x).collect() }
    }

    pub fn frobenius_norm(&self) -> f64 {
        sqrt(self.data.iter().map(|x| x * x).sum())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).fold(0.0f64, |m, (a, b)| m.max(abs(a - b)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0.0)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim;
        (0..n).map(|i| (0..n).map(|j| self.data[i * n + j] * x[j]).sum()).collect()
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix { rows: self.dim, cols: self.dim, data: self.data.clone() }
    }

    /// `B · self · B` for symmetric `B`, returned symmetrized.
    pub fn congruence(&self, b: &SymMatrix) -> SymMatrix {
        let bm = b.to_matrix();
        let p = bm.mul(&self.to_matrix()).mul(&bm);
        SymMatrix::symmetrized(self.dim, p.data)
    }

    /// Copies a `block.dim()` square block into position `(row, col)`;
    /// off-diagonal placements also write the transposed block.
    pub fn set_block(&mut self, row: usize, col: usize, block: &SymMatrix) {
        let k = block.dim;
        for i in 0..k {
            for j in 0..k {
                let x = block.data[i * k + j];
                self.data[(row + i) * self.dim + col + j] = x;
                self.data[(col + j) * self.dim + row + i] = x;
            }
        }
    }

    /// Adds `s · block` at `(row, col)` (and its transpose at `(col, row)` when off the diagonal).
    pub fn add_block(&mut self, row: usize, col: usize, block: &SymMatrix, s: f64) {
        let k = block.dim;
        for i in 0..k {
            for j in 0..k {
                let x = s * block.data[i * k + j];
                self.data[(row + i) * self.dim + col + j] += x;
                if row != col {
                    self.data[(col + j) * self.dim + row + i] += x;
                }
            }
        }
    }

    /// The `k × k` block at block coordinates `(bi, bj)`. Off-diagonal blocks
    /// of a symmetric matrix need not be symmetric, hence the general return.
    pub fn block(&self, bi: usize, bj: usize, k: usize) -> Matrix {
        let mut out = Matrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                out.set(i, j, self.get(bi * k + i, bj * k + j));
            }
        }
        out
    }
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl Add for &SymMatrix {
    type Output = SymMatrix;
    fn add(self, rhs: &SymMatrix) -> SymMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        SymMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &SymMatrix {
    type Output = SymMatrix;
    fn sub(self, rhs: &SymMatrix) -> SymMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        SymMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl AddAssign<&SymMatrix> for SymMatrix {
    fn add_assign(&mut self, rhs: &SymMatrix) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

/// A general dense rectangular matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    /// Stacks equal-length vectors as columns.
    pub fn from_columns(rows: usize, columns: &[Vec<f64>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
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

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.data[i * self.cols + l];
                if a == 0.0 {
                    continue;
                }
                let row = &rhs.data[l * rhs.cols..(l + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// The Gram matrix `selfᵀ · self`.
    pub fn gram(&self) -> SymMatrix {
        let n = self.cols;
        let mut g = SymMatrix::zeros(n);
        for r in 0..self.rows {
            let row = &self.data[r * n..(r + 1) * n];
            for i in 0..n {
                if row[i] == 0.0 {
                    continue;
                }
                for j in i..n {
                    g.data[i * n + j] += row[i] * row[j];
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                g.data[j * n + i] = g.data[i * n + j];
            }
        }
        g
    }

    pub fn frobenius_norm(&self) -> f64 {
        sqrt(self.data.iter().map(|x| x * x).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, x| m.max(abs(*x)))
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    sqrt(dot(a, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ingestion_symmetrizes_within_tolerance() {
        let m = SymMatrix::from_row_major(2, vec![1.0, 2.0, 2.0 + 1e-12, 3.0], 1e-9).unwrap();
        assert_eq!(m.get(0, 1), m.get(1, 0));
        assert!((m.get(0, 1) - (2.0 + 0.5e-12)).abs() < 1e-15);
    }

    #[test]
    fn ingestion_rejects_asymmetry_and_nan() {
        let err = SymMatrix::from_row_major(2, vec![1.0, 2.0, 2.1, 3.0], 1e-9).unwrap_err();
        assert!(matches!(err, Error::NotSymmetric { .. }));
        let err = SymMatrix::from_row_major(2, vec![1.0, f64::NAN, f64::NAN, 3.0], 1e-9).unwrap_err();
        assert_eq!(err, Error::NonFinite);
        let err = SymMatrix::from_row_major(2, vec![1.0; 3], 1e-9).unwrap_err();
        assert!(matches!(err, Error::DimMismatch { .. }));
    }

    #[test]
    fn gram_matches_explicit_product() {
        let a = Matrix::from_row_major(3, 2, vec![1.0, 2.0, -1.0, 0.5, 3.0, 0.0]).unwrap();
        let g = a.gram();
        let p = a.transpose().mul(&a);
        for i in 0..2 {
            for j in 0..2 {
                assert!((g.get(i, j) - p.get(i, j)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn tolerances_reject_negative() {
        let tol = Tolerances { psd: -1.0, ..Tolerances::default() };
        assert_eq!(tol.validate(), Err(Error::InvalidTolerance("psd")));
        assert!(Tolerances::default().validate().is_ok());
    }
}
