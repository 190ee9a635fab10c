use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, SVD};

use crate::error::{Error, Result};

/// Default relative singular-value threshold used by every rank decision.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Dense real matrix with finite entries.
///
/// Checked constructors reject NaN/Inf. Arithmetic between finite matrices is
/// not re-checked; `is_finite` is available when overflow matters.
#[derive(Clone, PartialEq)]
pub struct RealMatrix(DMatrix<f64>);

impl RealMatrix {
    /// Builds a matrix from row-major data.
    pub fn new(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("matrix data".into()));
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, data)))
    }

    /// Builds a matrix from a slice of rows. All rows must have equal length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * ncols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != ncols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::new(rows.len(), ncols, &data)
    }

    pub fn column(values: &[f64]) -> Result<Self> {
        Self::new(values.len(), 1, values)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    /// Wraps an nalgebra matrix, rejecting non-finite entries.
    pub fn from_dmatrix(m: DMatrix<f64>) -> Result<Self> {
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("matrix data".into()));
        }
        Ok(Self(m))
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn nrows(&self) -> usize {
        self.0.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.0.is_square()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// True when every entry is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn scale(&self, k: f64) -> Self {
        Self(&self.0 * k)
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.nrows() * self.ncols());
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.nrows())
            .map(|i| (0..self.ncols()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    /// Entries of a single-column matrix (or all entries, column-major).
    pub fn to_vec(&self) -> Vec<f64> {
        self.0.iter().copied().collect()
    }

    /// Copy of the block starting at (`row`, `col`) with the given shape.
    pub fn block(&self, row: usize, col: usize, nrows: usize, ncols: usize) -> Self {
        Self(self.0.view((row, col), (nrows, ncols)).into_owned())
    }

    /// Horizontal concatenation. All parts must share a row count.
    pub fn hstack(parts: &[&RealMatrix]) -> Result<Self> {
        let rows = parts.first().map_or(0, |m| m.nrows());
        if let Some(bad) = parts.iter().find(|m| m.nrows() != rows) {
            return Err(Error::Dimension(format!(
                "hstack: {} rows vs {rows}",
                bad.nrows()
            )));
        }
        let cols = parts.iter().map(|m| m.ncols()).sum();
        let mut out = DMatrix::zeros(rows, cols);
        let mut c = 0;
        for m in parts {
            out.view_mut((0, c), (rows, m.ncols())).copy_from(&m.0);
            c += m.ncols();
        }
        Ok(Self(out))
    }

    /// Vertical concatenation. All parts must share a column count.
    pub fn vstack(parts: &[&RealMatrix]) -> Result<Self> {
        let cols = parts.first().map_or(0, |m| m.ncols());
        if let Some(bad) = parts.iter().find(|m| m.ncols() != cols) {
            return Err(Error::Dimension(format!(
                "vstack: {} columns vs {cols}",
                bad.ncols()
            )));
        }
        let rows = parts.iter().map(|m| m.nrows()).sum();
        let mut out = DMatrix::zeros(rows, cols);
        let mut r = 0;
        for m in parts {
            out.view_mut((r, 0), (m.nrows(), cols)).copy_from(&m.0);
            r += m.nrows();
        }
        Ok(Self(out))
    }

    /// Checked product.
    pub fn try_mul(&self, rhs: &RealMatrix) -> Result<Self> {
        if self.ncols() != rhs.nrows() {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.ncols(),
                rhs.nrows(),
                rhs.ncols()
            )));
        }
        Ok(Self(&self.0 * &rhs.0))
    }

    /// Largest absolute entry; 0 for an empty matrix.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    /// Largest absolute entrywise difference. Shapes must agree.
    pub fn max_abs_diff(&self, other: &RealMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff shape mismatch");
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<f64> {
        if self.nrows() == 0 || self.ncols() == 0 {
            return Vec::new();
        }
        let mut sv: Vec<f64> = self.0.singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// Numerical rank: the number of singular values above `tol_rel * sigma_max`.
    pub fn rank(&self, tol_rel: f64) -> usize {
        let sv = self.singular_values();
        let Some(&smax) = sv.first() else {
            return 0;
        };
        if smax == 0.0 {
            return 0;
        }
        let cutoff = tol_rel * smax;
        sv.iter().filter(|&&s| s > cutoff).count()
    }

    /// Determinant via LU factorization with partial pivoting.
    pub fn determinant(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "determinant of a non-square {}x{} matrix",
                self.nrows(),
                self.ncols()
            )));
        }
        if self.nrows() == 0 {
            return Ok(1.0);
        }
        Ok(self.0.clone().lu().determinant())
    }

    /// Minimum-norm least-squares solution of `self * x = rhs`.
    ///
    /// Singular values at or below `tol_rel * sigma_max` are treated as zero,
    /// the same cut used by [`RealMatrix::rank`]. Returns the solution column
    /// and the residual norm `|self * x - rhs|`.
    pub fn solve_min_norm(&self, rhs: &RealMatrix, tol_rel: f64) -> Result<(RealMatrix, f64)> {
        if rhs.ncols() != 1 {
            return Err(Error::Dimension(format!(
                "right-hand side must be a column, got {} columns",
                rhs.ncols()
            )));
        }
        if self.nrows() != rhs.nrows() {
            return Err(Error::Dimension(format!(
                "coefficient matrix has {} rows, right-hand side has {}",
                self.nrows(),
                rhs.nrows()
            )));
        }
        let n = self.ncols();
        let b: DVector<f64> = rhs.0.column(0).into_owned();
        if self.nrows() == 0 || n == 0 {
            return Ok((RealMatrix::zeros(n, 1), b.norm()));
        }
        let svd = SVD::new(self.0.clone(), true, true);
        let u = svd.u.as_ref().expect("left singular vectors requested");
        let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
        let smax = svd.singular_values.iter().fold(0.0_f64, |a, &s| a.max(s));
        let cutoff = tol_rel * smax;
        let mut x = DVector::zeros(n);
        if smax > 0.0 {
            for (i, &s) in svd.singular_values.iter().enumerate() {
                if s > cutoff {
                    let coef = u.column(i).dot(&b) / s;
                    x += v_t.row(i).transpose() * coef;
                }
            }
        }
        let residual = (&self.0 * &x - &b).norm();
        Ok((RealMatrix(DMatrix::from_column_slice(n, 1, x.as_slice())), residual))
    }

    /// Square matrix power by repeated multiplication.
    pub fn pow(&self, k: usize) -> Self {
        assert!(self.is_square(), "pow of a non-square matrix");
        let mut acc = Self::identity(self.nrows());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

/// Numerical rank of `m` with relative tolerance `tol_rel`.
pub fn rank(m: &RealMatrix, tol_rel: f64) -> usize {
    m.rank(tol_rel)
}

pub fn determinant(m: &RealMatrix) -> Result<f64> {
    m.determinant()
}

pub fn solve_min_norm(a: &RealMatrix, rhs: &RealMatrix, tol_rel: f64) -> Result<(RealMatrix, f64)> {
    a.solve_min_norm(rhs, tol_rel)
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;
    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut f64 {
        &mut self.0[idx]
    }
}

impl<'a> Mul<&'a RealMatrix> for &'a RealMatrix {
    type Output = RealMatrix;
    /// Panics on incompatible shapes; use [`RealMatrix::try_mul`] for a checked product.
    fn mul(self, rhs: &'a RealMatrix) -> RealMatrix {
        RealMatrix(&self.0 * &rhs.0)
    }
}

impl<'a> Add<&'a RealMatrix> for &'a RealMatrix {
    type Output = RealMatrix;
    fn add(self, rhs: &'a RealMatrix) -> RealMatrix {
        RealMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a RealMatrix> for &'a RealMatrix {
    type Output = RealMatrix;
    fn sub(self, rhs: &'a RealMatrix) -> RealMatrix {
        RealMatrix(&self.0 - &rhs.0)
    }
}

impl Neg for &RealMatrix {
    type Output = RealMatrix;
    fn neg(self) -> RealMatrix {
        RealMatrix(-&self.0)
    }
}

impl fmt::Debug for RealMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RealMatrix{:?}", self.to_rows())
    }
}

impl fmt::Display for RealMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.nrows() {
            let row: Vec<String> = (0..self.ncols()).map(|j| format!("{}", self.0[(i, j)])).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
