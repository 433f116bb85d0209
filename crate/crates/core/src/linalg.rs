//! Dense real/complex kernels: pseudoinverse, singular-value extremes and
//! Hermitian positive definite solves.
//!
//! Backed by nalgebra: the SVD is Golub–Kahan bidiagonalization followed by
//! implicit-shift QR, the HPD solve is a Cholesky factorization.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

/// Scalar types the kernels accept.
pub trait Scalar: ComplexField<RealField = f64> + Copy {}
impl Scalar for f64 {}
impl Scalar for Complex64 {}

/// Dense matrix with logical index offsets.
///
/// The offsets are metadata only: arithmetic ignores them, while
/// [`DenseMatrix::get`] and [`DenseMatrix::row`] address entries by logical
/// index (first row `row_offset`, first column `col_offset`).
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T: Scalar> {
    data: DMatrix<T>,
    row_offset: i64,
    col_offset: i64,
}

pub type RealMatrix = DenseMatrix<f64>;
pub type ComplexMatrix = DenseMatrix<Complex64>;

impl<T: Scalar> DenseMatrix<T> {
    pub fn from_row_major(rows: usize, cols: usize, entries: &[T]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self::from_matrix(DMatrix::from_row_slice(rows, cols, entries)))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> T) -> Self {
        Self::from_matrix(DMatrix::from_fn(rows, cols, f))
    }

    pub fn from_matrix(data: DMatrix<T>) -> Self {
        Self { data, row_offset: 0, col_offset: 0 }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_matrix(DMatrix::identity(n, n))
    }

    pub fn with_offsets(mut self, row_offset: i64, col_offset: i64) -> Self {
        self.row_offset = row_offset;
        self.col_offset = col_offset;
        self
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn row_offset(&self) -> i64 {
        self.row_offset
    }

    pub fn col_offset(&self) -> i64 {
        self.col_offset
    }

    pub fn as_matrix(&self) -> &DMatrix<T> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<T> {
        self.data
    }

    /// Entry at logical position `(i, j)`, or `None` outside the stored block.
    pub fn get(&self, i: i64, j: i64) -> Option<T> {
        let r = usize::try_from(i - self.row_offset).ok()?;
        let c = usize::try_from(j - self.col_offset).ok()?;
        (r < self.rows() && c < self.cols()).then(|| self.data[(r, c)])
    }

    /// Row with logical index `i`.
    pub fn row(&self, i: i64) -> Option<Vec<T>> {
        let r = usize::try_from(i - self.row_offset).ok()?;
        (r < self.rows()).then(|| self.data.row(r).iter().copied().collect())
    }

    /// Conjugate transpose; offsets are swapped.
    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.adjoint(),
            row_offset: self.col_offset,
            col_offset: self.row_offset,
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols() != other.rows() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Ok(Self {
            data: &self.data * &other.data,
            row_offset: self.row_offset,
            col_offset: other.col_offset,
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols()
            )));
        }
        let out = &self.data * DVector::from_column_slice(v);
        Ok(out.iter().copied().collect())
    }

    /// Spectral norm.
    pub fn norm2(&self) -> f64 {
        if self.rows() == 0 || self.cols() == 0 {
            return 0.0;
        }
        sigma_extremes(self).map(|(_, max)| max).unwrap_or(0.0)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.norm()
    }
}

fn check_nonempty<T: Scalar>(a: &DenseMatrix<T>) -> Result<()> {
    if a.rows() == 0 || a.cols() == 0 {
        Err(Error::DimensionMismatch("empty matrix".into()))
    } else {
        Ok(())
    }
}

/// Default relative cutoff for [`pinv`]: `1e-12 · max(rows, cols)`.
pub fn default_rcond(rows: usize, cols: usize) -> f64 {
    1e-12 * rows.max(cols) as f64
}

/// Moore–Penrose pseudoinverse with its singular-value extremes.
#[derive(Debug, Clone)]
pub struct PseudoInverse<T: Scalar> {
    pub matrix: DenseMatrix<T>,
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// Number of singular values kept.
    pub rank: usize,
}

/// Pseudoinverse from a full SVD; singular values below `rcond · σ_max` are
/// treated as zero. The result's offsets are the transposed offsets of `a`,
/// so row `k` of the result is addressed by the column index `k` of `a`.
pub fn pinv_full<T: Scalar>(a: &DenseMatrix<T>, rcond: f64) -> Result<PseudoInverse<T>> {
    check_nonempty(a)?;
    let svd = a.data.clone().svd(true, true);
    let s = &svd.singular_values;
    let sigma_max = s.iter().copied().fold(0.0, f64::max);
    let sigma_min = s.iter().copied().fold(f64::INFINITY, f64::min);
    let cutoff = rcond * sigma_max;
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let mut rank = 0;
    let mut out = DMatrix::<T>::zeros(a.cols(), a.rows());
    for (i, &sv) in s.iter().enumerate() {
        if sv > cutoff && sv > 0.0 {
            rank += 1;
            let inv = T::from_real(1.0 / sv);
            // V Σ^+ U^*: column i of V times row i of U^*
            let vcol = v_t.row(i).adjoint();
            let urow = u.column(i).adjoint();
            out += vcol * urow * inv;
        }
    }
    Ok(PseudoInverse {
        matrix: DenseMatrix {
            data: out,
            row_offset: a.col_offset,
            col_offset: a.row_offset,
        },
        sigma_min,
        sigma_max,
        rank,
    })
}

pub fn pinv<T: Scalar>(a: &DenseMatrix<T>, rcond: f64) -> Result<DenseMatrix<T>> {
    if !(rcond > 0.0 && rcond < 1.0) {
        return Err(Error::InvalidParameter(format!("rcond must lie in (0,1), got {rcond}")));
    }
    pinv_full(a, rcond).map(|p| p.matrix)
}

/// Smallest and largest of the `min(rows, cols)` singular values.
pub fn sigma_extremes<T: Scalar>(a: &DenseMatrix<T>) -> Result<(f64, f64)> {
    check_nonempty(a)?;
    let s = a.data.clone().singular_values();
    let max = s.iter().copied().fold(0.0, f64::max);
    let min = s.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((min, max))
}

/// Solves `A x = b` for Hermitian positive definite `A` by Cholesky.
pub fn solve_spd<T: Scalar>(a: &DenseMatrix<T>, b: &[T]) -> Result<Vec<T>> {
    check_nonempty(a)?;
    if a.rows() != a.cols() || b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} system with right-hand side of length {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    let chol = a.data.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
    let x = chol.solve(&DVector::from_column_slice(b));
    Ok(x.iter().copied().collect())
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues<T: Scalar>(a: &DenseMatrix<T>) -> Result<Vec<f64>> {
    check_nonempty(a)?;
    if a.rows() != a.cols() {
        return Err(Error::DimensionMismatch("eigenvalues of a non-square matrix".into()));
    }
    let mut ev: Vec<f64> = a.data.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    Ok(ev)
}
