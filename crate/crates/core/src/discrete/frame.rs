use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::GaborGrid;
use crate::linalg::{hermitian_eigenvalues, solve_spd, ComplexMatrix};
use crate::{Error, Result};

/// Frame operator `S_g = C_g^* C_g` in its Walnut representation.
///
/// `S[n][n'] = M Σ_k g[n-ka] conj(g[n'-ka])` when `n ≡ n' (mod M)` and zero
/// otherwise, so `S` splits into `M` Hermitian blocks of size `b = K/M`,
/// block `r` acting on the indices `r, r+M, r+2M, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameOperator {
    m: usize,
    blocks: Vec<DMatrix<Complex64>>,
}

impl FrameOperator {
    pub fn new(grid: &GaborGrid, g: &[Complex64]) -> Result<Self> {
        if g.len() != grid.len() {
            return Err(Error::DimensionMismatch(format!(
                "window has length {}, expected K = {}",
                g.len(),
                grid.len()
            )));
        }
        let (len, a, m, n, b) = (grid.len(), grid.a(), grid.m(), grid.n(), grid.b());
        let scale = Complex64::new(m as f64, 0.0);
        let blocks = (0..m)
            .map(|r| {
                let mut block = DMatrix::<Complex64>::zeros(b, b);
                for k in 0..n {
                    let col: Vec<Complex64> =
                        (0..b).map(|p| g[(r + p * m + len - k * a) % len]).collect();
                    for p in 0..b {
                        for q in 0..b {
                            block[(p, q)] += col[p] * col[q].conj();
                        }
                    }
                }
                block * scale
            })
            .collect();
        Ok(Self { m, blocks })
    }

    pub(crate) fn from_blocks(m: usize, blocks: Vec<DMatrix<Complex64>>) -> Self {
        Self { m, blocks }
    }

    pub fn blocks(&self) -> &[DMatrix<Complex64>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.m * self.block_size()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn block_size(&self) -> usize {
        self.blocks.first().map_or(0, |b| b.nrows())
    }

    /// Residue class `r` of `v`, as a vector.
    fn gather(&self, v: &[Complex64], r: usize) -> DVector<Complex64> {
        DVector::from_iterator(self.block_size(), (0..self.block_size()).map(|p| v[r + p * self.m]))
    }

    fn scatter(&self, out: &mut [Complex64], r: usize, v: &DVector<Complex64>) {
        for (p, x) in v.iter().enumerate() {
            out[r + p * self.m] = *x;
        }
    }

    pub fn apply(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        if f.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for an operator on C^{}",
                f.len(),
                self.len()
            )));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); f.len()];
        for (r, block) in self.blocks.iter().enumerate() {
            let y = block * self.gather(f, r);
            self.scatter(&mut out, r, &y);
        }
        Ok(out)
    }

    /// Block-wise product; both operators must share the residue structure.
    pub fn mul(&self, other: &FrameOperator) -> Result<FrameOperator> {
        if self.m != other.m || self.block_size() != other.block_size() {
            return Err(Error::DimensionMismatch("operators with different block structure".into()));
        }
        Ok(Self::from_blocks(
            self.m,
            self.blocks.iter().zip(&other.blocks).map(|(x, y)| x * y).collect(),
        ))
    }

    /// Dense `K × K` matrix.
    pub fn to_dense(&self) -> ComplexMatrix {
        let len = self.len();
        let mut dense = DMatrix::<Complex64>::zeros(len, len);
        let b = self.block_size();
        for (r, block) in self.blocks.iter().enumerate() {
            for p in 0..b {
                for q in 0..b {
                    dense[(r + p * self.m, r + q * self.m)] = block[(p, q)];
                }
            }
        }
        ComplexMatrix::from_matrix(dense)
    }

    /// All eigenvalues in ascending order, from the blocks.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let mut ev = Vec::with_capacity(self.len());
        for block in &self.blocks {
            ev.extend(hermitian_eigenvalues(&ComplexMatrix::from_matrix(block.clone()))?);
        }
        ev.sort_by(|x, y| x.total_cmp(y));
        Ok(ev)
    }

    /// Optimal frame bounds `(λ_min, λ_max)`.
    pub fn bounds(&self) -> Result<(f64, f64)> {
        let ev = self.eigenvalues()?;
        Ok((ev[0], ev[ev.len() - 1]))
    }

    /// Largest eigenvalue by power iteration, stopped when successive
    /// Rayleigh quotients agree to `rel_tol` or after `max_iter` steps.
    pub fn max_eigenvalue(&self, rel_tol: f64, max_iter: usize) -> f64 {
        power_iteration(self.len(), |v| self.apply(v).expect("length matches"), rel_tol, max_iter)
    }

    /// `S⁻¹ y` through a Cholesky solve per block.
    pub fn solve(&self, y: &[Complex64]) -> Result<Vec<Complex64>> {
        if y.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for an operator on C^{}",
                y.len(),
                self.len()
            )));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); y.len()];
        for (r, block) in self.blocks.iter().enumerate() {
            let rhs: Vec<Complex64> = self.gather(y, r).iter().copied().collect();
            let x = solve_spd(&ComplexMatrix::from_matrix(block.clone()), &rhs).map_err(|e| match e {
                Error::NotPositiveDefinite => {
                    Error::NotAFrame(format!("frame operator block {r} is singular"))
                }
                other => other,
            })?;
            self.scatter(&mut out, r, &DVector::from_vec(x));
        }
        Ok(out)
    }
}

/// Deterministic, generic start vector for power iterations.
pub(crate) fn start_vector(len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|i| {
            let t = i as f64;
            Complex64::new(1.0 + 0.5 * (0.7 * t + 0.3).sin(), 0.25 * (1.3 * t).cos())
        })
        .collect()
}

pub(crate) fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest eigenvalue of a Hermitian positive semidefinite operator.
pub(crate) fn power_iteration(
    len: usize,
    apply: impl Fn(&[Complex64]) -> Vec<Complex64>,
    rel_tol: f64,
    max_iter: usize,
) -> f64 {
    let mut v = start_vector(len);
    let n0 = norm(&v);
    v.iter_mut().for_each(|x| *x /= n0);
    let mut estimate = 0.0;
    for _ in 0..max_iter {
        let w = apply(&v);
        let rayleigh: f64 = v.iter().zip(&w).map(|(a, b)| (a.conj() * b).re).sum();
        let nw = norm(&w);
        if nw == 0.0 {
            return 0.0;
        }
        v = w.into_iter().map(|x| x / nw).collect();
        if (rayleigh - estimate).abs() <= rel_tol * rayleigh.abs() {
            return rayleigh.max(estimate);
        }
        estimate = rayleigh;
    }
    estimate
}
