//! Discrete Gabor systems on `C^K` obtained by dilating, sampling and
//! periodizing continuous windows.
//!
//! A continuous pair on the lattice `αℤ × βℤ` is dilated so that the sampling
//! step `α/a` becomes 1: the discrete time step is `a` samples and the number
//! of channels is `M = a/(αβ)`. Both window and dual are sampled with the
//! weight `√(α/a)`, which makes the discrete pair dual for the grid
//! `(K, a, M)` whenever the continuous pair satisfies the Wexler–Raz
//! relations.

mod dgt;
mod frame;

pub use dgt::DgtCoefficients;
pub use frame::FrameOperator;
pub(crate) use frame::{norm, power_iteration};

use num_complex::Complex64;

use crate::dual::{DualSamples, Lattice};
use crate::linalg::{sigma_extremes, ComplexMatrix};
use crate::windows::{zak_tp_via_ebspline, Window};
use crate::{Error, Result};

/// Signal length `K`, time step `a` and channel count `M` of a discrete
/// Gabor system; `N = K/a` time positions, `b = K/M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaborGrid {
    len: usize,
    a: usize,
    m: usize,
}

impl GaborGrid {
    pub fn new(len: usize, a: usize, m: usize) -> Result<Self> {
        if len == 0 || a == 0 || m == 0 {
            return Err(Error::InvalidParameter(format!(
                "K, a and M must be positive (K={len}, a={a}, M={m})"
            )));
        }
        if !len.is_multiple_of(a) || !len.is_multiple_of(m) {
            return Err(Error::InvalidParameter(format!(
                "a = {a} and M = {m} must both divide K = {len}"
            )));
        }
        Ok(Self { len, a, m })
    }

    /// Grid matching a continuous lattice sampled at step `α/a`:
    /// `M = a/(αβ)` must be an integer.
    pub fn for_lattice(lat: &Lattice, a: usize, len: usize) -> Result<Self> {
        let m = a as f64 / lat.density();
        let rounded = m.round();
        if rounded < 1.0 || (m - rounded).abs() > 1e-9 * m {
            return Err(Error::InvalidParameter(format!(
                "a/(alpha*beta) = {m} is not an integer channel count"
            )));
        }
        Self::new(len, a, rounded as usize)
    }

    /// `K`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of time positions `K/a`.
    pub fn n(&self) -> usize {
        self.len / self.a
    }

    /// `K/M`, the block size of the frame operator.
    pub fn b(&self) -> usize {
        self.len / self.m
    }

    /// `M/a`.
    pub fn redundancy(&self) -> f64 {
        self.m as f64 / self.a as f64
    }
}

/// A grid together with its window vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteGaborSystem {
    grid: GaborGrid,
    window: Vec<Complex64>,
}

impl DiscreteGaborSystem {
    pub fn new(grid: GaborGrid, window: Vec<Complex64>) -> Result<Self> {
        if window.len() != grid.len() {
            return Err(Error::DimensionMismatch(format!(
                "window has length {}, expected K = {}",
                window.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, window })
    }

    pub fn grid(&self) -> &GaborGrid {
        &self.grid
    }

    pub fn window(&self) -> &[Complex64] {
        &self.window
    }

    pub fn dgt(&self, f: &[Complex64]) -> Result<DgtCoefficients> {
        self.grid.dgt(f, &self.window)
    }

    pub fn idgt(&self, c: &DgtCoefficients, gamma: &[Complex64]) -> Result<Vec<Complex64>> {
        self.grid.idgt(c, gamma)
    }

    pub fn frame_operator(&self) -> FrameOperator {
        FrameOperator::new(&self.grid, &self.window).expect("window length checked on construction")
    }

    /// `γ° = S⁻¹ g`.
    pub fn canonical_dual(&self) -> Result<Vec<Complex64>> {
        self.frame_operator().solve(&self.window)
    }
}

/// Analysis operator `C_g f` of the system.
pub fn dgt(f: &[Complex64], sys: &DiscreteGaborSystem) -> Result<DgtCoefficients> {
    sys.dgt(f)
}

/// Synthesis `Σ_{k,l} c[l][k] M_{l/M} T_{ka} γ`.
pub fn idgt(c: &DgtCoefficients, gamma: &[Complex64], sys: &DiscreteGaborSystem) -> Result<Vec<Complex64>> {
    sys.idgt(c, gamma)
}

/// Dense `K × K` matrix of the frame operator.
pub fn frame_operator_matrix(sys: &DiscreteGaborSystem) -> ComplexMatrix {
    sys.frame_operator().to_dense()
}

/// Canonical dual `S⁻¹ g`; fails with [`Error::NotAFrame`] if `S` is singular.
pub fn discrete_canonical_dual(sys: &DiscreteGaborSystem) -> Result<Vec<Complex64>> {
    sys.canonical_dual()
}

/// `out[j] = Σ_k values[j + Kk]` for a sequence whose first entry has index
/// `first`.
pub fn periodize<T>(first: i64, values: &[T], len: usize) -> Result<Vec<T>>
where
    T: Copy + Default + std::ops::AddAssign,
{
    if len == 0 {
        return Err(Error::InvalidParameter("period K must be positive".into()));
    }
    let mut out = vec![T::default(); len];
    for (i, v) in values.iter().enumerate() {
        let idx = (first + i as i64).rem_euclid(len as i64) as usize;
        out[idx] += *v;
    }
    Ok(out)
}

/// `√h Σ_j g(h(k + jK))` for `k = 0..K` with `h = α/a`: the dilated window
/// sampled at the integers and periodized with period `K`.
///
/// TP windows go through the EB-spline form of the Zak transform; EB-splines
/// and Gaussians are summed directly over their (numerical) support.
pub fn discretize_window(window: &Window, alpha: f64, a: usize, len: usize) -> Result<Vec<Complex64>> {
    if !(alpha > 0.0 && alpha.is_finite()) || a == 0 || len == 0 {
        return Err(Error::InvalidParameter(format!(
            "need alpha > 0, a >= 1 and K >= 1 (alpha={alpha}, a={a}, K={len})"
        )));
    }
    let h = alpha / a as f64;
    let weight = h.sqrt();
    let kf = len as f64;
    let (lo, hi) = match window {
        Window::Tp(w) => {
            return (0..len)
                .map(|k| zak_tp_via_ebspline(w, h, len, k as f64).map(|z| Complex64::new(z / weight, 0.0)))
                .collect();
        }
        Window::Eb(w) => (0.0, w.order() as f64),
        Window::Gauss(w) => {
            let r = w.radius(1e-18);
            (-r, r)
        }
    };
    Ok((0..len)
        .map(|k| {
            let k = k as f64;
            let j_lo = ((lo / h - k) / kf).floor() as i64 - 1;
            let j_hi = ((hi / h - k) / kf).ceil() as i64 + 1;
            let sum: f64 = (j_lo..=j_hi).map(|j| window.eval(h * (k + j as f64 * kf))).sum();
            Complex64::new(weight * sum, 0.0)
        })
        .collect())
}

/// Periodized samples `√(α/a) Σ_j γ((k + jK)α/a)` of a finitely supported
/// dual, with the same weight as [`discretize_window`]. Supports longer than
/// `K` wrap around, which is valid but logged.
pub fn discretize_dual(dual: &DualSamples, len: usize) -> Result<Vec<Complex64>> {
    if dual.values.len() > len {
        log::warn!(
            "dual support of {} samples exceeds K = {len}; periodization wraps around",
            dual.values.len()
        );
    }
    let weight = dual.step().sqrt();
    let weighted: Vec<Complex64> = dual.values.iter().map(|v| Complex64::new(weight * v, 0.0)).collect();
    periodize(dual.first, &weighted, len)
}

/// Whether the `K` vectors `M_{l/M} T_{kM} g`, `0 ≤ k < K/M`, `0 ≤ l < M`,
/// form a basis of `C^K`: `σ_min > K ε σ_max` for the synthesis matrix.
pub fn critical_basis_check(g: &[Complex64], m: usize) -> Result<bool> {
    let len = g.len();
    let grid = GaborGrid::new(len, m, m)?;
    let synthesis = ComplexMatrix::from_fn(len, len, |n, col| {
        let (k, l) = (col / m, col % m);
        let phase = 2.0 * std::f64::consts::PI * ((l * n) % m) as f64 / m as f64;
        Complex64::from_polar(1.0, phase) * g[(n + len - (k * grid.a()) % len) % len]
    });
    let (lo, hi) = sigma_extremes(&synthesis)?;
    Ok(hi > 0.0 && lo > len as f64 * f64::EPSILON * hi)
}
