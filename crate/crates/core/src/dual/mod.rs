//! Compactly supported dual windows from finite sections of the pre-Gramian
//! `P(x) = (g(x + αj - k/β))_{j,k}`.
//!
//! For a point `x` the section `P_L(x)` has columns `k1(L)..=k2(L)` and rows
//! `i1(L)..=i2(L)`; the dual values `γ_L(x + αj)` are `β` times the row `k = 0`
//! of its pseudoinverse. Rows are chosen so that every column outside the
//! section is either zero on the rows or (for TP windows) lies in the span of
//! the boundary columns, which makes `γ_L` an exact dual window for every `L`.

mod study;

pub use study::{
    canonical_dual_ref, dual_convergence, frame_bounds, inverse_gram_decay, linear_fit,
    schur_bound,
    ConvergenceStudy, FrameBoundEstimate,
};

use num_rational::Ratio;

use crate::linalg::{pinv_full, RealMatrix};
use crate::rational::{self, Q};
use crate::windows::{EbSpline, TpWindow, Window};
use crate::{Error, Result};

/// Time step `α` and frequency step `β` of a separable lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    alpha: f64,
    beta: f64,
    exact: Option<(Q, Q)>,
}

impl Lattice {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite() && beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "lattice steps must be positive, got alpha={alpha}, beta={beta}"
            )));
        }
        let exact = rational::rationalize(alpha).zip(rational::rationalize(beta));
        Ok(Self { alpha, beta, exact })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `αβ`; the inverse redundancy.
    pub fn density(&self) -> f64 {
        self.alpha * self.beta
    }

    fn exact_density(&self) -> Option<Q> {
        self.exact.map(|(a, b)| a * b)
    }

    fn check_density(&self) -> Result<()> {
        if self.density() < 1.0 {
            Ok(())
        } else {
            Err(Error::Density(self.density()))
        }
    }

    /// `x/α` as an exact fraction when both are rational.
    fn exact_fraction(&self, x: f64) -> Option<Q> {
        self.exact?;
        rational::rationalize(x / self.alpha)
    }

    /// `x + αj - k/β`, computed exactly when possible so that points which
    /// are exact knots come out as exact floats.
    fn section_point(&self, x: f64, frac: Option<Q>, j: i64, k: i64) -> f64 {
        if let (Some((a, b)), Some(f)) = (self.exact, frac) {
            let y = a * (f + Q::from_integer(j as i128)) - Q::from_integer(k as i128) / b;
            return *y.numer() as f64 / *y.denom() as f64;
        }
        x + self.alpha * j as f64 - k as f64 / self.beta
    }
}

/// Index window of a finite pre-Gramian section.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectionIndices {
    pub l: usize,
    pub k1: i64,
    pub k2: i64,
    pub i1: i64,
    pub i2: i64,
}

impl SectionIndices {
    pub fn rows(&self) -> usize {
        (self.i2 - self.i1 + 1).max(0) as usize
    }

    pub fn cols(&self) -> usize {
        (self.k2 - self.k1 + 1).max(0) as usize
    }

    fn validate(&self) -> Result<()> {
        if self.k1 > 0 || self.k2 < 0 || self.i1 > self.i2 || self.rows() < self.cols() {
            return Err(Error::InvalidParameter(format!(
                "section indices {self:?} do not describe a tall section containing column 0"
            )));
        }
        Ok(())
    }
}

fn int(v: i64) -> Q {
    Ratio::from_integer(v as i128)
}

/// Section indices for a TP window of finite type with `m` positive and `n`
/// negative weights:
/// `r = ⌊1/(1-αβ)⌋`, `k1(L) = -(r+1)m - L`, `k2(L) = (r+1)n + L`,
/// `i1(L) = ⌊(k1(L)+m-1)/(αβ) - x/α⌋ + 1`,
/// `i2(L) = ⌈(k2(L)-n+1)/(αβ) - x/α⌉ - 1`.
pub fn tp_section_indices(w: &TpWindow, lat: &Lattice, l: usize, x: f64) -> Result<SectionIndices> {
    let frac = lat.exact_fraction(x);
    tp_indices(w, lat, l, x, frac)
}

fn tp_indices(w: &TpWindow, lat: &Lattice, l: usize, x: f64, frac: Option<Q>) -> Result<SectionIndices> {
    lat.check_density()?;
    if !(0.0..lat.alpha).contains(&x) {
        return Err(Error::Domain(format!("x = {x} must lie in [0, {})", lat.alpha)));
    }
    let ab = lat.density();
    let ab_q = lat.exact_density();
    let r = rational::floor(ab_q.map(|q| Q::from_integer(1) / (Q::from_integer(1) - q)), 1.0 / (1.0 - ab));
    let (m, n) = (w.positive_count() as i64, w.negative_count() as i64);
    let l = l as i64;
    let k1 = -(r + 1) * m - l;
    let k2 = (r + 1) * n + l;
    let xa = x / lat.alpha;
    let both = ab_q.zip(frac);
    let i1 = rational::floor(
        both.map(|(ab, f)| int(k1 + m - 1) / ab - f),
        (k1 + m - 1) as f64 / ab - xa,
    ) + 1;
    let i2 = rational::ceil(
        both.map(|(ab, f)| int(k2 - n + 1) / ab - f),
        (k2 - n + 1) as f64 / ab - xa,
    ) - 1;
    Ok(SectionIndices { l: l as usize, k1, k2, i1, i2 })
}

/// Admissible offsets `[(N-α)/2, (N+α)/2)` for EB-spline sections.
pub fn eb_offset_window(w: &EbSpline, lat: &Lattice) -> (f64, f64) {
    let n = w.order() as f64;
    ((n - lat.alpha) / 2.0, (n + lat.alpha) / 2.0)
}

/// Section indices for an EB-spline: `k2(L) = ⌊(Nβ+αβ)/(2(1-αβ))⌋ + 1 + L`,
/// `k1(L) = -k2(L)`, and the row range is the exact solution of the four
/// zero/nonzero conditions through the support of `B_Λ`.
pub fn eb_section_indices(w: &EbSpline, lat: &Lattice, l: usize, x: f64) -> Result<SectionIndices> {
    let frac = lat.exact_fraction(x);
    eb_indices(w, lat, l, x, frac)
}

fn eb_indices(w: &EbSpline, lat: &Lattice, l: usize, x: f64, frac: Option<Q>) -> Result<SectionIndices> {
    lat.check_density()?;
    let (lo, hi) = eb_offset_window(w, lat);
    if !(lo..hi).contains(&x) {
        return Err(Error::Domain(format!("x = {x} must lie in [{lo}, {hi})")));
    }
    let n = w.order() as i64;
    let (alpha, beta) = (lat.alpha, lat.beta);
    let ab = lat.density();
    let k2 = rational::floor(
        lat.exact.map(|(a, b)| (int(n) * b + a * b) / (int(2) * (int(1) - a * b))),
        (n as f64 * beta + ab) / (2.0 * (1.0 - ab)),
    ) + 1
        + l as i64;
    let k1 = -k2;
    let exact = lat.exact.zip(frac);
    // first row whose point for column k1-1 has left the support: y >= N
    let i1 = rational::ceil(
        exact.map(|((a, b), f)| int(n) / a + int(k1 - 1) / (a * b) - f),
        n as f64 / alpha + (k1 - 1) as f64 / ab - x / alpha,
    );
    // last row whose point for column k2+1 is still left of the support
    let arg_q = exact.map(|((a, b), f)| int(k2 + 1) / (a * b) - f);
    let arg = (k2 + 1) as f64 / ab - x / alpha;
    let i2 = if n == 1 {
        // the box is nonzero at 0, so the condition is y < 0
        rational::ceil(arg_q, arg) - 1
    } else {
        rational::floor(arg_q, arg)
    };
    Ok(SectionIndices { l, k1, k2, i1, i2 })
}

fn indices_for(window: &Window, lat: &Lattice, l: usize, x: f64, frac: Option<Q>) -> Result<SectionIndices> {
    match window {
        Window::Tp(w) => tp_indices(w, lat, l, x, frac),
        Window::Eb(w) => eb_indices(w, lat, l, x, frac),
        Window::Gauss(_) => Err(Error::UnsupportedWindow(
            "compactly supported duals need a TP window or an EB-spline".into(),
        )),
    }
}

/// Section indices for either window family.
pub fn section_indices(window: &Window, lat: &Lattice, l: usize, x: f64) -> Result<SectionIndices> {
    indices_for(window, lat, l, x, lat.exact_fraction(x))
}

/// The finite section `p_{j,k} = g(x + αj - k/β)` with logical row indices
/// `i1..=i2` and column indices `k1..=k2`.
pub fn build_section(window: &Window, lat: &Lattice, x: f64, idx: &SectionIndices) -> RealMatrix {
    build_section_frac(window, lat, x, lat.exact_fraction(x), idx)
}

fn build_section_frac(window: &Window, lat: &Lattice, x: f64, frac: Option<Q>, idx: &SectionIndices) -> RealMatrix {
    RealMatrix::from_fn(idx.rows(), idx.cols(), |r, c| {
        let j = idx.i1 + r as i64;
        let k = idx.k1 + c as i64;
        window.eval(lat.section_point(x, frac, j, k))
    })
    .with_offsets(idx.i1, idx.k1)
}

/// Values `γ_L(x + αj)` for `i1 ≤ j ≤ i2` at one offset `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledDual {
    pub x: f64,
    pub i1: i64,
    pub i2: i64,
    pub l: usize,
    pub values: Vec<f64>,
    pub lattice: Lattice,
}

impl SampledDual {
    /// `γ_L(x + αj)`, zero outside `[i1, i2]`.
    pub fn value(&self, j: i64) -> f64 {
        if j < self.i1 || j > self.i2 {
            0.0
        } else {
            self.values[(j - self.i1) as usize]
        }
    }
}

/// Relative cutoff for section pseudoinverses.
pub fn section_rcond(idx: &SectionIndices) -> f64 {
    1e-13 * idx.rows().max(idx.cols()) as f64
}

/// Dual values at one offset: `β` times row `k = 0` of `P_L(x)^†`.
pub fn dual_slice(window: &Window, lat: &Lattice, x: f64, l: usize) -> Result<SampledDual> {
    let frac = lat.exact_fraction(x);
    let idx = indices_for(window, lat, l, x, frac)?;
    slice_from(window, lat, x, frac, idx)
}

/// Like [`dual_slice`] but with caller-chosen section indices.
pub fn dual_slice_with_indices(window: &Window, lat: &Lattice, x: f64, idx: SectionIndices) -> Result<SampledDual> {
    slice_from(window, lat, x, lat.exact_fraction(x), idx)
}

fn slice_from(window: &Window, lat: &Lattice, x: f64, frac: Option<Q>, idx: SectionIndices) -> Result<SampledDual> {
    idx.validate()?;
    let section = build_section_frac(window, lat, x, frac, &idx);
    let rcond = section_rcond(&idx);
    let p = pinv_full(&section, rcond)?;
    if p.rank < idx.cols() || p.sigma_min < rcond * p.sigma_max {
        return Err(Error::RankDeficient {
            sigma_min: p.sigma_min,
            sigma_max: p.sigma_max,
        });
    }
    let row = p.matrix.row(0).expect("column 0 lies inside the section");
    Ok(SampledDual {
        x,
        i1: idx.i1,
        i2: idx.i2,
        l: idx.l,
        values: row.into_iter().map(|q| lat.beta * q).collect(),
        lattice: lat.clone(),
    })
}

/// Samples `γ(qα/a)` of a finitely supported window on the grid `(α/a)ℤ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualSamples {
    pub alpha: f64,
    pub beta: f64,
    pub a: usize,
    pub l: usize,
    /// Grid index `q` of `values[0]`.
    pub first: i64,
    pub values: Vec<f64>,
}

impl DualSamples {
    pub fn step(&self) -> f64 {
        self.alpha / self.a as f64
    }

    pub fn last(&self) -> i64 {
        self.first + self.values.len() as i64 - 1
    }

    /// `γ(qα/a)`, zero off the stored range.
    pub fn get(&self, q: i64) -> f64 {
        if q < self.first || q > self.last() {
            0.0
        } else {
            self.values[(q - self.first) as usize]
        }
    }

    /// Discrete `ℓ²` distance scaled by `√(α/a)`, approximating the `L²`
    /// distance of the underlying functions.
    pub fn distance(&self, other: &DualSamples) -> f64 {
        let lo = self.first.min(other.first);
        let hi = self.last().max(other.last());
        let sum: f64 = (lo..=hi).map(|q| (self.get(q) - other.get(q)).powi(2)).sum();
        (sum * self.step()).sqrt()
    }

    pub fn norm(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() * self.step()).sqrt()
    }
}

/// Offset `x_p = pα/a` moved into the admissible range of the window family,
/// together with the whole-period shift `s` (`x = x_p + sα`).
fn offset_for(window: &Window, lat: &Lattice, p: usize, a: usize) -> (f64, Option<Q>, i64) {
    let base = Q::new(p as i128, a as i128);
    let shift = match window {
        Window::Eb(w) => {
            let n = w.order() as f64;
            // smallest s with pα/a + sα >= (N-α)/2
            rational::ceil(
                lat.exact.map(|(al, _)| (int(n as i64) / al - int(1)) / int(2) - base),
                (n / lat.alpha - 1.0) / 2.0 - p as f64 / a as f64,
            )
        }
        _ => 0,
    };
    let frac = base + int(shift);
    let x = lat.alpha * (p as f64 / a as f64 + shift as f64);
    (x, lat.exact.map(|_| frac), shift)
}

/// Assembles the slices at `x_p = pα/a`, `p = 0..a`, into one finitely
/// supported sample sequence `γ_L(qα/a)`.
pub fn dual_sampled(window: &Window, lat: &Lattice, l: usize, a: usize) -> Result<DualSamples> {
    if a == 0 {
        return Err(Error::InvalidParameter("sampling factor a must be at least 1".into()));
    }
    let mut entries: Vec<(i64, f64)> = Vec::new();
    for p in 0..a {
        let (x, frac, shift) = offset_for(window, lat, p, a);
        let idx = indices_for(window, lat, l, x, frac)?;
        let slice = slice_from(window, lat, x, frac, idx)?;
        for (offset, v) in slice.values.iter().enumerate() {
            let j = slice.i1 + offset as i64 + shift;
            entries.push((a as i64 * j + p as i64, *v));
        }
    }
    let first = entries.iter().map(|e| e.0).min().expect("a >= 1");
    let last = entries.iter().map(|e| e.0).max().expect("a >= 1");
    let mut values = vec![0.0; (last - first + 1) as usize];
    for (q, v) in entries {
        values[(q - first) as usize] = v;
    }
    Ok(DualSamples {
        alpha: lat.alpha,
        beta: lat.beta,
        a,
        l,
        first,
        values,
    })
}

/// Result of a Wexler–Raz check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WexlerRaz {
    /// `max |Σ_j γ(x+jα) g(x+jα-k/β) - β δ_{0,k}|` over offsets and `|k| ≤ kmax`.
    pub residual: f64,
    /// Largest `|k|` tested; beyond it the window is negligible on the dual's support.
    pub kmax: i64,
    pub worst_k: i64,
}

/// Radius of the numerical support of `g`: `[lo, hi]` beyond which it is
/// below `1e-18` of its scale.
pub(crate) fn effective_support(window: &Window) -> (f64, f64) {
    match window {
        Window::Eb(w) => (0.0, w.order() as f64),
        Window::Gauss(w) => {
            let r = w.radius(1e-18);
            (-r, r)
        }
        Window::Tp(w) => {
            // g decays at least like e^{-|x|/max|δ|} times a polynomial
            let max_abs = w.deltas().iter().fold(0.0f64, |m, d| m.max(d.abs()));
            let r = max_abs * (45.0 + 4.0 * w.order() as f64);
            let lo = if w.negative_count() > 0 { -r } else { 0.0 };
            let hi = if w.positive_count() > 0 { r } else { 0.0 };
            (lo, hi)
        }
    }
}

fn default_kmax(window: &Window, lat: &Lattice, t_min: f64, t_max: f64) -> i64 {
    let (lo, hi) = effective_support(window);
    // x + jα - k/β ∈ [lo, hi] for some sample t = x + jα
    let k_lo = (t_min - hi) * lat.beta;
    let k_hi = (t_max - lo) * lat.beta;
    (k_lo.abs().max(k_hi.abs())).ceil() as i64 + 1
}

fn residual_at(
    window: &Window,
    lat: &Lattice,
    x: f64,
    frac: Option<Q>,
    terms: &[(i64, f64)],
    kmax: i64,
) -> (f64, i64) {
    let mut worst = (0.0, 0);
    for k in -kmax..=kmax {
        let sum: f64 = terms
            .iter()
            .map(|&(j, v)| v * window.eval(lat.section_point(x, frac, j, k)))
            .sum();
        let target = if k == 0 { lat.beta } else { 0.0 };
        let err = (sum - target).abs();
        if err > worst.0 {
            worst = (err, k);
        }
    }
    worst
}

/// Wexler–Raz residual of a sampled dual at every offset `pα/a`.
pub fn wexler_raz_residual(window: &Window, dual: &DualSamples, lat: &Lattice, kmax: Option<i64>) -> WexlerRaz {
    let a = dual.a as i64;
    let kmax = kmax.unwrap_or_else(|| {
        default_kmax(window, lat, dual.first as f64 * dual.step(), dual.last() as f64 * dual.step())
    });
    let mut report = WexlerRaz { residual: 0.0, kmax, worst_k: 0 };
    for p in 0..a {
        let x = lat.alpha * p as f64 / a as f64;
        let frac = lat.exact.map(|_| Q::new(p as i128, a as i128));
        let terms: Vec<(i64, f64)> = (dual.first..=dual.last())
            .filter(|q| (q - p).rem_euclid(a) == 0)
            .map(|q| ((q - p).div_euclid(a), dual.get(q)))
            .filter(|(_, v)| *v != 0.0)
            .collect();
        let (err, k) = residual_at(window, lat, x, frac, &terms, kmax);
        if err > report.residual {
            report.residual = err;
            report.worst_k = k;
        }
    }
    report
}

/// Wexler–Raz residual of a single slice at its own offset.
pub fn slice_residual(window: &Window, slice: &SampledDual, kmax: Option<i64>) -> WexlerRaz {
    let lat = &slice.lattice;
    let t_min = slice.x + lat.alpha * slice.i1 as f64;
    let t_max = slice.x + lat.alpha * slice.i2 as f64;
    let kmax = kmax.unwrap_or_else(|| default_kmax(window, lat, t_min, t_max));
    let terms: Vec<(i64, f64)> = (slice.i1..=slice.i2).map(|j| (j, slice.value(j))).collect();
    let (residual, worst_k) = residual_at(window, lat, slice.x, lat.exact_fraction(slice.x), &terms, kmax);
    WexlerRaz { residual, kmax, worst_k }
}
