use num_complex::Complex64;
use std::f64::consts::PI;

use crate::{Error, Result};

/// Totally positive window of finite type.
///
/// The window `g` is determined by its Fourier transform
/// `ĝ(ω) = Π_ν (1 + 2πi δ_ν ω)^{-1}`; equivalently it is the convolution of
/// the one-sided exponentials `g_δ(x) = |δ|^{-1} e^{-x/δ} χ_(0,∞)(δx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TpWindow {
    deltas: Vec<f64>,
    // ascending copy; equal weights are contiguous
    sorted: Vec<f64>,
    positive: usize,
    negative: usize,
}

impl TpWindow {
    pub fn new(deltas: Vec<f64>) -> Result<Self> {
        if deltas.is_empty() {
            return Err(Error::InvalidParameter(
                "a TP window needs at least one weight".into(),
            ));
        }
        if let Some(d) = deltas.iter().find(|d| **d == 0.0 || !d.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "TP weights must be finite and nonzero, got {d}"
            )));
        }
        let mut sorted = deltas.clone();
        sorted.sort_by(|a, b| a.total_cmp(b));
        let positive = deltas.iter().filter(|d| **d > 0.0).count();
        Ok(Self {
            negative: deltas.len() - positive,
            deltas,
            sorted,
            positive,
        })
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    /// Number of weights `N = m + n`.
    pub fn order(&self) -> usize {
        self.deltas.len()
    }

    /// Number of positive weights (`m`).
    pub fn positive_count(&self) -> usize {
        self.positive
    }

    /// Number of negative weights (`n`).
    pub fn negative_count(&self) -> usize {
        self.negative
    }

    /// True when the weights are pairwise distinct.
    pub fn is_simple(&self) -> bool {
        self.sorted.windows(2).all(|w| w[0] != w[1])
    }

    /// Even windows have `{δ > 0} = {-δ : δ < 0}` as multisets.
    pub fn is_even(&self) -> bool {
        let mut pos: Vec<f64> = self.sorted.iter().copied().filter(|d| *d > 0.0).collect();
        let mut neg: Vec<f64> = self.sorted.iter().filter(|d| **d < 0.0).map(|d| -d).collect();
        pos.sort_by(|a, b| a.total_cmp(b));
        neg.sort_by(|a, b| a.total_cmp(b));
        pos == neg
    }

    /// `g_Δ(x)`.
    ///
    /// Uses the two-term recurrence on the outermost distinct pair of the
    /// sorted weights and the closed form for equal weights; a single
    /// one-sided exponential takes the value `1/(2|δ|)` at the origin.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.sorted.len();
        let mut memo = vec![f64::NAN; n * n];
        self.eval_range(0, n - 1, x, &mut memo).max(0.0)
    }

    fn eval_range(&self, i: usize, j: usize, x: f64, memo: &mut [f64]) -> f64 {
        let n = self.sorted.len();
        let slot = i * n + j;
        if !memo[slot].is_nan() {
            return memo[slot];
        }
        let (lo, hi) = (self.sorted[i], self.sorted[j]);
        let v = if lo == hi {
            equal_weights(lo, j - i + 1, x)
        } else {
            let (a, b) = (1.0 / lo, 1.0 / hi);
            let drop_first = self.eval_range(i + 1, j, x, memo);
            let drop_last = self.eval_range(i, j - 1, x, memo);
            (a * drop_first - b * drop_last) / (a - b)
        };
        memo[slot] = v;
        v
    }

    /// Fourier transform `ĝ(ω) = Π (1 + 2πiδω)^{-1}`.
    pub fn fourier(&self, omega: f64) -> Complex64 {
        self.deltas
            .iter()
            .map(|d| Complex64::new(1.0, 2.0 * PI * d * omega).inv())
            .product()
    }

    /// Weights of `h·g(h·)`, which is again TP with weights `δ/h`.
    pub fn dilate(&self, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "dilation factor must be positive, got {h}"
            )));
        }
        Self::new(self.deltas.iter().map(|d| d / h).collect())
    }

    /// `τ = (max_ν 2π|δ_ν|)^{-1}`: for every `ε > 0` the window is bounded by
    /// `c(ε) e^{-(τ-ε)|x|}`.
    pub fn decay_rate(&self) -> f64 {
        let max = self.deltas.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        1.0 / (2.0 * PI * max)
    }

    /// Estimate of `c(ε)` in the decay bound for `ε = τ/10`, from a sweep of
    /// `g(x) e^{(τ-ε)|x|}` on a uniform grid. Heuristic: the grid maximum is
    /// inflated by 50%.
    pub fn decay_constant(&self) -> f64 {
        let rate = 0.9 * self.decay_rate();
        let max_abs = self.deltas.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        let min_abs = self.deltas.iter().fold(f64::INFINITY, |m, d| m.min(d.abs()));
        let reach = 60.0 * max_abs * self.order() as f64;
        let step = (min_abs / 8.0).min(reach / 2000.0);
        let count = (2.0 * reach / step).ceil() as usize;
        let peak = (0..=count)
            .map(|i| {
                let x = -reach + i as f64 * step;
                self.eval(x) * (rate * x.abs()).exp()
            })
            .fold(0.0f64, f64::max);
        1.5 * peak
    }
}

/// `|x|^{N-1} / (|δ|^N (N-1)!) e^{-x/δ} χ_(0,∞)(δx)`, with the midpoint value
/// `1/(2|δ|)` at the jump when `N = 1`.
fn equal_weights(delta: f64, count: usize, x: f64) -> f64 {
    if x == 0.0 {
        return if count == 1 { 0.5 / delta.abs() } else { 0.0 };
    }
    if delta * x < 0.0 {
        return 0.0;
    }
    let k = (count - 1) as f64;
    let log_fact: f64 = (2..count).map(|i| (i as f64).ln()).sum();
    let log = k * x.abs().ln() - count as f64 * delta.abs().ln() - log_fact - x / delta;
    log.exp()
}
