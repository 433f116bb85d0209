use num_complex::Complex64;
use rustfft::FftPlanner;

use super::GaborGrid;
use crate::{Error, Result};

/// Coefficients `c[l][k] = ⟨f, M_{l/M} T_{ka} g⟩` on an `M × N` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DgtCoefficients {
    m: usize,
    n: usize,
    /// Row-major in `l`, i.e. `data[l * n + k]`.
    data: Vec<Complex64>,
}

impl DgtCoefficients {
    pub fn zeros(m: usize, n: usize) -> Self {
        Self {
            m,
            n,
            data: vec![Complex64::new(0.0, 0.0); m * n],
        }
    }

    pub fn from_vec(m: usize, n: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != m * n {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a {m}x{n} grid",
                data.len()
            )));
        }
        Ok(Self { m, n, data })
    }

    /// Number of modulation channels `M`.
    pub fn channels(&self) -> usize {
        self.m
    }

    /// Number of time positions `N = K/a`.
    pub fn positions(&self) -> usize {
        self.n
    }

    pub fn get(&self, l: usize, k: usize) -> Complex64 {
        self.data[l * self.n + k]
    }

    pub fn set(&mut self, l: usize, k: usize, v: Complex64) {
        self.data[l * self.n + k] = v;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Squared Frobenius norm `Σ |c[l][k]|²`.
    pub fn energy(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }
}

impl GaborGrid {
    fn check_len(&self, what: &str, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "{what} has length {len}, expected K = {}",
                self.len()
            )));
        }
        Ok(())
    }

    /// Analysis with window `g`:
    /// `c[l][k] = Σ_n f[n] conj(g[n - ka]) e^{-2πi l n/M}`.
    ///
    /// For each time position the products are folded modulo `M` and
    /// transformed with one FFT of length `M`.
    pub fn dgt(&self, f: &[Complex64], g: &[Complex64]) -> Result<DgtCoefficients> {
        self.check_len("signal", f.len())?;
        self.check_len("window", g.len())?;
        let (len, a, m, n) = (self.len(), self.a(), self.m(), self.n());
        let fft = FftPlanner::new().plan_fft_forward(m);
        let mut out = DgtCoefficients::zeros(m, n);
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for k in 0..n {
            buf.iter_mut().for_each(|b| *b = Complex64::new(0.0, 0.0));
            let shift = k * a;
            for (idx, fv) in f.iter().enumerate() {
                let gv = g[(idx + len - shift) % len];
                buf[idx % m] += fv * gv.conj();
            }
            fft.process(&mut buf);
            for (l, v) in buf.iter().enumerate() {
                out.set(l, k, *v);
            }
        }
        Ok(out)
    }

    /// Synthesis with window `γ`:
    /// `f[n] = Σ_{k,l} c[l][k] e^{2πi l n/M} γ[n - ka]`.
    pub fn idgt(&self, c: &DgtCoefficients, gamma: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len("window", gamma.len())?;
        let (len, a, m, n) = (self.len(), self.a(), self.m(), self.n());
        if c.channels() != m || c.positions() != n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} coefficients for a grid with M = {m}, N = {n}",
                c.channels(),
                c.positions()
            )));
        }
        let ifft = FftPlanner::new().plan_fft_inverse(m);
        let mut out = vec![Complex64::new(0.0, 0.0); len];
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for k in 0..n {
            for (l, b) in buf.iter_mut().enumerate() {
                *b = c.get(l, k);
            }
            ifft.process(&mut buf);
            let shift = k * a;
            for (idx, o) in out.iter_mut().enumerate() {
                *o += buf[idx % m] * gamma[(idx + len - shift) % len];
            }
        }
        Ok(out)
    }
}
