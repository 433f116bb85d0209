use num_complex::Complex64;
use std::f64::consts::PI;
use std::ops::RangeInclusive;

use super::{EbSpline, TpWindow, Window};
use crate::{Error, Result};

/// Indices `j` whose terms `f(x + αj)` enter the truncated Zak sum.
///
/// For EB-splines the range covers the whole support and the sum is exact.
/// For TP windows the radius `R` satisfies
/// `2c e^{-ρR} / (1 - e^{-ρα}) < tol` with `ρ = 0.9τ` and `c` from
/// [`TpWindow::decay_constant`]; Gaussians are cut where they drop below
/// `tol`.
pub fn zak_range(window: &Window, alpha: f64, x: f64, tol: f64) -> Result<RangeInclusive<i64>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Zak truncation tolerance must be positive, got {tol}"
        )));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "Zak parameter must be positive, got {alpha}"
        )));
    }
    let (lo, hi) = match window {
        Window::Eb(w) => (0.0, w.order() as f64),
        Window::Tp(w) => {
            let rate = 0.9 * w.decay_rate();
            let c = w.decay_constant();
            let geometric = 1.0 - (-rate * alpha).exp();
            let r = ((2.0 * c / (tol * geometric)).ln() / rate).max(0.0);
            (-r, r)
        }
        Window::Gauss(w) => {
            let r = w.radius(tol * (1.0 - (-alpha).exp()).min(1.0) / 4.0) + alpha;
            (-r, r)
        }
    };
    let first = ((lo - x) / alpha).floor() as i64;
    let last = ((hi - x) / alpha).ceil() as i64;
    Ok(first..=last)
}

/// `Z_α f(x, ω) = Σ_j f(x + αj) e^{-2πijαω}`, truncated as in [`zak_range`].
pub fn zak(window: &Window, alpha: f64, x: f64, omega: f64, tol: f64) -> Result<Complex64> {
    let range = zak_range(window, alpha, x, tol)?;
    Ok(range
        .map(|j| {
            let v = window.eval(x + alpha * j as f64);
            if v == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::from_polar(v, -2.0 * PI * j as f64 * alpha * omega)
            }
        })
        .sum())
}

fn check_tp_zak_args(h: f64, k: usize, x: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!("dilation h must be positive, got {h}")));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("period K must be positive".into()));
    }
    if !(0.0..k as f64).contains(&x) {
        return Err(Error::Domain(format!("x = {x} must lie in [0, {k})")));
    }
    Ok(())
}

/// `log(λ / (e^λ - 1))`, continuous at 0.
fn log_bernoulli_factor(l: f64) -> f64 {
    if l.abs() < 1e-12 {
        -l / 2.0
    } else if l > 0.0 {
        l.ln() - l - (-(-l).exp()).ln_1p()
    } else {
        (-l).ln() - (-(l.exp())).ln_1p()
    }
}

/// `Z_K g_h(x, 0)` for the dilated window `g_h = h·g(h·)` through the
/// associated EB-spline with weights `λ_ν = -Kh/δ_ν`:
///
/// `K Z_K g_h(x,0) = Π_ν λ_ν/(e^{λ_ν} - 1) · Z_1 B_Λ(x/K, 0)`.
///
/// For a single weight the EB-spline Zak sum jumps at `x = 0`; the midpoint
/// is used there, matching the value `1/(2|δ|)` of the one-sided exponential.
pub fn zak_tp_via_ebspline(w: &TpWindow, h: f64, k: usize, x: f64) -> Result<f64> {
    check_tp_zak_args(h, k, x)?;
    let kf = k as f64;
    let lambdas: Vec<f64> = w.deltas().iter().map(|d| -kf * h / d).collect();
    let log_prefactor: f64 = lambdas.iter().map(|l| log_bernoulli_factor(*l)).sum();
    let log_scale: f64 = lambdas.iter().filter(|l| **l > 0.0).sum();
    let spline = EbSpline::new(lambdas.clone())?;
    let y = x / kf;
    let n = spline.order();
    let zak_sum = if n == 1 && y == 0.0 {
        0.5 * ((-log_scale).exp() + (lambdas[0] - log_scale).exp())
    } else {
        (0..n).map(|j| spline.eval_scaled(y + j as f64, log_scale)).sum::<f64>()
    };
    Ok((log_prefactor + log_scale).exp() * zak_sum / kf)
}

/// `Z_K g_h(x, ω)` as the divided difference of
/// `r_{x,ω}(y) = (-1)^{N-1} h Π δ_ν^{-1} e^{-hxy} / (1 - e^{-K(hy + 2πiω)})`
/// at the knots `1/δ_1, ..., 1/δ_N`.
///
/// Needs pairwise distinct weights; inputs where the denominator of `r`
/// vanishes at a knot are rejected.
pub fn zak_tp_divdiff(w: &TpWindow, h: f64, k: usize, x: f64, omega: f64) -> Result<Complex64> {
    check_tp_zak_args(h, k, x)?;
    if !w.is_simple() {
        return Err(Error::RepeatedWeights);
    }
    let kf = k as f64;
    let n = w.order();
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    let scale = sign * h * w.deltas().iter().map(|d| 1.0 / d).product::<f64>();

    let mut knots: Vec<f64> = w.deltas().iter().map(|d| 1.0 / d).collect();
    knots.sort_by(|a, b| b.abs().total_cmp(&a.abs()));

    let r = |y: f64| -> Result<Complex64> {
        let z = Complex64::new(kf * h * y, 2.0 * PI * kf * omega);
        let decay = Complex64::new(-h * x * y, 0.0);
        // write the geometric factor so that no exponential exceeds 1 in modulus
        let (num, den) = if z.re >= 0.0 {
            (decay.exp(), Complex64::new(1.0, 0.0) - (-z).exp())
        } else {
            (-(decay + z).exp(), Complex64::new(1.0, 0.0) - z.exp())
        };
        if den.norm() < 1e-10 {
            return Err(Error::Domain(format!(
                "1 - exp(-K(hy + 2πiω)) vanishes at knot y = {y}"
            )));
        }
        Ok(num / den * scale)
    };

    let mut table = knots.iter().map(|y| r(*y)).collect::<Result<Vec<_>>>()?;
    for level in 1..n {
        for i in 0..n - level {
            table[i] = (table[i + 1] - table[i]) / (knots[i + level] - knots[i]);
        }
    }
    Ok(table[0])
}
