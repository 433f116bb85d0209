use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::PI;

use crate::{Error, Result};

/// Above this magnitude the closed-form coefficients are evaluated in the
/// log domain.
const LOG_DOMAIN_THRESHOLD: f64 = 200.0;

/// Exponential B-spline `B_Λ = e^{λ_1·}χ_[0,1) * ... * e^{λ_N·}χ_[0,1)` with
/// knots `0, 1, ..., N`.
///
/// For `N = 1` the spline is the half-open box `e^{λx}` on `[0, 1)`; for
/// `N ≥ 2` it is continuous and vanishes outside `(0, N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EbSpline {
    lambdas: Vec<f64>,
    sorted: Vec<f64>,
}

/// Evaluation route for [`EbSpline::eval_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EbMethod {
    /// Pick the cheapest applicable route.
    Auto,
    /// `e^{λx} N_m(x)`; all weights must be equal.
    Polynomial,
    /// Piecewise closed form; weights must be pairwise distinct and `N ≥ 2`.
    ClosedForm,
    /// Four-term recurrence reduced all the way to single-weight pieces.
    Recurrence,
}

impl EbSpline {
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::InvalidParameter(
                "an EB-spline needs at least one weight".into(),
            ));
        }
        if let Some(l) = lambdas.iter().find(|l| !l.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "EB-spline weights must be finite, got {l}"
            )));
        }
        let mut sorted = lambdas.clone();
        sorted.sort_by(|a, b| a.total_cmp(b));
        Ok(Self { lambdas, sorted })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn order(&self) -> usize {
        self.lambdas.len()
    }

    fn all_equal(&self) -> bool {
        self.sorted[0] == self.sorted[self.sorted.len() - 1]
    }

    fn all_distinct(&self) -> bool {
        self.sorted.windows(2).all(|w| w[0] != w[1])
    }

    /// `B_Λ(y) ≠ 0` exactly on `(0, N)` for `N ≥ 2` and on `[0, 1)` for `N = 1`.
    pub fn is_nonzero_at(&self, y: f64) -> bool {
        let n = self.order() as f64;
        if self.order() == 1 {
            (0.0..1.0).contains(&y)
        } else {
            y > 0.0 && y < n
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_scaled(x, 0.0)
    }

    /// `B_Λ(x) e^{-log_scale}`; lets callers with large positive weights keep
    /// the values in range.
    pub fn eval_scaled(&self, x: f64, log_scale: f64) -> f64 {
        let method = if self.all_equal() {
            EbMethod::Polynomial
        } else if self.all_distinct() {
            EbMethod::ClosedForm
        } else {
            EbMethod::Auto
        };
        self.eval_impl(x, log_scale, method)
    }

    /// Evaluates through a specific route; `None` if the route does not apply
    /// to these weights.
    pub fn eval_with(&self, x: f64, method: EbMethod) -> Option<f64> {
        match method {
            EbMethod::Polynomial if !self.all_equal() => None,
            EbMethod::ClosedForm if !(self.all_distinct() && self.order() >= 2) => None,
            EbMethod::Auto => Some(self.eval(x)),
            _ => Some(self.eval_impl(x, 0.0, method)),
        }
    }

    fn eval_impl(&self, x: f64, log_scale: f64, method: EbMethod) -> f64 {
        if !self.is_nonzero_at(x) {
            return 0.0;
        }
        let n = self.sorted.len();
        let mut rec = Recurrence {
            lambdas: &self.sorted,
            log_scale,
            full_reduction: method == EbMethod::Recurrence,
            memo: HashMap::new(),
        };
        rec.eval(0, n - 1, x)
    }

    /// `B̂_Λ(ω) = Π (e^{λ-2πiω} - 1)/(λ - 2πiω)`.
    pub fn fourier(&self, omega: f64) -> Complex64 {
        self.lambdas
            .iter()
            .map(|&l| {
                let z = Complex64::new(l, -2.0 * PI * omega);
                if z.norm() < 1e-8 {
                    // (e^z - 1)/z = 1 + z/2 + z^2/6 + ...
                    Complex64::new(1.0, 0.0) + z / 2.0 + z * z / 6.0
                } else {
                    (z.exp() - 1.0) / z
                }
            })
            .product()
    }
}

struct Recurrence<'a> {
    lambdas: &'a [f64],
    log_scale: f64,
    full_reduction: bool,
    memo: HashMap<(usize, usize, i64), f64>,
}

impl Recurrence<'_> {
    /// Spline of `lambdas[i..=j]` at `x`, scaled by `e^{-log_scale}`.
    fn eval(&mut self, i: usize, j: usize, x: f64) -> f64 {
        let order = j - i + 1;
        let inside = if order == 1 {
            (0.0..1.0).contains(&x)
        } else {
            x > 0.0 && x < order as f64
        };
        if !inside {
            return 0.0;
        }
        let seg = &self.lambdas[i..=j];
        if seg[0] == seg[order - 1] {
            return (seg[0] * x - self.log_scale).exp() * cardinal_bspline(order, x);
        }
        if !self.full_reduction && seg.windows(2).all(|w| w[0] != w[1]) {
            let log_domain = seg.iter().any(|l| l.abs() > LOG_DOMAIN_THRESHOLD);
            return closed_form(seg, x, self.log_scale, log_domain);
        }
        // x is shifted by whole units only, so the integer part keys the memo
        let key = (i, j, x.floor() as i64);
        if let Some(v) = self.memo.get(&key) {
            return *v;
        }
        let (l1, ln) = (seg[0], seg[order - 1]);
        let head = self.eval(i, j - 1, x);
        let tail = self.eval(i + 1, j, x);
        let head_shift = self.eval(i, j - 1, x - 1.0);
        let tail_shift = self.eval(i + 1, j, x - 1.0);
        let v = (head - tail + l1.exp() * tail_shift - ln.exp() * head_shift) / (l1 - ln);
        self.memo.insert(key, v);
        v
    }
}

/// Piecewise closed form for pairwise distinct weights:
/// `B(t + k - 1) = Σ_j α_j^{(k)} e^{λ_j t}` on `t ∈ [0,1)`, with
/// `α_j^{(k)} = (-1)^{k-1} e_{k-1}({e^{λ_r}}_{r≠j}) / Π_{r≠j}(λ_j - λ_r)`.
fn closed_form(lambdas: &[f64], x: f64, log_scale: f64, log_domain: bool) -> f64 {
    let n = lambdas.len();
    let piece = (x.floor() as usize).min(n - 1);
    let t = x - piece as f64;
    let sign = if piece.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut sum = 0.0;
    for (j, &lj) in lambdas.iter().enumerate() {
        let denom: f64 = lambdas
            .iter()
            .enumerate()
            .filter(|(r, _)| *r != j)
            .map(|(_, lr)| lj - lr)
            .product();
        let others = lambdas
            .iter()
            .enumerate()
            .filter(|(r, _)| *r != j)
            .map(|(_, l)| *l);
        let term = if log_domain {
            let log_e = log_elementary_symmetric(others, piece);
            let log_mag = log_e - denom.abs().ln() + lj * t - log_scale;
            denom.signum() * log_mag.exp()
        } else {
            let e = elementary_symmetric(others.map(f64::exp), piece);
            e / denom * (lj * t - log_scale).exp()
        };
        sum += term;
    }
    sign * sum
}

/// `e_k(v_1, ..., v_n)`.
fn elementary_symmetric(values: impl Iterator<Item = f64>, k: usize) -> f64 {
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for v in values {
        for d in (1..=k).rev() {
            e[d] += v * e[d - 1];
        }
    }
    e[k]
}

/// `log e_k(e^{l_1}, ..., e^{l_n})` without forming the exponentials.
fn log_elementary_symmetric(logs: impl Iterator<Item = f64>, k: usize) -> f64 {
    let mut e = vec![f64::NEG_INFINITY; k + 1];
    e[0] = 0.0;
    for l in logs {
        for d in (1..=k).rev() {
            e[d] = log_add(e[d], l + e[d - 1]);
        }
    }
    e[k]
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Cardinal polynomial B-spline `N_m` of order `m` (degree `m-1`) with knots
/// `0..=m`, by the Cox–de Boor recursion. `N_1 = χ_[0,1)`.
pub fn cardinal_bspline(m: usize, x: f64) -> f64 {
    if m == 0 || !(0.0..m as f64).contains(&x) {
        return 0.0;
    }
    // level-r values N_r(x - i) for i = 0..=m-r
    let mut v: Vec<f64> = (0..m)
        .map(|i| {
            let y = x - i as f64;
            if (0.0..1.0).contains(&y) {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    for r in 2..=m {
        let inv = 1.0 / (r - 1) as f64;
        for i in 0..=(m - r) {
            let y = x - i as f64;
            v[i] = (y * v[i] + (r as f64 - y) * v[i + 1]) * inv;
        }
    }
    v[0]
}

/// Checked front end for [`cardinal_bspline`].
pub fn poly_bspline_eval(m: usize, x: f64) -> Result<f64> {
    if m < 1 {
        return Err(Error::InvalidParameter(
            "B-spline order must be at least 1".into(),
        ));
    }
    Ok(cardinal_bspline(m, x))
}
