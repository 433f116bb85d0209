//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use gabor_tp::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_signal(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub fn dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| {
            let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// `∫_a^b f` with `panels` Gauss–Legendre panels, split at the given breakpoints.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64], panels: usize, rule: &[(f64, f64)]) -> f64 {
    let mut cuts = vec![a];
    cuts.extend(breaks.iter().copied().filter(|c| *c > a && *c < b));
    cuts.push(b);
    cuts.sort_by(|x, y| x.total_cmp(y));
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let width = (w[1] - w[0]) / panels as f64;
        for p in 0..panels {
            let lo = w[0] + p as f64 * width;
            let mid = lo + width / 2.0;
            total += rule.iter().map(|(x, wt)| wt * f(mid + x * width / 2.0)).sum::<f64>() * width / 2.0;
        }
    }
    total
}

/// `g_Δ(x)` as the nested convolution of the one-sided exponentials
/// `g_δ(t) = e^{-t/δ}/|δ|` on `δt > 0`, integrated numerically.
pub fn tp_convolution(deltas: &[f64], x: f64) -> f64 {
    let rule = gauss_legendre(16);
    fn rec(deltas: &[f64], x: f64, rule: &[(f64, f64)]) -> f64 {
        let d = deltas[deltas.len() - 1];
        if deltas.len() == 1 {
            return if d * x > 0.0 {
                (-x / d).exp() / d.abs()
            } else if x == 0.0 {
                0.5 / d.abs()
            } else {
                0.0
            };
        }
        let rest = &deltas[..deltas.len() - 1];
        // t = sign(δ)|δ|s, s >= 0: ∫_0^∞ g_rest(x - δ s) e^{-s} ds
        let f = |s: f64| rec(rest, x - d * s, rule) * (-s).exp();
        let kink = x / d;
        integrate(&f, 0.0, 40.0, &[kink], 10, rule)
    }
    rec(deltas, x, &rule)
}

/// `B_Λ(x)` as the nested convolution of `e^{λt}χ_[0,1)`.
pub fn eb_convolution(lambdas: &[f64], x: f64) -> f64 {
    let rule = gauss_legendre(20);
    fn rec(lambdas: &[f64], x: f64, rule: &[(f64, f64)]) -> f64 {
        let l = lambdas[lambdas.len() - 1];
        if lambdas.len() == 1 {
            return if (0.0..1.0).contains(&x) { (l * x).exp() } else { 0.0 };
        }
        let rest = &lambdas[..lambdas.len() - 1];
        let f = |t: f64| rec(rest, x - t, rule) * (l * t).exp();
        // kinks of the inner spline sit at the integers
        let breaks: Vec<f64> = (0..=rest.len()).map(|k| x - k as f64).collect();
        integrate(&f, 0.0, 1.0, &breaks, 1, rule)
    }
    rec(lambdas, x, &rule)
}

/// `O(K²)` analysis: `c[l][k] = Σ_n f[n] conj(g[n-ka]) e^{-2πiln/M}`.
pub fn naive_dgt(f: &[Complex64], g: &[Complex64], a: usize, m: usize) -> Vec<Vec<Complex64>> {
    let len = f.len();
    (0..m)
        .map(|l| {
            (0..len / a)
                .map(|k| {
                    (0..len)
                        .map(|n| {
                            let phase = -2.0 * PI * ((l * n) % m) as f64 / m as f64;
                            f[n] * g[(n + len - k * a) % len].conj() * Complex64::from_polar(1.0, phase)
                        })
                        .sum()
                })
                .collect()
        })
        .collect()
}

pub const EXAMPLE_DELTAS: [f64; 4] = [-1.0, 1.0, 1.0 / 3.0, 1.0 / 5.0];
