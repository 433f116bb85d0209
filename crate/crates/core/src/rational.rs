//! Exact floor/ceil for index formulas whose arguments are rational in the
//! common case (alpha, beta and x/alpha with small denominators).

use num_rational::Ratio;

pub(crate) type Q = Ratio<i128>;

const MAX_DENOM: i128 = 1_000_000;

/// Recovers `p/q` with `q <= 10^6` from a float if the continued-fraction
/// convergent matches to a few ulps.
pub(crate) fn rationalize(v: f64) -> Option<Q> {
    if !v.is_finite() || v.abs() > 1e12 {
        return None;
    }
    let tol = 8.0 * f64::EPSILON * v.abs().max(1.0);
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = v;
    for _ in 0..64 {
        let a = r.floor();
        let ai = a as i128;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        if k2 > MAX_DENOM {
            return None;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if ((h1 as f64) / (k1 as f64) - v).abs() <= tol {
            return Some(Q::new(h1, k1));
        }
        let frac = r - a;
        if frac == 0.0 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

const NUDGE: f64 = 1.0 / (1u64 << 40) as f64;

/// Floor of an expression given both as float and (optionally) exactly.
pub(crate) fn floor(exact: Option<Q>, approx: f64) -> i64 {
    match exact {
        Some(q) => q.floor().to_integer() as i64,
        None => {
            let nearest = approx.round();
            if (approx - nearest).abs() < NUDGE * approx.abs().max(1.0) {
                log::warn!("floor argument {approx} is within 2^-40 of an integer; rounding to it");
                nearest as i64
            } else {
                approx.floor() as i64
            }
        }
    }
}

pub(crate) fn ceil(exact: Option<Q>, approx: f64) -> i64 {
    -floor(exact.map(|q| -q), -approx)
}
