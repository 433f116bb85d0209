//! Frame-bound probes and convergence studies for the section duals.

use super::{build_section, dual_sampled, effective_support, eb_offset_window, section_indices, DualSamples, Lattice};
use crate::linalg::{pinv_full, sigma_extremes};
use crate::windows::Window;
use crate::{Error, Result};

/// Singular-value extremes of `P_L(x)` over an `x`-grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBoundEstimate {
    /// `min_x σ_min(P_L(x))`.
    pub a_est: f64,
    /// `max_x σ_max(P_L(x))`.
    pub b_est: f64,
    /// Largest Schur-test bound over the same grid.
    pub schur: f64,
}

/// Uniform half-open grid of admissible offsets.
fn offset_grid(window: &Window, lat: &Lattice, count: usize) -> Vec<f64> {
    let lo = match window {
        Window::Eb(w) => eb_offset_window(w, lat).0,
        _ => 0.0,
    };
    (0..count).map(|i| lo + lat.alpha() * i as f64 / count as f64).collect()
}

/// Schur-test bound `sqrt(max_j Σ_k |p_jk| · max_k Σ_j |p_jk|)` for the
/// biinfinite pre-Gramian at `x`; it dominates `σ_max` of every section.
pub fn schur_bound(window: &Window, lat: &Lattice, x: f64) -> f64 {
    let (lo, hi) = effective_support(window);
    let (alpha, beta) = (lat.alpha(), lat.beta());
    // row sums are periodic in j modulo the lattice; the offsets x + αj mod 1/β
    // are covered by j in a window of length 1/(αβ) + 1, but a direct sweep is
    // cheap enough and avoids assuming rationality.
    let span = ((hi - lo) * beta).ceil() as i64 + 2;
    let rows = (span as f64 / (alpha * beta)).ceil() as i64 + 2;
    let row_sum = |j: i64| -> f64 {
        let t = x + alpha * j as f64;
        let k0 = ((t - hi) * beta).floor() as i64;
        (k0..=k0 + span).map(|k| window.eval(t - k as f64 / beta).abs()).sum()
    };
    let col_sum = |k: i64| -> f64 {
        let s = k as f64 / beta - x;
        let j0 = ((s + lo) / alpha).floor() as i64;
        let count = ((hi - lo) / alpha).ceil() as i64 + 2;
        (j0..=j0 + count)
            .map(|j| window.eval(x + alpha * j as f64 - k as f64 / beta).abs())
            .sum()
    };
    let max_row = (-rows..=rows).map(row_sum).fold(0.0, f64::max);
    let max_col = (-span..=span).map(col_sum).fold(0.0, f64::max);
    (max_row * max_col).sqrt()
}

/// Frame-bound estimates from the sections `P_L(x)` on `x_count` uniform
/// offsets in the admissible window.
pub fn frame_bounds(window: &Window, lat: &Lattice, l: usize, x_count: usize) -> Result<FrameBoundEstimate> {
    if x_count == 0 {
        return Err(Error::InvalidParameter("x_count must be positive".into()));
    }
    let mut est = FrameBoundEstimate {
        a_est: f64::INFINITY,
        b_est: 0.0,
        schur: 0.0,
    };
    for x in offset_grid(window, lat, x_count) {
        let idx = section_indices(window, lat, l, x)?;
        let (lo, hi) = sigma_extremes(&build_section(window, lat, x, &idx))?;
        est.a_est = est.a_est.min(lo);
        est.b_est = est.b_est.max(hi);
        est.schur = est.schur.max(schur_bound(window, lat, x));
    }
    Ok(est)
}

/// Surrogate for the canonical dual: the section dual at a large `L_ref`.
/// Its distance to the canonical dual decays exponentially in `L_ref`.
pub fn canonical_dual_ref(window: &Window, lat: &Lattice, l_ref: usize, a: usize) -> Result<DualSamples> {
    dual_sampled(window, lat, l_ref, a)
}

/// Result of [`dual_convergence`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub l_ref: usize,
    /// `(L, ‖γ_L - γ_ref‖₂)`.
    pub rows: Vec<(usize, f64)>,
    /// Least-squares fit of `ln err` against `L` over the rows with nonzero error.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `‖γ_ref - γ_{ref-2}‖₂`, an estimate of the reference's own error.
    pub reference_gap: f64,
}

/// Ordinary least squares `y ≈ slope·x + intercept` with its `R²`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return (f64::NAN, ys.first().copied().unwrap_or(f64::NAN), f64::NAN);
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r2)
}

/// Distances `‖γ_L - γ_ref‖₂` (sample norms weighted by `√(α/a)`) for each
/// `L` in `l_list`, with `L_ref = max(3·L_max, L_max + 10)` unless given.
pub fn dual_convergence(
    window: &Window,
    lat: &Lattice,
    l_list: &[usize],
    a: usize,
    l_ref: Option<usize>,
) -> Result<ConvergenceStudy> {
    let l_max = l_list
        .iter()
        .copied()
        .max()
        .ok_or_else(|| Error::InvalidParameter("empty list of L values".into()))?;
    let l_ref = l_ref.unwrap_or((3 * l_max).max(l_max + 10));
    if l_ref < l_max + 2 {
        return Err(Error::InvalidParameter(format!(
            "reference L = {l_ref} must exceed the largest studied L = {l_max} by at least 2"
        )));
    }
    let reference = canonical_dual_ref(window, lat, l_ref, a)?;
    let previous = canonical_dual_ref(window, lat, l_ref - 2, a)?;
    let mut rows = Vec::with_capacity(l_list.len());
    for &l in l_list {
        let g = dual_sampled(window, lat, l, a)?;
        rows.push((l, g.distance(&reference)));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|(_, e)| *e > 0.0)
        .map(|&(l, e)| (l as f64, e.ln()))
        .unzip();
    let (slope, intercept, r_squared) = linear_fit(&xs, &ys);
    Ok(ConvergenceStudy {
        l_ref,
        rows,
        slope,
        intercept,
        r_squared,
        reference_gap: reference.distance(&previous),
    })
}

/// Fitted exponential decay rate `ρ` of the off-diagonal entries of
/// `G⁻¹ = (P_LᵀP_L)⁻¹` at offset `x`, measured along the row `k = 0`:
/// `d ↦ max_± |G⁻¹_{0,±d}| / sqrt(G⁻¹_{00} G⁻¹_{±d,±d})`.
///
/// `G⁻¹` is formed as `P†P†ᵀ` because `G` squares the condition number of
/// the section. The normalization keeps the badly conditioned boundary
/// columns from dominating; the fit stops two columns short of the section
/// edge or once the profile reaches `1e-10`.
pub fn inverse_gram_decay(window: &Window, lat: &Lattice, l: usize, x: f64) -> Result<f64> {
    let idx = section_indices(window, lat, l, x)?;
    let section = build_section(window, lat, x, &idx);
    let p = pinv_full(&section, super::section_rcond(&idx))?;
    let q = p.matrix.as_matrix();
    let inv = q * q.transpose();
    let c0 = (-idx.k1) as usize;
    let reach = (-idx.k1).min(idx.k2) as usize;
    let entry = |j: usize| (inv[(c0, j)] / (inv[(c0, c0)] * inv[(j, j)]).sqrt()).abs();
    let (xs, ys): (Vec<f64>, Vec<f64>) = (1..reach.saturating_sub(1))
        .map(|d| (d as f64, entry(c0 - d).max(entry(c0 + d))))
        .take_while(|(_, v)| *v > 1e-10)
        .map(|(d, v)| (d, v.ln()))
        .unzip();
    if xs.len() < 2 {
        return Err(Error::InvalidParameter(
            "section too small to fit an off-diagonal decay rate".into(),
        ));
    }
    Ok(-linear_fit(&xs, &ys).0)
}
