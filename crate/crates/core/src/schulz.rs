//! The frame algorithm and three implementations of the Schulz iteration for
//! the canonical dual, with forward-error traces.
//!
//! All variants start from `γ_0 = λg` and, in exact arithmetic, the Schulz
//! variants produce the same iterates `J_k g` where
//! `J_{k+1} = 2J_k - J_k S J_k`, `J_0 = λI`:
//!
//! - operator form keeps `J_k` (block diagonal, like `S`) explicitly;
//! - vector form uses `γ_{k+1} = 2γ_k - C*_{γ_k} C_g γ_k`;
//! - Janssen form uses `γ_{k+1} = 2γ_k - C*_{γ_k} C_{γ_k} g`.
//!
//! The error of an iterate is `‖C_{γ°} - C_{γ_k}‖`, the spectral norm of the
//! difference of the analysis operators.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::discrete::{norm, power_iteration, DiscreteGaborSystem, FrameOperator, GaborGrid};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    FrameAlgo,
    SchulzOperator,
    SchulzVector,
    SchulzJanssen,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::FrameAlgo,
        Variant::SchulzOperator,
        Variant::SchulzVector,
        Variant::SchulzJanssen,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::FrameAlgo => "frame_algo",
            Variant::SchulzOperator => "schulz_operator",
            Variant::SchulzVector => "schulz_vector",
            Variant::SchulzJanssen => "schulz_janssen",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown iteration variant {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub k: usize,
    pub error: f64,
    pub gamma_norm: f64,
}

/// Per-step record of one iteration run.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub variant: Variant,
    pub lambda: f64,
    pub records: Vec<TraceRecord>,
    /// `γ_0, γ_1, ...`
    pub iterates: Vec<Vec<Complex64>>,
}

impl IterationTrace {
    /// Index and value of the smallest error.
    pub fn minimum(&self) -> (usize, f64) {
        self.records
            .iter()
            .map(|r| (r.k, r.error))
            .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
    }

    /// `max(error over the `window` steps after the minimum) / minimum`.
    /// Equals 1 when the minimum is the last record.
    pub fn plateau_growth(&self, window: usize) -> f64 {
        let (k_min, e_min) = self.minimum();
        let peak = self
            .records
            .iter()
            .filter(|r| r.k >= k_min && r.k <= k_min + window)
            .map(|r| r.error)
            .fold(e_min, f64::max);
        if e_min > 0.0 {
            peak / e_min
        } else if peak > 0.0 {
            f64::INFINITY
        } else {
            1.0
        }
    }

    pub fn errors(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.error).collect()
    }
}

/// `‖C_{γ̂} - C_{γ*}‖ = sqrt(λ_max(S_{γ̂-γ*}))`, with the largest eigenvalue
/// taken exactly from the Walnut blocks of `S_{γ̂-γ*}`.
pub fn error_metric(gamma_hat: &[Complex64], gamma_star: &[Complex64], grid: &GaborGrid) -> Result<f64> {
    let diff = difference(gamma_hat, gamma_star)?;
    let (_, top) = FrameOperator::new(grid, &diff)?.bounds()?;
    Ok(top.max(0.0).sqrt())
}

/// Matrix-free variant of [`error_metric`]: power iteration on
/// `f ↦ C*_h C_h f` with `h = γ̂ - γ*`, stopped at relative change `rel_tol`.
pub fn error_metric_power(
    gamma_hat: &[Complex64],
    gamma_star: &[Complex64],
    grid: &GaborGrid,
    rel_tol: f64,
) -> Result<f64> {
    let diff = difference(gamma_hat, gamma_star)?;
    if diff.len() != grid.len() {
        return Err(Error::DimensionMismatch(format!(
            "windows of length {} on a grid with K = {}",
            diff.len(),
            grid.len()
        )));
    }
    let top = power_iteration(
        grid.len(),
        |v| {
            let c = grid.dgt(v, &diff).expect("lengths checked");
            grid.idgt(&c, &diff).expect("lengths checked")
        },
        rel_tol,
        5000,
    );
    Ok(top.max(0.0).sqrt())
}

fn difference(x: &[Complex64], y: &[Complex64]) -> Result<Vec<Complex64>> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "windows of lengths {} and {}",
            x.len(),
            y.len()
        )));
    }
    Ok(x.iter().zip(y).map(|(a, b)| a - b).collect())
}

/// `λ = 1/B_est` with `B_est` the largest eigenvalue of `S` from power
/// iteration (relative tolerance `1e-6`). Rejects systems whose frame
/// operator is numerically singular.
pub fn estimate_lambda(sys: &DiscreteGaborSystem) -> Result<f64> {
    let s = sys.frame_operator();
    let (lo, hi) = s.bounds()?;
    if !(hi > 0.0) || lo <= sys.grid().len() as f64 * f64::EPSILON * hi {
        return Err(Error::NotAFrame(format!(
            "frame operator eigenvalues span [{lo:e}, {hi:e}]"
        )));
    }
    let b_est = s.max_eigenvalue(1e-6, 10_000);
    Ok(1.0 / b_est)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    Ok(())
}

/// Runs `variant` for `steps` iterations, measuring errors against
/// `reference` (normally the canonical dual).
pub fn run_variant(
    sys: &DiscreteGaborSystem,
    variant: Variant,
    lambda: f64,
    steps: usize,
    reference: &[Complex64],
) -> Result<IterationTrace> {
    check_lambda(lambda)?;
    if reference.len() != sys.grid().len() {
        return Err(Error::DimensionMismatch("reference dual has the wrong length".into()));
    }
    let grid = *sys.grid();
    let g = sys.window();
    let scale = |v: &[Complex64], s: f64| -> Vec<Complex64> { v.iter().map(|x| x * s).collect() };
    let gamma0 = scale(g, lambda);

    let mut iterates = vec![gamma0];
    match variant {
        Variant::FrameAlgo => {
            let s = sys.frame_operator();
            for _ in 0..steps {
                let cur = iterates.last().expect("nonempty");
                let sg = s.apply(cur)?;
                let next = (0..cur.len()).map(|i| lambda * g[i] + cur[i] - lambda * sg[i]).collect();
                iterates.push(next);
            }
        }
        Variant::SchulzOperator => {
            let s = sys.frame_operator();
            let b = s.block_size();
            let mut j = FrameOperator::from_blocks(
                grid.m(),
                vec![DMatrix::<Complex64>::identity(b, b) * Complex64::new(lambda, 0.0); grid.m()],
            );
            for _ in 0..steps {
                let jsj = j.mul(&s)?.mul(&j)?;
                let blocks = j
                    .blocks()
                    .iter()
                    .zip(jsj.blocks())
                    .map(|(x, y)| x * Complex64::new(2.0, 0.0) - y)
                    .collect();
                j = FrameOperator::from_blocks(grid.m(), blocks);
                iterates.push(j.apply(g)?);
            }
        }
        Variant::SchulzVector | Variant::SchulzJanssen => {
            for _ in 0..steps {
                let cur = iterates.last().expect("nonempty");
                let coeffs = if variant == Variant::SchulzVector {
                    grid.dgt(cur, g)?
                } else {
                    grid.dgt(g, cur)?
                };
                let corr = grid.idgt(&coeffs, cur)?;
                let next = cur.iter().zip(&corr).map(|(x, c)| x * 2.0 - c).collect();
                iterates.push(next);
            }
        }
    }

    let records = iterates
        .iter()
        .enumerate()
        .map(|(k, gamma)| {
            Ok(TraceRecord {
                k,
                error: error_metric(gamma, reference, &grid)?,
                gamma_norm: norm(gamma),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IterationTrace {
        variant,
        lambda,
        records,
        iterates,
    })
}

/// Frame algorithm `γ_{k+1} = λg + (I - λS)γ_k`; `γ_k = K_k g`.
pub fn frame_algo(sys: &DiscreteGaborSystem, lambda: f64, steps: usize) -> Result<IterationTrace> {
    run_variant(sys, Variant::FrameAlgo, lambda, steps, &sys.canonical_dual()?)
}

/// Schulz iteration with `J_k` kept as an explicit (block diagonal) operator.
pub fn schulz_operator(sys: &DiscreteGaborSystem, lambda: f64, steps: usize) -> Result<IterationTrace> {
    run_variant(sys, Variant::SchulzOperator, lambda, steps, &sys.canonical_dual()?)
}

/// Schulz iteration in vector form `γ_{k+1} = 2γ_k - C*_{γ_k} C_g γ_k`.
pub fn schulz_vector(sys: &DiscreteGaborSystem, lambda: f64, steps: usize) -> Result<IterationTrace> {
    run_variant(sys, Variant::SchulzVector, lambda, steps, &sys.canonical_dual()?)
}

/// Schulz iteration in Janssen's form `γ_{k+1} = 2γ_k - C*_{γ_k} C_{γ_k} g`.
pub fn schulz_janssen(sys: &DiscreteGaborSystem, lambda: f64, steps: usize) -> Result<IterationTrace> {
    run_variant(sys, Variant::SchulzJanssen, lambda, steps, &sys.canonical_dual()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta_system() -> DiscreteGaborSystem {
        let grid = GaborGrid::new(8, 1, 8).unwrap();
        let mut g = vec![Complex64::new(0.0, 0.0); 8];
        g[0] = Complex64::new(1.0, 0.0);
        DiscreteGaborSystem::new(grid, g).unwrap()
    }

    #[test]
    fn tight_frame_lambda() {
        let sys = delta_system();
        let lambda = estimate_lambda(&sys).unwrap();
        assert!((lambda - 0.125).abs() < 1e-12);
        // one step of any variant already lands on the dual
        let t = frame_algo(&sys, lambda, 0).unwrap();
        assert_eq!(t.records.len(), 1);
        assert!(t.records[0].error < 1e-12);
    }

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>().unwrap(), v);
        }
        assert!("newton".parse::<Variant>().is_err());
    }

    #[test]
    fn growth_factor() {
        let mk = |errs: &[f64]| IterationTrace {
            variant: Variant::SchulzJanssen,
            lambda: 1.0,
            records: errs
                .iter()
                .enumerate()
                .map(|(k, &error)| TraceRecord { k, error, gamma_norm: 0.0 })
                .collect(),
            iterates: vec![],
        };
        assert_eq!(mk(&[1.0, 0.1, 0.4, 0.2]).plateau_growth(10), 4.0);
        assert_eq!(mk(&[1.0, 0.5]).plateau_growth(10), 1.0);
        assert_eq!(mk(&[1.0, 0.1, 0.4, 0.2]).minimum(), (1, 0.1));
    }

    #[test]
    fn zero_system_rejected() {
        let grid = GaborGrid::new(4, 1, 2).unwrap();
        let sys = DiscreteGaborSystem::new(grid, vec![Complex64::new(0.0, 0.0); 4]).unwrap();
        assert!(matches!(estimate_lambda(&sys), Err(Error::NotAFrame(_))));
    }
}
