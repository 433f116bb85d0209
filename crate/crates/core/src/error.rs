use thiserror::Error;

/// Errors produced by the library.
///
/// The variants are grouped so that front ends can map them onto exit codes:
/// [`Error::is_regime`] separates violations of the mathematical regime
/// (lattice density, rank loss, non-frames) from plain input errors.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("argument outside the admissible domain: {0}")]
    Domain(String),

    #[error("unsupported window for this operation: {0}")]
    UnsupportedWindow(String),

    #[error("lattice density violation: alpha*beta = {0} must be < 1")]
    Density(f64),

    #[error("frame-regime violation or L too small: section is numerically rank deficient (sigma_min = {sigma_min:e}, sigma_max = {sigma_max:e})")]
    RankDeficient { sigma_min: f64, sigma_max: f64 },

    #[error("not a frame for C^K: {0}")]
    NotAFrame(String),

    #[error("matrix is not Hermitian positive definite")]
    NotPositiveDefinite,

    #[error("repeated weights are not supported by the divided-difference route; use zak_tp_via_ebspline")]
    RepeatedWeights,

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors that signal parameters outside the frame regime rather
    /// than malformed input.
    pub fn is_regime(&self) -> bool {
        matches!(
            self,
            Error::Density(_)
                | Error::RankDeficient { .. }
                | Error::NotAFrame(_)
                | Error::NotPositiveDefinite
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
