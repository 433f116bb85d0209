//! Gabor frames generated by totally positive (TP) windows of finite type and
//! exponential B-splines.
//!
//! The crate covers the whole path from continuous windows to discrete Gabor
//! systems on `C^K`:
//!
//! - [`windows`]: exact evaluation of TP windows, EB-splines and their Zak
//!   transforms.
//! - [`linalg`]: the dense kernels (pseudoinverse, singular values, Hermitian
//!   solves) used by the rest of the crate.
//! - [`dual`]: compactly supported dual windows obtained from finite sections
//!   of the pre-Gramian, Wexler–Raz verification and convergence studies.
//! - [`discrete`]: sampling, periodization, the discrete Gabor transform and
//!   the discrete canonical dual.
//! - [`schulz`]: the frame algorithm and three implementations of the Schulz
//!   iteration with forward-error traces.
//! - [`io`]: CSV and binary formats shared by the CLI and the bindings.

pub mod discrete;
pub mod dual;
mod error;
pub mod io;
pub mod linalg;
mod rational;
pub mod schulz;
pub mod windows;

pub use error::{Error, Result};
pub use num_complex::Complex64;
