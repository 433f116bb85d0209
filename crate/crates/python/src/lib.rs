//! Python module `gabor_tp`.
//!
//! Build the importable library with
//! `cargo build -p gabor-tp-python --release --features extension-module` and
//! copy `libgabor_tp_py.so` to `gabor_tp.so` on the Python path.

use gabor_tp::discrete::{self, DgtCoefficients, DiscreteGaborSystem, GaborGrid};
use gabor_tp::dual::{self, DualSamples, Lattice};
use gabor_tp::schulz::{self, Variant};
use gabor_tp::windows::Window;
use gabor_tp::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(gabor_tp, RegimeError, PyException, "Parameters outside the frame regime.");

fn to_py(e: gabor_tp::Error) -> PyErr {
    if e.is_regime() {
        RegimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

/// A window function parsed from `tp:δ1,...`, `eb:λ1,...` or `gauss:s`.
#[pyclass(name = "Window", module = "gabor_tp", frozen)]
pub struct PyWindow {
    inner: Window,
}

#[pymethods]
impl PyWindow {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(Self { inner: spec.parse().map_err(to_py)? })
    }

    fn __call__(&self, x: f64) -> f64 {
        self.inner.eval(x)
    }

    fn eval(&self, xs: Vec<f64>) -> Vec<f64> {
        xs.iter().map(|x| self.inner.eval(*x)).collect()
    }

    fn describe(&self) -> String {
        self.inner.describe()
    }

    fn __repr__(&self) -> String {
        format!("Window('{}')", self.inner.describe())
    }

    /// Periodized samples `√h Σ_j g(h(k + jK))`, `h = alpha/a`.
    fn discretize(&self, alpha: f64, a: usize, length: usize) -> PyResult<Vec<Complex64>> {
        discrete::discretize_window(&self.inner, alpha, a, length).map_err(to_py)
    }
}

/// Samples `γ_L(qα/a)` of a section dual.
#[pyclass(name = "DualSamples", module = "gabor_tp", frozen)]
pub struct PyDualSamples {
    inner: DualSamples,
}

#[pymethods]
impl PyDualSamples {
    #[getter]
    fn first(&self) -> i64 {
        self.inner.first
    }

    #[getter]
    fn step(&self) -> f64 {
        self.inner.step()
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.values.clone()
    }

    /// `(t_first, t_last)`.
    #[getter]
    fn support(&self) -> (f64, f64) {
        let s = self.inner.step();
        (self.inner.first as f64 * s, self.inner.last() as f64 * s)
    }

    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    fn wexler_raz_residual(&self, window: &PyWindow) -> PyResult<f64> {
        let lat = Lattice::new(self.inner.alpha, self.inner.beta).map_err(to_py)?;
        Ok(dual::wexler_raz_residual(&window.inner, &self.inner, &lat, None).residual)
    }

    fn discretize(&self, length: usize) -> PyResult<Vec<Complex64>> {
        discrete::discretize_dual(&self.inner, length).map_err(to_py)
    }
}

/// Dual from the pseudo-inverted pre-Gramian sections of size parameter `L`.
#[pyfunction]
#[pyo3(signature = (window, alpha, beta, l, a))]
fn dual_sampled(window: &PyWindow, alpha: f64, beta: f64, l: usize, a: usize) -> PyResult<PyDualSamples> {
    let lat = Lattice::new(alpha, beta).map_err(to_py)?;
    let inner = dual::dual_sampled(&window.inner, &lat, l, a).map_err(to_py)?;
    Ok(PyDualSamples { inner })
}

/// `(min σ_min, max σ_max, Schur bound)` of the sections over `x_count` offsets.
#[pyfunction]
#[pyo3(signature = (window, alpha, beta, l, x_count = 32))]
fn frame_bounds(window: &PyWindow, alpha: f64, beta: f64, l: usize, x_count: usize) -> PyResult<(f64, f64, f64)> {
    let lat = Lattice::new(alpha, beta).map_err(to_py)?;
    let b = dual::frame_bounds(&window.inner, &lat, l, x_count).map_err(to_py)?;
    Ok((b.a_est, b.b_est, b.schur))
}

/// Discrete Gabor system on `C^K` with time step `a` and `M` channels.
#[pyclass(name = "GaborSystem", module = "gabor_tp", frozen)]
pub struct PyGaborSystem {
    inner: DiscreteGaborSystem,
}

#[pymethods]
impl PyGaborSystem {
    #[new]
    fn new(window: Vec<Complex64>, a: usize, m: usize) -> PyResult<Self> {
        let grid = GaborGrid::new(window.len(), a, m).map_err(to_py)?;
        Ok(Self { inner: DiscreteGaborSystem::new(grid, window).map_err(to_py)? })
    }

    #[getter]
    fn length(&self) -> usize {
        self.inner.grid().len()
    }

    #[getter]
    fn window(&self) -> Vec<Complex64> {
        self.inner.window().to_vec()
    }

    /// Coefficients as rows `c[l][k]`, `l < M`, `k < K/a`.
    fn dgt(&self, f: Vec<Complex64>) -> PyResult<Vec<Vec<Complex64>>> {
        let c = self.inner.dgt(&f).map_err(to_py)?;
        Ok((0..c.channels()).map(|l| (0..c.positions()).map(|k| c.get(l, k)).collect()).collect())
    }

    fn idgt(&self, coefficients: Vec<Vec<Complex64>>, gamma: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        let grid = self.inner.grid();
        if coefficients.len() != grid.m() || coefficients.iter().any(|row| row.len() != grid.n()) {
            return Err(PyValueError::new_err(format!(
                "coefficients must be {} rows of {}",
                grid.m(),
                grid.n()
            )));
        }
        let c = DgtCoefficients::from_vec(grid.m(), grid.n(), coefficients.concat()).map_err(to_py)?;
        self.inner.idgt(&c, &gamma).map_err(to_py)
    }

    fn canonical_dual(&self) -> PyResult<Vec<Complex64>> {
        self.inner.canonical_dual().map_err(to_py)
    }

    /// Optimal frame bounds `(A, B)`.
    fn bounds(&self) -> PyResult<(f64, f64)> {
        self.inner.frame_operator().bounds().map_err(to_py)
    }

    /// `[(k, error, ‖γ_k‖)]` for `frame_algo`, `schulz_operator`,
    /// `schulz_vector` or `schulz_janssen`.
    #[pyo3(signature = (variant, steps, lam = None))]
    fn schulz_trace(&self, variant: &str, steps: usize, lam: Option<f64>) -> PyResult<Vec<(usize, f64, f64)>> {
        let v: Variant = variant.parse().map_err(to_py)?;
        let lambda = match lam {
            Some(l) => l,
            None => schulz::estimate_lambda(&self.inner).map_err(to_py)?,
        };
        let reference = self.inner.canonical_dual().map_err(to_py)?;
        let t = schulz::run_variant(&self.inner, v, lambda, steps, &reference).map_err(to_py)?;
        Ok(t.records.iter().map(|r| (r.k, r.error, r.gamma_norm)).collect())
    }
}

/// Registers the classes and functions on `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWindow>()?;
    m.add_class::<PyDualSamples>()?;
    m.add_class::<PyGaborSystem>()?;
    m.add_function(wrap_pyfunction!(dual_sampled, m)?)?;
    m.add_function(wrap_pyfunction!(frame_bounds, m)?)?;
    m.add("RegimeError", m.py().get_type::<RegimeError>())?;
    Ok(())
}

#[pymodule]
#[pyo3(name = "gabor_tp")]
fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
