//! Window functions and their Zak transforms.

mod ebspline;
mod tp;
mod zak;

pub use ebspline::{cardinal_bspline, poly_bspline_eval, EbMethod, EbSpline};
pub use tp::TpWindow;
pub use zak::{zak, zak_range, zak_tp_divdiff, zak_tp_via_ebspline};

use crate::{Error, Result};

/// Gaussian `e^{-πx²/s}`; `s` is the width parameter (`s = 600` gives the
/// window `e^{-πx²/600}`).
#[derive(Debug, Clone, PartialEq)]
pub struct GaussWindow {
    width: f64,
}

impl GaussWindow {
    pub fn new(width: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Gaussian width must be positive, got {width}"
            )));
        }
        Ok(Self { width })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn eval(&self, x: f64) -> f64 {
        (-std::f64::consts::PI * x * x / self.width).exp()
    }

    /// Radius beyond which the window is below `tol`.
    pub fn radius(&self, tol: f64) -> f64 {
        (self.width * (1.0 / tol).ln().max(0.0) / std::f64::consts::PI).sqrt()
    }
}

/// Any window the library can evaluate.
#[derive(Debug, Clone, PartialEq)]
pub enum Window {
    Tp(TpWindow),
    Eb(EbSpline),
    Gauss(GaussWindow),
}

impl Window {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Window::Tp(w) => w.eval(x),
            Window::Eb(w) => w.eval(x),
            Window::Gauss(w) => w.eval(x),
        }
    }

    /// Closed interval outside which the window vanishes, when bounded.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            Window::Eb(w) => Some((0.0, w.order() as f64)),
            _ => None,
        }
    }

    /// Short human-readable description, e.g. `tp:-1,1,0.5`.
    pub fn describe(&self) -> String {
        fn list(v: &[f64]) -> String {
            v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",")
        }
        match self {
            Window::Tp(w) => format!("tp:{}", list(w.deltas())),
            Window::Eb(w) => format!("eb:{}", list(w.lambdas())),
            Window::Gauss(w) => format!("gauss:{}", w.width()),
        }
    }
}

impl std::str::FromStr for Window {
    type Err = Error;

    /// Parses `tp:δ1,δ2,...`, `eb:λ1,...` or `gauss:s`; entries may be
    /// fractions such as `1/3`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, params) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidParameter(format!("window spec {s:?} lacks a kind prefix")))?;
        let values = params
            .split(',')
            .map(|p| {
                let bad = || Error::InvalidParameter(format!("bad number {p:?} in window spec"));
                let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
                match p.split_once('/') {
                    Some((n, d)) => Ok(num(n)? / num(d)?),
                    None => num(p),
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        match kind {
            "tp" => Ok(Window::Tp(TpWindow::new(values)?)),
            "eb" => Ok(Window::Eb(EbSpline::new(values)?)),
            "gauss" if values.len() == 1 => Ok(Window::Gauss(GaussWindow::new(values[0])?)),
            "gauss" => Err(Error::InvalidParameter("gauss takes a single width".into())),
            other => Err(Error::InvalidParameter(format!("unknown window kind {other:?}"))),
        }
    }
}

impl From<TpWindow> for Window {
    fn from(w: TpWindow) -> Self {
        Window::Tp(w)
    }
}

impl From<EbSpline> for Window {
    fn from(w: EbSpline) -> Self {
        Window::Eb(w)
    }
}

impl From<GaussWindow> for Window {
    fn from(w: GaussWindow) -> Self {
        Window::Gauss(w)
    }
}
