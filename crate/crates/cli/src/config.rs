//! Effective run parameters: command-line flags layered over an optional
//! `key=value` file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use gabor_tp::windows::Window;
use serde_json::{json, Map, Value};

use crate::CliError;

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// TP window deltas, e.g. `-1,1,0.333333,0.2`
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tp: Option<String>,
    /// EB-spline weights, e.g. `0,0`
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub eb: Option<String>,
    /// Gaussian width s of exp(-pi x^2 / s)
    #[arg(long, global = true)]
    pub gauss: Option<String>,
    /// Time step; fractions such as `2/3` are accepted
    #[arg(long, global = true)]
    pub alpha: Option<String>,
    /// Frequency step; fractions such as `1/50` are accepted
    #[arg(long, global = true)]
    pub beta: Option<String>,
    /// Section size parameter
    #[arg(long = "L", global = true)]
    pub l: Option<usize>,
    /// Samples per time step alpha
    #[arg(long, global = true)]
    pub a: Option<usize>,
    /// Signal length
    #[arg(long = "K", global = true)]
    pub k: Option<usize>,
    /// Number of channels
    #[arg(long = "M", global = true)]
    pub m: Option<usize>,
    /// Iteration steps
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// Relaxation parameter; estimated from the frame operator when absent
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    /// Evaluation grid `start:step:stop`
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Section sizes for `converge`: `start:step:stop` or a comma list
    #[arg(long = "Ls", global = true)]
    pub ls: Option<String>,
    /// Reference section size for `converge`
    #[arg(long = "L-ref", global = true)]
    pub l_ref: Option<usize>,
    /// Also write the periodized Zak vector of length K
    #[arg(long, global = true)]
    pub zak: bool,
    /// Input signal (CSV or GDK1 binary)
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Dual used for synthesis: `canonical` or `section`
    #[arg(long, global = true)]
    pub dual: Option<String>,
    #[arg(long = "out-dir", global = true)]
    pub out_dir: Option<PathBuf>,
    /// File of `key=value` lines; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for random test signals
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Pass/fail tolerance
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

/// Accepts decimals and `p/q`.
pub fn parse_real(s: &str) -> Result<f64, CliError> {
    let s = s.trim();
    let bad = || CliError::Usage(format!("cannot parse {s:?} as a number"));
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            p / q
        }
        None => s.parse().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// `start:step:stop`, inclusive of `stop` up to rounding.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!("grid {s:?} must be start:step:stop")));
    }
    let (start, step, stop) = (parse_real(parts[0])?, parse_real(parts[1])?, parse_real(parts[2])?);
    if !(step > 0.0) || stop < start {
        return Err(CliError::Usage(format!("grid {s:?} needs step > 0 and stop >= start")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 10_000_000 {
        return Err(CliError::Usage(format!("grid {s:?} has too many points")));
    }
    Ok((0..count).map(|i| start + step * i as f64).collect())
}

fn parse_list(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = |p: &str| CliError::Usage(format!("bad section size {p:?}"));
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::Usage(format!("range {s:?} must be start:step:stop")));
        }
        let v: Vec<usize> = parts
            .iter()
            .map(|p| p.trim().parse::<usize>().map_err(|_| bad(p)))
            .collect::<Result<_, _>>()?;
        if v[1] == 0 || v[2] < v[0] {
            return Err(CliError::Usage(format!("range {s:?} needs step > 0 and stop >= start")));
        }
        Ok((v[0]..=v[2]).step_by(v[1]).collect())
    } else {
        s.split(',').map(|p| p.trim().parse::<usize>().map_err(|_| bad(p))).collect()
    }
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {} is not key=value", n + 1)))?;
        map.insert(k.trim().trim_start_matches("--").to_string(), v.trim().to_string());
    }
    Ok(map)
}

/// Parameters after merging; unset values stay `None` and each command
/// supplies its own defaults or reports what is missing.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: &'static str,
    pub window: Option<Window>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub l: Option<usize>,
    pub a: Option<usize>,
    pub k: Option<usize>,
    pub m: Option<usize>,
    pub steps: Option<usize>,
    pub lambda: Option<f64>,
    pub grid: Option<Vec<f64>>,
    grid_spec: Option<String>,
    pub ls: Option<Vec<usize>>,
    pub l_ref: Option<usize>,
    pub zak: bool,
    pub input: Option<PathBuf>,
    pub dual: Option<String>,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub tol: Option<f64>,
}

fn pick<T: FromStr>(flag: Option<T>, cfg: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, CliError> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => cfg
            .get(key)
            .map(|s| s.parse::<T>().map_err(|_| CliError::Usage(format!("config value {key}={s:?} is invalid"))))
            .transpose(),
    }
}

fn window_from(tp: Option<&String>, eb: Option<&String>, gauss: Option<&String>, spec: Option<&String>) -> Result<Option<Window>, CliError> {
    let mut given: Vec<String> = Vec::new();
    if let Some(s) = tp {
        given.push(format!("tp:{s}"));
    }
    if let Some(s) = eb {
        given.push(format!("eb:{s}"));
    }
    if let Some(s) = gauss {
        given.push(format!("gauss:{s}"));
    }
    if let Some(s) = spec {
        given.push(s.clone());
    }
    match given.len() {
        0 => Ok(None),
        1 => Ok(Some(given[0].parse::<Window>().map_err(|e| CliError::Usage(e.to_string()))?)),
        _ => Err(CliError::Usage("give exactly one window spec".into())),
    }
}

impl RunConfig {
    pub fn resolve(command: &'static str, flags: &Flags) -> Result<Self, CliError> {
        let cfg = match &flags.config {
            Some(p) => read_config(p)?,
            None => BTreeMap::new(),
        };
        let window = match window_from(flags.tp.as_ref(), flags.eb.as_ref(), flags.gauss.as_ref(), None)? {
            Some(w) => Some(w),
            None => window_from(cfg.get("tp"), cfg.get("eb"), cfg.get("gauss"), cfg.get("window"))?,
        };
        let real = |flag: &Option<String>, key: &str| -> Result<Option<f64>, CliError> {
            flag.as_ref().or(cfg.get(key)).map(|s| parse_real(s)).transpose()
        };
        let grid_spec = flags.grid.clone().or_else(|| cfg.get("grid").cloned());
        let ls = flags.ls.clone().or_else(|| cfg.get("Ls").cloned());
        let zak = flags.zak
            || match cfg.get("zak").map(String::as_str) {
                None | Some("false") | Some("0") => false,
                Some("true") | Some("1") => true,
                Some(other) => return Err(CliError::Usage(format!("config value zak={other:?} is invalid"))),
            };
        let run = RunConfig {
            command,
            window,
            alpha: real(&flags.alpha, "alpha")?,
            beta: real(&flags.beta, "beta")?,
            l: pick(flags.l, &cfg, "L")?,
            a: pick(flags.a, &cfg, "a")?,
            k: pick(flags.k, &cfg, "K")?,
            m: pick(flags.m, &cfg, "M")?,
            steps: pick(flags.steps, &cfg, "steps")?,
            lambda: pick(flags.lambda, &cfg, "lambda")?,
            grid: grid_spec.as_deref().map(parse_grid).transpose()?,
            grid_spec,
            ls: ls.as_deref().map(parse_list).transpose()?,
            l_ref: pick(flags.l_ref, &cfg, "L-ref")?,
            zak,
            input: pick(flags.input.clone(), &cfg, "input")?,
            dual: pick(flags.dual.clone(), &cfg, "dual")?,
            out_dir: pick(flags.out_dir.clone(), &cfg, "out-dir")?.unwrap_or_else(|| PathBuf::from(".")),
            seed: pick(flags.seed, &cfg, "seed")?.unwrap_or(0),
            tol: pick(flags.tol, &cfg, "tol")?,
        };
        for (name, v) in [("alpha", run.alpha), ("beta", run.beta), ("lambda", run.lambda), ("tol", run.tol)] {
            if let Some(v) = v {
                if !(v > 0.0) {
                    return Err(CliError::Usage(format!("{name} must be positive, got {v}")));
                }
            }
        }
        for (name, v) in [("a", run.a), ("K", run.k), ("M", run.m)] {
            if v == Some(0) {
                return Err(CliError::Usage(format!("{name} must be positive")));
            }
        }
        Ok(run)
    }

    pub fn window(&self) -> Result<&Window, CliError> {
        self.window
            .as_ref()
            .ok_or_else(|| CliError::Usage("a window is required (--tp, --eb or --gauss)".into()))
    }

    pub fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T, CliError> {
        v.ok_or_else(|| CliError::Usage(format!("--{name} is required for this command")))
    }

    /// Every effective parameter, for the JSON summary.
    pub fn echo(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("window".into(), json!(self.window.as_ref().map(|w| w.describe())));
        m.insert("alpha".into(), json!(self.alpha));
        m.insert("beta".into(), json!(self.beta));
        m.insert("L".into(), json!(self.l));
        m.insert("a".into(), json!(self.a));
        m.insert("K".into(), json!(self.k));
        m.insert("M".into(), json!(self.m));
        m.insert("steps".into(), json!(self.steps));
        m.insert("lambda".into(), json!(self.lambda));
        m.insert("grid".into(), json!(self.grid_spec));
        m.insert("Ls".into(), json!(self.ls));
        m.insert("L-ref".into(), json!(self.l_ref));
        m.insert("zak".into(), json!(self.zak));
        m.insert("input".into(), json!(self.input.as_ref().map(|p| p.display().to_string())));
        m.insert("dual".into(), json!(self.dual));
        m.insert("out-dir".into(), json!(self.out_dir.display().to_string()));
        m.insert("seed".into(), json!(self.seed));
        m.insert("tol".into(), json!(self.tol));
        Value::Object(m)
    }
}
