use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;

use gabor_tp::discrete::{discretize_dual, discretize_window, DiscreteGaborSystem, GaborGrid};
use gabor_tp::dual::{dual_convergence, dual_sampled, frame_bounds, wexler_raz_residual, DualSamples, Lattice};
use gabor_tp::io::{
    fmt_float, read_signal, write_dgt_csv, write_samples_csv, write_signal_csv, write_table_csv, write_trace_csv,
};
use gabor_tp::schulz::{estimate_lambda, run_variant, Variant};
use gabor_tp::windows::Window;
use gabor_tp::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::CliError;

fn create(run: &RunConfig, name: &str) -> Result<BufWriter<File>, CliError> {
    fs::create_dir_all(&run.out_dir)?;
    Ok(BufWriter::new(File::create(run.out_dir.join(name))?))
}

/// Writes `summary.json` and echoes it on stdout.
fn finish(run: &RunConfig, results: Value) -> Result<(), CliError> {
    let summary = json!({ "parameters": run.echo(), "results": results });
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    fs::create_dir_all(&run.out_dir)?;
    fs::write(run.out_dir.join("summary.json"), format!("{text}\n"))?;
    println!("{text}");
    Ok(())
}

fn lattice(run: &RunConfig) -> Result<Lattice, CliError> {
    let alpha = RunConfig::need(run.alpha, "alpha")?;
    let beta = RunConfig::need(run.beta, "beta")?;
    Ok(Lattice::new(alpha, beta)?)
}

/// Channel count: `--M` when given, otherwise `a/(αβ)`.
fn grid(run: &RunConfig, len: usize) -> Result<GaborGrid, CliError> {
    let a = RunConfig::need(run.a, "a")?;
    let grid = match run.m {
        Some(m) => GaborGrid::new(len, a, m)?,
        None => GaborGrid::for_lattice(&lattice(run)?, a, len)?,
    };
    if let (Some(alpha), Some(beta)) = (run.alpha, run.beta) {
        let density = a as f64 / grid.m() as f64;
        if (density - alpha * beta).abs() > 1e-9 * density {
            return Err(CliError::Usage(format!(
                "M = {} does not match a/(alpha*beta) = {}",
                grid.m(),
                a as f64 / (alpha * beta)
            )));
        }
    }
    Ok(grid)
}

fn system(run: &RunConfig, len: usize) -> Result<DiscreteGaborSystem, CliError> {
    let grid = grid(run, len)?;
    let alpha = RunConfig::need(run.alpha, "alpha")?;
    let g = discretize_window(run.window()?, alpha, grid.a(), len)?;
    Ok(DiscreteGaborSystem::new(grid, g)?)
}

fn random_signal(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn dist(u: &[Complex64], v: &[Complex64]) -> f64 {
    u.iter().zip(v).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

fn support(d: &DualSamples) -> Value {
    json!([d.first as f64 * d.step(), d.last() as f64 * d.step()])
}

pub fn window(run: &RunConfig) -> Result<(), CliError> {
    let w = run.window()?;
    if run.grid.is_none() && !run.zak {
        return Err(CliError::Usage("window needs --grid and/or --zak".into()));
    }
    let mut results = json!({ "window": w.describe() });
    if let Some(xs) = &run.grid {
        let rows: Vec<Vec<String>> = xs.iter().map(|x| vec![fmt_float(*x), fmt_float(w.eval(*x))]).collect();
        write_table_csv(create(run, "window.csv")?, &["x", "g"], &rows)?;
        results["grid_points"] = json!(xs.len());
    }
    if run.zak {
        let len = RunConfig::need(run.k, "K")?;
        let (alpha, a) = (run.alpha.unwrap_or(1.0), run.a.unwrap_or(1));
        let z = discretize_window(w, alpha, a, len)?;
        write_signal_csv(create(run, "zak.csv")?, &z)?;
        results["zak_length"] = json!(len);
        results["zak_norm"] = json!(norm(&z));
    }
    finish(run, results)
}

pub fn dual(run: &RunConfig) -> Result<(), CliError> {
    let w = run.window()?;
    let lat = lattice(run)?;
    let (l, a) = (run.l.unwrap_or(0), run.a.unwrap_or(1));
    let d = dual_sampled(w, &lat, l, a)?;
    write_samples_csv(create(run, "dual.csv")?, &d, &[("window", w.describe())])?;
    let wr = wexler_raz_residual(w, &d, &lat, None);
    let mut results = json!({
        "samples": d.values.len(),
        "support": support(&d),
        "l2_norm": d.norm(),
        "wexler_raz_residual": wr.residual,
        "wexler_raz_kmax": wr.kmax,
    });
    if let Some(len) = run.k {
        let gd = discretize_dual(&d, len)?;
        let g = discretize_window(w, lat.alpha(), a, len)?;
        write_signal_csv(create(run, "dual_discrete.csv")?, &gd)?;
        write_signal_csv(create(run, "window_discrete.csv")?, &g)?;
        results["discrete_length"] = json!(len);
    }
    eprintln!("Wexler-Raz residual {:.3e}", wr.residual);
    finish(run, results)
}

pub fn converge(run: &RunConfig) -> Result<(), CliError> {
    let w = run.window()?;
    let lat = lattice(run)?;
    let ls = run.ls.clone().unwrap_or_else(|| (2..=14).collect());
    let study = dual_convergence(w, &lat, &ls, run.a.unwrap_or(1), run.l_ref)?;
    let rows: Vec<Vec<String>> = study.rows.iter().map(|(l, e)| vec![l.to_string(), fmt_float(*e)]).collect();
    write_table_csv(create(run, "converge.csv")?, &["L", "error"], &rows)?;
    let finite = |x: f64| if x.is_finite() { json!(x) } else { Value::Null };
    finish(
        run,
        json!({
            "L_ref": study.l_ref,
            "slope": finite(study.slope),
            "intercept": finite(study.intercept),
            "r_squared": finite(study.r_squared),
            "reference_gap": study.reference_gap,
        }),
    )
}

pub fn schulz(run: &RunConfig) -> Result<(), CliError> {
    let len = RunConfig::need(run.k, "K")?;
    let sys = system(run, len)?;
    let steps = run.steps.unwrap_or(20);
    let lambda = match run.lambda {
        Some(l) => l,
        None => estimate_lambda(&sys)?,
    };
    let reference = sys.canonical_dual()?;
    let mut per_variant = serde_json::Map::new();
    for v in Variant::ALL {
        let trace = run_variant(&sys, v, lambda, steps, &reference)?;
        write_trace_csv(create(run, &format!("trace_{}.csv", v.name()))?, std::slice::from_ref(&trace))?;
        let (k_min, e_min) = trace.minimum();
        per_variant.insert(
            v.name().into(),
            json!({
                "initial_error": trace.records[0].error,
                "final_error": trace.records[steps].error,
                "min_error": e_min,
                "min_step": k_min,
                "plateau_growth": trace.plateau_growth(steps),
            }),
        );
    }
    finish(run, json!({ "lambda": lambda, "M": sys.grid().m(), "variants": per_variant }))
}

pub fn dgt(run: &RunConfig) -> Result<(), CliError> {
    let path: PathBuf = run.input.clone().ok_or_else(|| CliError::Usage("--input is required for dgt".into()))?;
    let bytes = fs::read(&path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let f = read_signal(&bytes)?;
    if let Some(k) = run.k {
        if k != f.len() {
            return Err(CliError::Usage(format!("--K={k} but the signal has {} samples", f.len())));
        }
    }
    let sys = system(run, f.len())?;
    let (gamma, kind) = match run.dual.as_deref().unwrap_or("canonical") {
        "canonical" => (sys.canonical_dual()?, "canonical"),
        "section" => {
            let d = dual_sampled(run.window()?, &lattice(run)?, run.l.unwrap_or(0), sys.grid().a())?;
            (discretize_dual(&d, f.len())?, "section")
        }
        other => return Err(CliError::Usage(format!("unknown dual {other:?}; use canonical or section"))),
    };
    let c = sys.dgt(&f)?;
    let back = sys.idgt(&c, &gamma)?;
    write_dgt_csv(create(run, "coefficients.csv")?, &c)?;
    write_signal_csv(create(run, "reconstruction.csv")?, &back)?;
    let fnorm = norm(&f);
    let err = dist(&back, &f);
    finish(
        run,
        json!({
            "K": f.len(),
            "M": sys.grid().m(),
            "dual": kind,
            "coefficient_energy": c.energy(),
            "reconstruction_error": err,
            "relative_error": if fnorm > 0.0 { json!(err / fnorm) } else { json!(err) },
        }),
    )
}

pub fn verify(run: &RunConfig) -> Result<(), CliError> {
    let w = run.window()?;
    let lat = lattice(run)?;
    let (l, a) = (run.l.unwrap_or(0), run.a.unwrap_or(1));
    let tol = run.tol.unwrap_or(1e-8);
    let d = dual_sampled(w, &lat, l, a)?;
    let wr = wexler_raz_residual(w, &d, &lat, None);
    let mut results = json!({
        "tol": tol,
        "support": support(&d),
        "wexler_raz_residual": wr.residual,
    });
    if !matches!(w, Window::Gauss(_)) {
        let b = frame_bounds(w, &lat, l, 32)?;
        results["sigma_min"] = json!(b.a_est);
        results["sigma_max"] = json!(b.b_est);
        results["schur_bound"] = json!(b.schur);
    }
    let mut worst = 0.0f64;
    if let Some(len) = run.k {
        let sys = system(run, len)?;
        let gamma = discretize_dual(&d, len)?;
        let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
        for _ in 0..20 {
            let f = random_signal(&mut rng, len);
            let back = sys.idgt(&sys.dgt(&f)?, &gamma)?;
            worst = worst.max(dist(&back, &f) / norm(&f));
        }
        results["round_trip_error"] = json!(worst);
    }
    let passed = wr.residual < tol && worst < tol;
    results["passed"] = json!(passed);
    finish(run, results)?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "residual {:.3e}, round trip {worst:.3e}, tolerance {tol:.1e}",
            wr.residual
        )))
    }
}
