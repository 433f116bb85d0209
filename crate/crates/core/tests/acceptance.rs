//! Acceptance checks. Runs as a plain binary and prints one line per
//! criterion; exits non-zero when any criterion fails.

mod common;

use std::time::Instant;

use common::{dist, naive_dgt, norm, random_signal, rng, tp_convolution, EXAMPLE_DELTAS};
use gabor_tp::discrete::{
    critical_basis_check, discretize_dual, discretize_window, DiscreteGaborSystem, GaborGrid,
};
use gabor_tp::dual::{dual_convergence, dual_sampled, frame_bounds, inverse_gram_decay, wexler_raz_residual, Lattice};
use gabor_tp::linalg::{sigma_extremes, ComplexMatrix};
use gabor_tp::schulz::{error_metric, estimate_lambda, frame_algo, run_variant, schulz_operator, Variant};
use gabor_tp::windows::{zak, zak_tp_via_ebspline, EbMethod, EbSpline, TpWindow, Window};
use gabor_tp::Complex64;
use nalgebra::DMatrix;
use rand::Rng;

type Outcome = Result<String, String>;

fn example_window() -> Window {
    Window::Tp(TpWindow::new(EXAMPLE_DELTAS.to_vec()).unwrap())
}

fn example_lattice() -> Lattice {
    Lattice::new(2.0 / 3.0, 1.0).unwrap()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn worked_example() -> Outcome {
    let start = Instant::now();
    let (w, lat) = (example_window(), example_lattice());
    let (a, len) = (20, 900);
    let grid = GaborGrid::for_lattice(&lat, a, len).map_err(|e| e.to_string())?;
    let g = discretize_window(&w, lat.alpha(), a, len).map_err(|e| e.to_string())?;
    let sys = DiscreteGaborSystem::new(grid, g).map_err(|e| e.to_string())?;
    let gamma = discretize_dual(&dual_sampled(&w, &lat, 20, a).map_err(|e| e.to_string())?, len)
        .map_err(|e| e.to_string())?;
    let canonical = sys.canonical_dual().map_err(|e| e.to_string())?;
    let err = dist(&gamma, &canonical);
    let op = error_metric(&gamma, &canonical, sys.grid()).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    check(
        (7e-9..=7e-7).contains(&err) && secs < 60.0,
        format!("‖γ_L - γ°‖₂ = {err:.3e} (analysis-operator norm {op:.3e}), {secs:.2} s"),
    )
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    a / gcd(a, b) * b
}

fn exact_duals() -> Outcome {
    let start = Instant::now();
    // (window, α, β, L, a)
    let sets: [(&str, f64, f64, usize, usize); 10] = [
        ("tp:-1,1,0.3333333333333333,0.2", 0.5, 0.5, 0, 4),
        ("tp:1,1", 1.0, 0.5, 3, 4),
        ("tp:-1,1", 0.75, 1.0, 8, 3),
        ("tp:1,0.5,0.25", 0.5, 1.0, 0, 4),
        ("tp:-0.5,1,2", 1.5, 0.5, 3, 6),
        ("eb:0,0", 1.0, 0.25, 0, 4),
        ("eb:0,0,0", 1.0, 0.5, 3, 4),
        ("eb:1,-1", 0.75, 1.0, 8, 3),
        ("eb:0.5,0,-0.5,1", 1.5, 0.5, 0, 6),
        ("eb:-2", 0.5, 1.0, 3, 4),
    ];
    let mut r = rng(2);
    let (mut worst_wr, mut worst_rt) = (0.0f64, 0.0f64);
    for (spec, alpha, beta, l, a) in sets {
        let w: Window = spec.parse().unwrap();
        let lat = Lattice::new(alpha, beta).unwrap();
        let samples = dual_sampled(&w, &lat, l, a).map_err(|e| format!("{spec}: {e}"))?;
        worst_wr = worst_wr.max(wexler_raz_residual(&w, &samples, &lat, None).residual);

        let m = (a as f64 / lat.density()).round() as usize;
        let step = lcm(a, m);
        let need = 2 * samples.values.len() + 400;
        let len = step * need.div_ceil(step);
        let grid = GaborGrid::for_lattice(&lat, a, len).map_err(|e| format!("{spec}: {e}"))?;
        let g = discretize_window(&w, alpha, a, len).map_err(|e| format!("{spec}: {e}"))?;
        let sys = DiscreteGaborSystem::new(grid, g).map_err(|e| format!("{spec}: {e}"))?;
        let gamma = discretize_dual(&samples, len).map_err(|e| format!("{spec}: {e}"))?;
        for _ in 0..20 {
            let f = random_signal(&mut r, len);
            let back = sys.idgt(&sys.dgt(&f).unwrap(), &gamma).unwrap();
            worst_rt = worst_rt.max(dist(&back, &f) / norm(&f));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        worst_wr < 1e-8 && worst_rt < 1e-8 && secs < 300.0,
        format!("max Wexler-Raz residual {worst_wr:.2e}, max round trip {worst_rt:.2e}, {secs:.1} s"),
    )
}

fn convergence_rate() -> Outcome {
    let ls: Vec<usize> = (2..=14).collect();
    let study = dual_convergence(&example_window(), &example_lattice(), &ls, 20, Some(40)).map_err(|e| e.to_string())?;
    check(
        study.slope < 0.0 && study.r_squared >= 0.95,
        format!("slope {:.4}, R² {:.6}", study.slope, study.r_squared),
    )
}

fn uniform_bounds() -> Outcome {
    let (w, lat) = (example_window(), example_lattice());
    let mut lows = Vec::new();
    let mut schur_ok = true;
    for l in [0, 5, 10, 15, 20] {
        let est = frame_bounds(&w, &lat, l, 32).map_err(|e| e.to_string())?;
        lows.push(est.a_est);
        schur_ok &= est.b_est <= est.schur;
    }
    let lo = lows.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = lows.iter().copied().fold(0.0, f64::max);
    let variation = (hi - lo) / lo;
    check(
        lo > 0.0 && variation < 0.2 && schur_ok,
        format!("σ_min in [{lo:.4e}, {hi:.4e}], variation {:.2}%, σ_max ≤ Schur: {schur_ok}", 100.0 * variation),
    )
}

fn schulz_identities() -> Outcome {
    let mut worst_vec = 0.0f64;
    let mut worst_op = 0.0f64;
    for (seed, (len, a, m)) in [(40u64, (48, 4, 12)), (41, (64, 4, 16)), (42, (60, 5, 10))] {
        let mut r = rng(seed);
        let g = random_signal(&mut r, len);
        let sys = DiscreteGaborSystem::new(GaborGrid::new(len, a, m).unwrap(), g.clone()).unwrap();
        let lambda = estimate_lambda(&sys).map_err(|e| e.to_string())?;
        let fa = frame_algo(&sys, lambda, 7).map_err(|e| e.to_string())?;
        let op = schulz_operator(&sys, lambda, 3).map_err(|e| e.to_string())?;
        for k in 0..=3 {
            worst_vec = worst_vec.max(dist(&op.iterates[k], &fa.iterates[(1 << k) - 1]) / norm(&g));
        }
        let s = sys.frame_operator().to_dense().into_matrix();
        let id = DMatrix::<Complex64>::identity(len, len);
        let base = &id - &s * Complex64::new(lambda, 0.0);
        let mut j = &id * Complex64::new(lambda, 0.0);
        let mut power = base.clone();
        for _ in 0..=3 {
            let diff = (&id - &s * &j) - &power;
            let (_, e) = sigma_extremes(&ComplexMatrix::from_matrix(diff)).map_err(|e| e.to_string())?;
            worst_op = worst_op.max(e);
            j = &j * Complex64::new(2.0, 0.0) - &j * &s * &j;
            power = &power * &power;
        }
    }
    check(
        worst_vec <= 1e-10 && worst_op <= 1e-10,
        format!("max ‖J_k g - K_(2^k-1) g‖/‖g‖ {worst_vec:.2e}, max operator residual {worst_op:.2e}"),
    )
}

fn stability_dichotomy() -> Outcome {
    let w: Window = "gauss:600".parse().unwrap();
    let g = discretize_window(&w, 20.0, 20, 1000).map_err(|e| e.to_string())?;
    let sys = DiscreteGaborSystem::new(GaborGrid::new(1000, 20, 50).unwrap(), g).map_err(|e| e.to_string())?;
    let lambda = estimate_lambda(&sys).map_err(|e| e.to_string())?;
    let reference = sys.canonical_dual().map_err(|e| e.to_string())?;
    let mut ok = true;
    let mut parts = Vec::new();
    for v in [Variant::SchulzOperator, Variant::SchulzVector, Variant::SchulzJanssen] {
        let t = run_variant(&sys, v, lambda, 20, &reference).map_err(|e| e.to_string())?;
        let e0 = t.records[0].error;
        let (_, min) = t.minimum();
        let growth = t.plateau_growth(20);
        ok &= match v {
            Variant::SchulzJanssen => growth >= 30.0,
            _ => min <= 1e-8 * e0 && growth <= 10.0,
        };
        parts.push(format!("{v}: min {min:.2e} (initial {e0:.2e}), growth {growth:.3e}"));
    }
    check(ok, parts.join("; "))
}

fn oracles() -> Outcome {
    let mut r = rng(7);
    // EB routes on overlapping configurations
    let mut eb_worst = 0.0f64;
    let equal = [vec![0.0, 0.0, 0.0], vec![-1.5, -1.5], vec![0.7; 4]];
    let distinct = [vec![1.0, -1.0], vec![0.0, 0.5, 2.0], vec![-3.0, -1.0, 0.25, 1.5]];
    for lam in equal.iter().chain(distinct.iter()) {
        let b = EbSpline::new(lam.clone()).unwrap();
        let direct = if lam.windows(2).all(|p| p[0] == p[1]) { EbMethod::Polynomial } else { EbMethod::ClosedForm };
        for _ in 0..100 {
            let x = r.gen_range(0.0..b.order() as f64);
            let u = b.eval_with(x, direct).unwrap();
            let v = b.eval_with(x, EbMethod::Recurrence).unwrap();
            eb_worst = eb_worst.max((u - v).abs() / u.abs().max(1.0));
        }
    }
    // TP recurrence against numerical convolution
    let mut tp_worst = 0.0f64;
    for (d, xs) in [
        (EXAMPLE_DELTAS.to_vec(), vec![-2.0, -0.4, 0.5, 1.3, 3.0]),
        (vec![1.0, 0.5, 0.25], vec![0.2, 1.0, 2.5]),
        (vec![-0.5, 1.0, 2.0], vec![-1.0, 0.4, 4.0]),
    ] {
        let w = TpWindow::new(d.clone()).unwrap();
        for x in xs {
            tp_worst = tp_worst.max((w.eval(x) - tp_convolution(&d, x)).abs());
        }
    }
    // Zak through the EB-spline against the truncated sum
    let mut zak_worst = 0.0f64;
    for (d, h, k, x) in [
        (vec![1.0], 1.0, 8usize, 2.0),
        (vec![-1.0, 1.0], 1.0, 16, 5.0),
        (EXAMPLE_DELTAS.to_vec(), 2.0 / 3.0 / 20.0, 900, 13.5),
        (vec![1.0, 0.5, 0.25], 0.3, 12, 7.25),
    ] {
        let w = TpWindow::new(d).unwrap();
        let via = zak_tp_via_ebspline(&w, h, k, x).unwrap();
        let direct = zak(&Window::Tp(w.dilate(h).unwrap()), k as f64, x, 0.0, 1e-14).unwrap();
        zak_worst = zak_worst.max((via - direct.re).abs().max(direct.im.abs()));
    }
    // DGT against the double sum
    let mut dgt_worst = 0.0f64;
    for (len, a, m) in [(24usize, 4usize, 6usize), (48, 6, 8), (36, 3, 12)] {
        let f = random_signal(&mut r, len);
        let g = random_signal(&mut r, len);
        let fast = GaborGrid::new(len, a, m).unwrap().dgt(&f, &g).unwrap();
        for (l, row) in naive_dgt(&f, &g, a, m).iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                dgt_worst = dgt_worst.max((fast.get(l, k) - v).norm());
            }
        }
    }
    check(
        eb_worst <= 1e-11 && tp_worst <= 1e-8 && zak_worst <= 1e-9 && dgt_worst <= 1e-12,
        format!("EB routes {eb_worst:.1e}, TP quadrature {tp_worst:.1e}, Zak {zak_worst:.1e}, DGT {dgt_worst:.1e}"),
    )
}

fn basis_checks() -> Outcome {
    let odd: [(Vec<f64>, usize, usize); 3] =
        [(vec![1.0, 1.0], 3, 45), (vec![1.0, 0.5], 5, 25), (vec![0.5, 2.0, 1.0], 3, 27)];
    let even: [(Vec<f64>, usize, usize); 3] =
        [(vec![-1.0, 1.0], 3, 36), (vec![-0.5, 0.5], 5, 40), (vec![-1.0, -0.5, 0.5, 1.0], 3, 48)];
    let mut counts = [0, 0];
    for (i, cases) in [odd, even].into_iter().enumerate() {
        for (d, m, len) in cases {
            let g = discretize_window(&Window::Tp(TpWindow::new(d).unwrap()), m as f64, m, len).unwrap();
            if critical_basis_check(&g, m).unwrap_or(false) {
                counts[i] += 1;
            }
        }
    }
    check(
        counts[0] >= 3 && counts[1] >= 3,
        format!("K/M odd: {}/3 bases, even window: {}/3 bases", counts[0], counts[1]),
    )
}

fn gram_decay() -> Outcome {
    let (w, lat) = (example_window(), example_lattice());
    let mut rates = Vec::new();
    for l in [5, 10, 15, 20] {
        rates.push(inverse_gram_decay(&w, &lat, l, 0.3).map_err(|e| e.to_string())?);
    }
    let lo = rates.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = rates.iter().copied().fold(0.0, f64::max);
    let variation = (hi - lo) / lo;
    check(
        lo > 0.0 && variation < 0.3,
        format!("decay exponents {rates:.3?}, variation {:.1}%", 100.0 * variation),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("worked example error", worked_example),
        ("exact section duals", exact_duals),
        ("exponential convergence in L", convergence_rate),
        ("uniform section bounds", uniform_bounds),
        ("Schulz identities", schulz_identities),
        ("Schulz stability dichotomy", stability_dichotomy),
        ("evaluation oracles", oracles),
        ("critical-density bases", basis_checks),
        ("inverse Gram decay", gram_decay),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
