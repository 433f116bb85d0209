mod common;

use common::EXAMPLE_DELTAS;
use gabor_tp::dual::*;
use gabor_tp::windows::{EbSpline, TpWindow, Window};
use gabor_tp::Error;

fn example() -> (Window, Lattice) {
    (
        Window::Tp(TpWindow::new(EXAMPLE_DELTAS.to_vec()).unwrap()),
        Lattice::new(2.0 / 3.0, 1.0).unwrap(),
    )
}

#[test]
fn eb_indices_satisfy_support_conditions() {
    let cases: [(&[f64], f64, f64); 4] = [
        (&[0.0, 0.0], 1.0, 0.5),
        (&[0.0], 0.5, 1.0),
        (&[1.0, -2.0, 0.5], 0.75, 2.0 / 3.0),
        (&[0.0, 0.0, 0.0, 0.0], 1.0, 0.25),
    ];
    for (lambdas, alpha, beta) in cases {
        let b = EbSpline::new(lambdas.to_vec()).unwrap();
        let lat = Lattice::new(alpha, beta).unwrap();
        let (lo, hi) = eb_offset_window(&b, &lat);
        for l in [0usize, 3] {
            for s in 0..5 {
                let x = lo + (hi - lo) * s as f64 / 5.0;
                let idx = eb_section_indices(&b, &lat, l, x).unwrap();
                let y = |j: i64, k: i64| x + alpha * j as f64 - k as f64 / beta;
                assert!(b.is_nonzero_at(y(idx.i1 - 1, idx.k1 - 1)), "{lambdas:?} x={x}");
                assert!(!b.is_nonzero_at(y(idx.i1, idx.k1 - 1)));
                assert!(b.is_nonzero_at(y(idx.i2 + 1, idx.k2 + 1)));
                assert!(!b.is_nonzero_at(y(idx.i2, idx.k2 + 1)));
                assert!(idx.rows() >= idx.cols());
            }
        }
    }
}

#[test]
fn tp_section_column_structure() {
    // one-sided window: below the ridge each column decreases as j grows
    let w = Window::Tp(TpWindow::new(vec![1.0]).unwrap());
    let lat = Lattice::new(0.5, 1.0).unwrap();
    let idx = section_indices(&w, &lat, 2, 0.1).unwrap();
    let p = build_section(&w, &lat, 0.1, &idx);
    for k in idx.k1..=idx.k2 {
        let ridge = (k as f64 / lat.density()).ceil() as i64;
        for j in ridge.max(idx.i1)..idx.i2 {
            assert!(p.get(j + 1, k).unwrap() <= p.get(j, k).unwrap());
        }
    }
}

#[test]
fn slices_agree_with_large_section_tail() {
    let (w, lat) = example();
    for x in [0.0, 0.25, 0.5] {
        let a = dual_slice(&w, &lat, x, 10).unwrap();
        let b = dual_slice(&w, &lat, x, 15).unwrap();
        let diff = (a.i1.min(b.i1)..=a.i2.max(b.i2))
            .map(|j| (a.value(j) - b.value(j)).abs())
            .fold(0.0, f64::max);
        assert!(diff < 1e-3, "x={x} diff={diff}");
        assert!(slice_residual(&w, &a, None).residual < 1e-8);
    }
}

#[test]
fn minimal_sections_and_eb_duals() {
    let (w, lat) = example();
    let s = dual_slice(&w, &lat, 0.0, 0).unwrap();
    assert!(slice_residual(&w, &s, None).residual < 1e-8);

    let hat = Window::Eb(EbSpline::new(vec![0.0, 0.0]).unwrap());
    let lat = Lattice::new(1.0, 0.5).unwrap();
    for l in [0usize, 2, 5] {
        let d = dual_sampled(&hat, &lat, l, 4).unwrap();
        assert!(wexler_raz_residual(&hat, &d, &lat, None).residual < 1e-8);
    }
}

#[test]
fn sampled_dual_assembles_slices() {
    let (w, lat) = example();
    let one = dual_sampled(&w, &lat, 3, 1).unwrap();
    let slice = dual_slice(&w, &lat, 0.0, 3).unwrap();
    assert_eq!(one.first, slice.i1);
    assert_eq!(one.values, slice.values);

    let a = 5;
    let d = dual_sampled(&w, &lat, 3, a).unwrap();
    for p in 0..a {
        let s = dual_slice(&w, &lat, lat.alpha() * p as f64 / a as f64, 3).unwrap();
        for j in s.i1..=s.i2 {
            assert_eq!(d.get(a as i64 * j + p as i64), s.value(j));
        }
    }
}

#[test]
fn residual_sees_perturbations() {
    let (w, lat) = example();
    let mut d = dual_sampled(&w, &lat, 2, 2).unwrap();
    assert!(wexler_raz_residual(&w, &d, &lat, None).residual < 1e-8);
    let q = d.first + d.values.len() as i64 / 2;
    let idx = (q - d.first) as usize;
    d.values[idx] += 1e-3;
    let r = wexler_raz_residual(&w, &d, &lat, None);
    // the k-column through the perturbed point sees 1e-3 g(t - k/β)
    let t = q as f64 * d.step();
    let best = (-40..=40).map(|k| w.eval(t - k as f64)).fold(0.0, f64::max);
    assert!(r.residual >= 1e-3 * best * 0.999);
}

#[test]
fn rank_deficiency_is_reported() {
    // a box of width 1 cannot generate a frame with α = 1.5 > 1
    let boxw = Window::Eb(EbSpline::new(vec![0.0]).unwrap());
    let lat = Lattice::new(1.5, 0.5).unwrap();
    let err = dual_slice(&boxw, &lat, 0.5, 0).unwrap_err();
    assert!(matches!(err, Error::RankDeficient { .. } | Error::InvalidParameter(_)), "{err}");
    assert!(err.is_regime() || matches!(err, Error::InvalidParameter(_)));
}

#[test]
fn frame_bound_examples() {
    let w = Window::Tp(TpWindow::new(vec![1.0, 1.0]).unwrap());
    let lat = Lattice::new(0.7, 0.7).unwrap();
    for l in [0usize, 5, 10, 20] {
        let est = frame_bounds(&w, &lat, l, 32).unwrap();
        assert!(est.a_est > 0.0);
        assert!(est.b_est <= est.schur * (1.0 + 1e-12));
    }
    let (w, lat) = example();
    let a5 = frame_bounds(&w, &lat, 5, 32).unwrap().a_est;
    let a15 = frame_bounds(&w, &lat, 15, 32).unwrap().a_est;
    assert!((a15 - a5).abs() / a5 < 0.2);
}

#[test]
fn canonical_reference_examples() {
    let (w, lat) = example();
    let d = |l| canonical_dual_ref(&w, &lat, l, 4).unwrap();
    // above the rounding floor set by cond(P_L(x)) ~ 1e9 for this window
    let (g12, g10, g8, g6) = (d(12), d(10), d(8), d(6));
    assert!(g12.distance(&g10) < g8.distance(&g6));
    assert!(wexler_raz_residual(&w, &d(30), &lat, None).residual < 1e-8);

    let cubic = Window::Eb(EbSpline::new(vec![0.0; 3]).unwrap());
    let lat = Lattice::new(0.6, 0.5).unwrap();
    let a = canonical_dual_ref(&cubic, &lat, 10, 3).unwrap();
    let b = canonical_dual_ref(&cubic, &lat, 12, 3).unwrap();
    assert!(a.distance(&b) < 1e-12 * a.norm());
}

#[test]
fn convergence_examples() {
    let (w, lat) = example();
    let study = dual_convergence(&w, &lat, &(2..=12).collect::<Vec<_>>(), 20, None).unwrap();
    assert_eq!(study.l_ref, 36);
    assert!(study.slope < 0.0);
    for pair in study.rows.windows(2) {
        assert!(pair[1].1 <= pair[0].1 || pair[1].1 < 10.0 * study.reference_gap);
    }
    let single = dual_convergence(&w, &lat, &[4], 20, None).unwrap();
    assert_eq!(single.rows.len(), 1);
}

#[test]
fn inverse_gram_decay_is_uniform() {
    let (w, lat) = example();
    let rates: Vec<f64> = [5usize, 10, 15, 20]
        .iter()
        .map(|l| inverse_gram_decay(&w, &lat, *l, 0.3).unwrap())
        .collect();
    let (lo, hi) = rates.iter().fold((f64::INFINITY, 0.0f64), |(a, b), r| (a.min(*r), b.max(*r)));
    assert!(lo > 0.0 && (hi - lo) / hi < 0.3, "{rates:?}");
}

#[test]
fn ridge_decay() {
    // |p_jk| <= C e^{-c |j - k/(αβ)|}
    let (w, lat) = example();
    let idx = section_indices(&w, &lat, 10, 0.2).unwrap();
    let p = build_section(&w, &lat, 0.2, &idx);
    let c = 0.9 * lat.alpha();
    for j in idx.i1..=idx.i2 {
        for k in idx.k1..=idx.k2 {
            let d = (j as f64 - k as f64 / lat.density()).abs();
            assert!(p.get(j, k).unwrap() <= 3.0 * (-c * d).exp(), "j={j} k={k}");
        }
    }
}
