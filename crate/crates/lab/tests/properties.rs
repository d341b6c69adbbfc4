//! Property tests for the exact spectral identities and the finite-sequence
//! norm comparisons.

use num_complex::Complex64;
use proptest::prelude::*;

use smoothness_lab::grid::Grid;
use smoothness_lab::harness::{weighted_tail_sum, LevelSequence, TailExponent, TailMode, XiWeight};
use smoothness_lab::multiplier::apply_mean;
use smoothness_lab::spectral::{analyze, reanalyze_error, SpectralRep};
use smoothness_lab::spline::pvariation_step;
use smoothness_lab::window::{build_window, WindowParams, WINDOW_NAMES};

fn arb_rep(max_k: usize) -> impl Strategy<Value = SpectralRep> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2 * max_k + 1).prop_map(move |parts| {
        let mut rep = SpectralRep::zero(max_k);
        for (i, (re, im)) in parts.into_iter().enumerate() {
            rep.set(i as i64 - max_k as i64, Complex64::new(re, im));
        }
        rep
    })
}

fn arb_window_spec() -> impl Strategy<Value = (usize, f64, f64, bool)> {
    (
        0..WINDOW_NAMES.len(),
        0.5f64..3.0,
        0.5f64..3.0,
        prop::bool::ANY,
    )
}

fn make_window(
    (idx, beta, delta, smooth): (usize, f64, f64, bool),
) -> std::sync::Arc<dyn smoothness_lab::window::Window> {
    let params = WindowParams {
        beta: Some(beta),
        delta: Some(delta),
        profile: Some(if smooth {
            "smooth".into()
        } else {
            "linear".into()
        }),
    };
    build_window(WINDOW_NAMES[idx], &params).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip_is_the_identity_on_bands(rep in arb_rep(9)) {
        let err = reanalyze_error(&rep, Grid::new(64).unwrap()).unwrap();
        prop_assert!(err < 1e-11, "round-trip error {err}");
    }

    #[test]
    fn translation_is_a_group_action(rep in arb_rep(6), h1 in -3.0f64..3.0, h2 in -3.0f64..3.0) {
        let chained = rep.translate(h1).translate(h2);
        let direct = rep.translate(h1 + h2);
        for k in -6i64..=6 {
            prop_assert!((chained.coeff(k) - direct.coeff(k)).norm() < 1e-12);
        }
    }

    #[test]
    fn means_commute_with_translation(
        rep in arb_rep(8),
        h in -3.0f64..3.0,
        n in 1usize..12,
        spec in arb_window_spec(),
    ) {
        let window = make_window(spec);
        let a = apply_mean(&rep.translate(h), window.as_ref(), n).unwrap();
        let b = apply_mean(&rep, window.as_ref(), n).unwrap().translate(h);
        for k in -(n as i64)..=n as i64 {
            prop_assert!((a.coeff(k) - b.coeff(k)).norm() < 1e-12);
        }
    }

    #[test]
    fn windows_contract_every_band(rep in arb_rep(8), n in 1usize..12, spec in arb_window_spec()) {
        // |psi| <= 1 on the catalogue, so means never grow a coefficient
        let window = make_window(spec);
        let out = apply_mean(&rep, window.as_ref(), n).unwrap();
        for (k, c) in out.iter() {
            prop_assert!(c.norm() <= rep.coeff(k).norm() + 1e-15);
        }
    }

    #[test]
    fn tail_sums_order_by_exponent(
        values in prop::collection::vec(0.0f64..10.0, 8),
        q_lo in 1.0f64..2.0,
        bump in 0.1f64..6.0,
        alpha in 0.25f64..2.0,
    ) {
        // same weighted terms, larger exponent gives the smaller sum
        let q_hi = q_lo + bump;
        let seq = LevelSequence {
            alpha,
            entries: values.into_iter().enumerate().collect(),
            saturated_from: None,
            stalled_levels: vec![],
        };
        let hi = weighted_tail_sum(&seq, TailExponent::Finite(q_hi), alpha, 0, XiWeight::None, TailMode::Truncate);
        let lo = weighted_tail_sum(&seq, TailExponent::Finite(q_lo), alpha, 0, XiWeight::None, TailMode::Truncate);
        let sup = weighted_tail_sum(&seq, TailExponent::Sup, alpha, 0, XiWeight::None, TailMode::Truncate);
        prop_assert!(hi <= lo * (1.0 + 1e-12));
        prop_assert!(sup <= hi * (1.0 + 1e-12));
    }

    #[test]
    fn step_variation_is_homogeneous_and_monotone(
        jumps in prop::collection::vec(-5.0f64..5.0, 0..12),
        scale in 0.0f64..4.0,
        p in 1.0f64..6.0,
    ) {
        let base = pvariation_step(&jumps, p).unwrap();
        let scaled: Vec<f64> = jumps.iter().map(|j| scale * j).collect();
        prop_assert!((pvariation_step(&scaled, p).unwrap() - scale * base).abs() <= 1e-9 * (1.0 + base));
        // dropping a jump never increases the variation
        if !jumps.is_empty() {
            let fewer = pvariation_step(&jumps[1..], p).unwrap();
            prop_assert!(fewer <= base + 1e-12);
        }
    }

    #[test]
    fn parseval_holds_for_random_bands(rep in arb_rep(10)) {
        let grid = Grid::new(64).unwrap();
        let quad = smoothness_lab::norm::lp_norm(
            &rep.synthesize(grid).unwrap(),
            smoothness_lab::norm::NormExponent::new(2.0).unwrap(),
        );
        let parseval = rep.l2_norm();
        prop_assert!((quad - parseval).abs() <= 1e-10 * (1.0 + parseval));
    }

    #[test]
    fn analysis_is_linear(a in arb_rep(7), b in arb_rep(7), s in -2.0f64..2.0) {
        let grid = Grid::new(64).unwrap();
        let lhs = analyze(
            &a.add(&b.scale(s)).synthesize(grid).unwrap(),
        );
        let rhs = analyze(&a.synthesize(grid).unwrap())
            .add(&analyze(&b.synthesize(grid).unwrap()).scale(s));
        for k in -7i64..=7 {
            prop_assert!((lhs.coeff(k) - rhs.coeff(k)).norm() < 1e-11);
        }
    }
}
