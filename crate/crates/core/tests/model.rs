mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use jcm_core::model::{dressed, fock_factor, thermal_weight, theta, truncation_level};
use jcm_core::{ModelParams, ThermalDistribution};
use proptest::prelude::*;

use common::{integrate, theta_quadrature};

#[test]
fn quadrature_oracle_self_check() {
    assert_relative_eq!(
        integrate(|x| x.sin(), 0.0, PI, 1e-16),
        2.0,
        max_relative = 1e-14
    );
    assert_relative_eq!(
        integrate(|x| x.exp(), 0.0, 1.0, 1e-16),
        std::f64::consts::E - 1.0,
        max_relative = 1e-14
    );
}

#[test]
fn theta_matches_quadrature_on_grid() {
    let mut worst = 0.0f64;
    for l in 1..=8 {
        for p in 1..=3 {
            let params = ModelParams {
                photons: l,
                mode_halfwaves: p,
                motion: true,
                ..Default::default()
            };
            for k in 1..=48 {
                let t = 4.0 * PI * k as f64 / 48.0;
                let closed = theta(t, &params);
                let oracle = theta_quadrature(t, &params);
                // full periods for odd l land on zero, where quadrature leaves rounding noise
                let diff = (closed - oracle).abs();
                worst = worst.max(diff / oracle.abs().max(1e-300));
                assert!(
                    diff <= 1e-12 * oracle.abs() + 1e-14,
                    "l={l} p={p} t={t}: closed {closed:e} quad {oracle:e}"
                );
            }
        }
    }
    eprintln!("theta worst relative deviation {worst:e} (zeros included)");
}

#[test]
fn theta_small_times_keep_relative_accuracy() {
    for l in 1..=8 {
        let params = ModelParams {
            photons: l,
            mode_halfwaves: 2,
            motion: true,
            ..Default::default()
        };
        for &t in &[1e-3, 0.02, 0.1, 0.35] {
            let closed = theta(t, &params);
            let oracle = theta_quadrature(t, &params);
            assert_relative_eq!(closed, oracle, max_relative = 1e-12);
        }
    }
}

#[test]
fn theta_three_photons_two_halfwaves() {
    // int_0^1.7 sin^3(2s) ds, from the closed antiderivative and 40-digit quadrature
    let params = ModelParams {
        photons: 3,
        mode_halfwaves: 2,
        motion: true,
        ..Default::default()
    };
    let expected = 0.666_121_586_716_164_6;
    assert_relative_eq!(theta(1.7, &params), expected, max_relative = 1e-14);
    assert_relative_eq!(
        theta_quadrature(1.7, &params),
        expected,
        max_relative = 1e-13
    );
}

#[test]
fn truncation_by_direct_tail_evaluation() {
    for &(m, eps, l) in &[
        (1.0, 1e-12, 1u32),
        (2.0, 1e-10, 1),
        (0.5, 1e-8, 3),
        (3.0, 1e-12, 8),
        (0.01, 0.3, 2),
    ] {
        let n = truncation_level(m, eps, l).unwrap();
        let ratio: f64 = m / (m + 1.0);
        let tail = |k: usize| (0..=k).fold(1.0, |acc, _| acc * ratio);
        assert!(tail(n) <= eps);
        if n > l as usize {
            assert!(tail(n - 1) > eps, "not minimal for m={m} eps={eps}");
        }
    }
    assert_eq!(truncation_level(1.0, 1e-12, 1).unwrap(), 39);
    assert_eq!(truncation_level(2.0, 1e-10, 1).unwrap(), 56);
}

proptest! {
    #[test]
    fn dressed_invariants(
        n in 0usize..60,
        t in 0.0f64..15.0,
        delta in -6.0f64..6.0,
        l in 1u32..6,
        p in 1u32..4,
        motion in any::<bool>(),
    ) {
        let params = ModelParams { detuning: delta, photons: l, mode_halfwaves: p, motion, ..Default::default() };
        let d = dressed(n, t, &params);
        let g_eff = d.effective_coupling;
        let lambda_sq = delta * delta + 4.0 * g_eff * g_eff * d.fock_factor;
        prop_assert!((d.rabi * d.rabi - lambda_sq).abs() <= 1e-12 * lambda_sq.max(1.0) * 1.0);
        prop_assert!(d.rabi >= delta.abs() * (1.0 - 1e-15));
        prop_assert!(d.sin2a <= 0.0);
        if d.rabi > 0.0 {
            prop_assert!((d.cos2a.powi(2) + d.sin2a.powi(2) - 1.0).abs() <= 1e-14);
        }
        // half-angle identity against alpha = -arctan[(sqrt(delta^2/4 + g~^2 F) - delta/2) / (g~ sqrt F)]
        let x = g_eff * d.fock_factor.sqrt();
        if x > 1e-6 {
            // numerator rewritten as x^2 / (root + delta/2) when delta > 0 to avoid cancellation
            let root = (delta * delta / 4.0 + x * x).sqrt();
            let numerator = if delta > 0.0 { x * x / (root + delta / 2.0) } else { root - delta / 2.0 };
            let alpha = -(numerator / x).atan();
            prop_assert!(((2.0 * alpha).cos() - d.cos2a).abs() <= 1e-12);
            prop_assert!(((2.0 * alpha).sin() - d.sin2a).abs() <= 1e-12);
        }
    }

    #[test]
    fn truncated_distribution_properties(m in 0.0f64..4.0, exp in 3i32..14, l in 1u32..5) {
        let eps = 10f64.powi(-exp);
        let dist = ThermalDistribution::new(m, eps, l).unwrap();
        let sum: f64 = dist.weights().iter().sum();
        prop_assert!(sum >= 1.0 - eps - 1e-15);
        prop_assert!(dist.weights().windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(dist.weights().iter().all(|w| *w >= 0.0));
        for (n, w) in dist.weights().iter().enumerate() {
            prop_assert_eq!(*w, thermal_weight(n, m).unwrap());
        }
        let mean: f64 = dist.weights().iter().enumerate().map(|(n, w)| n as f64 * w).sum();
        let tol = eps * (dist.n_max() as f64 + 1.0) * m + 1e-13;
        // the discarded tail carries mean (N+1+m) r^(N+1)
        let discarded = (dist.n_max() as f64 + 1.0 + m) * dist.tail_bound();
        prop_assert!((mean + discarded - m).abs() <= 1e-12 * m.max(1.0));
        prop_assert!((m - mean).abs() <= tol + discarded);
    }

    #[test]
    fn fock_factor_is_falling_factorial(n in 0usize..30, l in 1u32..8) {
        let expected: f64 = if n < l as usize {
            0.0
        } else {
            (0..l as usize).map(|k| (n - k) as f64).product()
        };
        prop_assert_eq!(fock_factor(n, l), expected);
    }
}
