mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use jcm_core::negativity::{block_coefficients, negativity_value};
use jcm_core::oracle::{negativity_brute, negativity_brute_detail};
use jcm_core::{
    assemble_density, negativity, negativity_series, BasisState, ModelParams, ThermalDistribution,
};
use proptest::prelude::*;

use common::{caption_params, fig2_params};

fn params_strategy() -> impl Strategy<Value = ModelParams> {
    (
        -5.0f64..5.0,
        0.0f64..2.5,
        1u32..4,
        1u32..4,
        0.0f64..=1.0,
        any::<bool>(),
    )
        .prop_map(
            |(detuning, mean_photons, photons, mode_halfwaves, ground_weight, motion)| {
                ModelParams {
                    detuning,
                    mean_photons,
                    photons,
                    mode_halfwaves,
                    ground_weight,
                    motion,
                    ..Default::default()
                }
            },
        )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn closed_form_matches_diagonalization(t in 0.0f64..4.0 * PI, params in params_strategy()) {
        let dist = ThermalDistribution::for_params(&params, 1e-12).unwrap();
        let closed = negativity(t, &params, &dist).unwrap();
        let brute = negativity_brute(t, &params, &dist).unwrap();
        prop_assert!((closed - brute).abs() <= 1e-10, "closed {} brute {}", closed, brute);
        prop_assert!((0.0..=0.5).contains(&closed));
    }

    #[test]
    fn detuning_sign_does_not_matter(t in 0.0f64..4.0 * PI, params in params_strategy()) {
        let dist = ThermalDistribution::for_params(&params, 1e-12).unwrap();
        let flipped = ModelParams { detuning: -params.detuning, ..params };
        let a = negativity(t, &params, &dist).unwrap();
        let b = negativity(t, &flipped, &dist).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn block_diagonals_are_density_populations(t in 0.0f64..10.0, params in params_strategy()) {
        let dist = ThermalDistribution::for_params(&params, 1e-8).unwrap();
        let rho = assemble_density(t, &params, &dist).unwrap();
        let l = params.photons as usize;
        for n in 0..rho.field_dim() {
            let b = block_coefficients(n, t, &params, &dist);
            prop_assert!((b.mu - rho.entry(BasisState::ground(n), BasisState::ground(n)).re).abs() <= 1e-13);
            prop_assert!((b.xi - rho.entry(BasisState::excited(n), BasisState::excited(n)).re).abs() <= 1e-13);
            if n + l < rho.field_dim() {
                // the transposed block couples |n,g> to |n+l,e> through <n,e|rho|n+l,g>
                let coherence = rho.entry(BasisState::excited(n), BasisState::ground(n + l));
                prop_assert!((b.phi - coherence).norm() <= 1e-13);
            }
        }
    }
}

#[test]
fn golden_block_coefficients() {
    // conjugation U rho(0) U^dag with the explicit propagator, n = 3
    let params = ModelParams {
        detuning: 1.0,
        photons: 2,
        mean_photons: 1.0,
        ground_weight: 0.2,
        motion: true,
        ..Default::default()
    };
    let dist = ThermalDistribution::for_params(&params, 1e-12).unwrap();
    let b = block_coefficients(3, 1.3, &params, &dist);
    assert_relative_eq!(b.mu, 1.585_615_126_605_664_2e-1, max_relative = 1e-13);
    assert_relative_eq!(b.xi, 3.099_944_540_388_288_6e-2, max_relative = 1e-13);
    assert_relative_eq!(b.phi.re, 5.299_355_005_237_979e-3, max_relative = 1e-12);
    assert_relative_eq!(b.phi.im, -2.239_523_963_393_609e-2, max_relative = 1e-12);
    assert_relative_eq!(b.phi.norm(), 2.301_368_987_652_703e-2, max_relative = 1e-13);
    assert_eq!(b.chi(), b.phi.conj());
}

#[test]
fn golden_negativities() {
    let fig2b = fig2_params(1, true);
    let dist = ThermalDistribution::for_params(&fig2b, 1e-12).unwrap();
    let t = PI / 2.0;
    assert_relative_eq!(
        negativity(t, &fig2b, &dist).unwrap(),
        9.838_319_786_073_968e-2,
        max_relative = 1e-12
    );
    assert_relative_eq!(
        negativity_brute(t, &fig2b, &dist).unwrap(),
        9.838_319_786_073_957e-2,
        max_relative = 1e-12
    );

    let detuned = ModelParams {
        detuning: 2.0,
        ..caption_params(2)
    };
    let dist = ThermalDistribution::for_params(&detuned, 1e-12).unwrap();
    assert_relative_eq!(
        negativity(1.0, &detuned, &dist).unwrap(),
        1.042_984_232_352_046_6e-1,
        max_relative = 1e-12
    );
}

#[test]
fn pure_state_rabi_oscillation() {
    let params = ModelParams::default();
    let dist = ThermalDistribution::for_params(&params, 1e-12).unwrap();
    let grid: Vec<f64> = (0..=400).map(|k| 2.0 * PI * k as f64 / 400.0).collect();
    let series = negativity_series(&grid, &params, &dist).unwrap();
    for (t, n) in grid.iter().zip(&series.values) {
        assert!((n - 0.5 * (2.0 * t).sin().abs()).abs() <= 1e-12);
    }
}

#[test]
fn both_oracle_routes_agree() {
    let params = ModelParams {
        detuning: 0.6,
        photons: 3,
        ..caption_params(3)
    };
    let dist = ThermalDistribution::for_params(&params, 1e-12).unwrap();
    let detail = negativity_brute_detail(2.4, &params, &dist).unwrap();
    assert!((detail.value - detail.negative_sum).abs() <= 1e-11);
    assert!(detail.spectrum.min() < 0.0);
}

#[test]
fn product_states_are_separable() {
    for cg in [0.0, 1.0] {
        let params = ModelParams {
            ground_weight: cg,
            ..caption_params(1)
        };
        let dist = ThermalDistribution::for_params(&params, 1e-12).unwrap();
        // at g t = 2 pi / p the motional coupling integral vanishes
        let v = negativity_value(2.0 * PI, &params, &dist).unwrap();
        assert!(v.value <= 1e-9);
    }
    let params = caption_params(1);
    let dist = ThermalDistribution::for_params(&params, 1e-12).unwrap();
    assert_eq!(negativity(0.0, &params, &dist).unwrap(), 0.0);
}

#[test]
fn hotter_field_entangles_less() {
    let peak = |m: f64| {
        let params = ModelParams {
            mean_photons: m,
            ..caption_params(2)
        };
        let dist = ThermalDistribution::for_params(&params, 1e-12).unwrap();
        let grid: Vec<f64> = (0..=800).map(|k| 4.0 * PI * k as f64 / 800.0).collect();
        negativity_series(&grid, &params, &dist)
            .unwrap()
            .values
            .into_iter()
            .fold(0.0, f64::max)
    };
    let peaks: Vec<f64> = [0.5, 1.0, 2.0].into_iter().map(peak).collect();
    assert!(peaks.windows(2).all(|w| w[1] < w[0]), "{peaks:?}");
}

#[test]
fn bad_inputs_are_rejected() {
    let params = ModelParams {
        ground_weight: 1.5,
        ..Default::default()
    };
    let dist = ThermalDistribution::new(0.0, 1e-12, 1).unwrap();
    assert!(negativity(1.0, &params, &dist).is_err());
    let ok = ModelParams::default();
    assert!(negativity_series(&[1.0, 0.5], &ok, &dist).is_err());
    assert!(negativity_series(&[], &ok, &dist).is_err());
    let mismatched = ThermalDistribution::new(2.0, 1e-12, 1).unwrap();
    assert!(negativity(1.0, &ok, &mismatched).is_err());
}
