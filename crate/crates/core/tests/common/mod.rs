//! Test-only oracles shared by the integration tests.
#![allow(dead_code, clippy::excessive_precision)]

use jcm_core::ModelParams;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn kronrod15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (value, err) = kronrod15(f, a, b);
    // below a few ulps of the panel value the error estimate is rounding noise
    if err <= tol.max(8.0 * f64::EPSILON * value.abs()) || depth == 0 {
        return value;
    }
    let mid = 0.5 * (a + b);
    adaptive(f, a, mid, 0.5 * tol, depth - 1) + adaptive(f, mid, b, 0.5 * tol, depth - 1)
}

/// Adaptive Gauss-Kronrod (7, 15) quadrature to an absolute tolerance.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    adaptive(&f, a, b, tol, 30)
}

/// `int_0^t [sin(p g t')]^l dt'` by quadrature.
pub fn theta_quadrature(t: f64, params: &ModelParams) -> f64 {
    let rate = params.mode_halfwaves as f64 * params.coupling;
    let l = params.photons as i32;
    integrate(|s| (rate * s).sin().powi(l), 0.0, t, 1e-17)
}

/// Strict local maxima of a sampled curve.
pub fn count_local_maxima(values: &[f64]) -> usize {
    values
        .windows(3)
        .filter(|w| w[1] > w[0] && w[1] >= w[2])
        .count()
}

pub fn fig2_params(p: u32, motion: bool) -> ModelParams {
    ModelParams {
        mean_photons: 1.0,
        detuning: 0.0,
        photons: 1,
        ground_weight: 0.2,
        mode_halfwaves: p,
        motion,
        ..Default::default()
    }
}

pub fn caption_params(photons: u32) -> ModelParams {
    ModelParams {
        photons,
        ..fig2_params(1, true)
    }
}
