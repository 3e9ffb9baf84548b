//! Time-ordered propagator of the genuinely time-dependent Hamiltonian
//! `H(t) = omega_0 S_z + omega a^dag a + g [f(v t)]^l (a^dag^l S_- + a^l S_+)`,
//! integrated as an ordered product of midpoint short-time exponentials.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::density::{sectors, JointDensityMatrix};
use crate::error::Result;
use crate::model::{fock_factor, ModelParams, ThermalDistribution};

/// `exp(-i h dt)` for the real symmetric `h = [[a, b], [b, d]]`.
fn step_exponential(a: f64, b: f64, d: f64, dt: f64) -> [[C64; 2]; 2] {
    let mean = 0.5 * (a + d);
    let half_gap = 0.5 * (a - d);
    let r = half_gap.hypot(b);
    let phase = C64::from_polar(1.0, -mean * dt);
    let (sin, cos) = (r * dt).sin_cos();
    // sin(r dt) / r, finite as r -> 0
    let sinc = if r == 0.0 { dt } else { sin / r };
    let i = C64::new(0.0, 1.0);
    [
        [phase * (cos - i * sinc * half_gap), phase * (-i * sinc * b)],
        [phase * (-i * sinc * b), phase * (cos + i * sinc * half_gap)],
    ]
}

fn mul2(x: &[[C64; 2]; 2], y: &[[C64; 2]; 2]) -> [[C64; 2]; 2] {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = x[r][0] * y[0][c] + x[r][1] * y[1][c];
        }
    }
    out
}

/// Midpoint-rule ordered product `U_steps ... U_1` on `field_dim` Fock levels.
///
/// Uses the field frequency only through diagonal energies; `omega_0` is
/// `delta + l omega`.
pub fn time_ordered_propagator(
    t: f64,
    params: &ModelParams,
    steps: usize,
    field_dim: usize,
) -> DMatrix<C64> {
    let steps = steps.max(1);
    let dim = 2 * field_dim;
    let l = params.photons;
    let omega = params.field_frequency.unwrap_or(0.0);
    let omega0 = params.detuning + l as f64 * omega;
    let dt = t / steps as f64;
    let rate = params.mode_halfwaves as f64 * params.coupling;

    let envelope: Vec<f64> = (0..steps)
        .map(|k| {
            let mid = (k as f64 + 0.5) * dt;
            if params.motion {
                (rate * mid).sin().powi(l as i32)
            } else {
                1.0
            }
        })
        .collect();

    let mut u = DMatrix::<C64>::zeros(dim, dim);
    for sector in sectors(field_dim, l) {
        let n = sector.excitation;
        // e: |n - l, e>, g: |n, g>
        let energy_e = 0.5 * omega0 + omega * (n as f64 - l as f64);
        let energy_g = -0.5 * omega0 + omega * n as f64;
        match (sector.excited, sector.ground) {
            (Some(e), Some(g)) => {
                let amplitude = params.coupling * fock_factor(n, l).sqrt();
                let mut acc = [
                    [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
                    [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
                ];
                for f in &envelope {
                    let step = step_exponential(energy_e, amplitude * f, energy_g, dt);
                    acc = mul2(&step, &acc);
                }
                u[(e, e)] = acc[0][0];
                u[(e, g)] = acc[0][1];
                u[(g, e)] = acc[1][0];
                u[(g, g)] = acc[1][1];
            }
            (None, Some(g)) => u[(g, g)] = C64::from_polar(1.0, -energy_g * t),
            (Some(e), None) => u[(e, e)] = C64::from_polar(1.0, -energy_e * t),
            (None, None) => {}
        }
    }
    u
}

/// Richardson-extrapolated propagator with its convergence record.
#[derive(Clone, Debug)]
pub struct ConvergedPropagator {
    pub matrix: DMatrix<C64>,
    /// Step count of the finer raw product in the last extrapolation.
    pub steps: usize,
    /// Max entrywise change between the last two extrapolated estimates.
    pub change: f64,
    pub converged: bool,
}

/// Step-doubles from `start_steps` until successive Richardson estimates
/// `(4 U_2n - U_n) / 3` change by less than `tolerance` entrywise.
pub fn converged_propagator(
    t: f64,
    params: &ModelParams,
    field_dim: usize,
    tolerance: f64,
    start_steps: usize,
    max_steps: usize,
) -> ConvergedPropagator {
    let mut steps = start_steps.max(1);
    let mut coarse = time_ordered_propagator(t, params, steps, field_dim);
    let mut previous: Option<DMatrix<C64>> = None;
    loop {
        let fine = time_ordered_propagator(t, params, 2 * steps, field_dim);
        let extrapolated = (&fine * C64::new(4.0, 0.0) - &coarse).unscale(3.0);
        steps *= 2;
        if let Some(prev) = &previous {
            let change = max_entry_diff(prev, &extrapolated);
            if change < tolerance || 2 * steps > max_steps {
                return ConvergedPropagator {
                    matrix: extrapolated,
                    steps,
                    change,
                    converged: change < tolerance,
                };
            }
        }
        previous = Some(extrapolated);
        coarse = fine;
    }
}

pub(crate) fn max_entry_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0f64, |acc, (x, y)| acc.max((x - y).norm()))
}

/// `U rho(0) U^dag` with the initial product state of the thermal field and
/// mixed atom, for any propagator on the matching space.
pub fn propagated_density(
    propagator: &DMatrix<C64>,
    params: &ModelParams,
    dist: &ThermalDistribution,
    t: f64,
) -> Result<JointDensityMatrix> {
    let rho0 = crate::density::assemble_density(0.0, params, dist)?;
    let evolved = propagator * rho0.matrix() * propagator.adjoint();
    JointDensityMatrix::from_matrix(evolved, params.photons, t)
}
