//! Closed form against oracle over a parameter grid, with a text report.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::density::propagator_matrix;
use crate::error::Result;
use crate::model::{ModelParams, ThermalDistribution};
use crate::negativity::negativity;
use crate::sweep::format::g12;

use super::negativity_brute;
use super::propagator::{converged_propagator, max_entry_diff};

pub const NEGATIVITY_TOLERANCE: f64 = 1e-10;
pub const PROPAGATOR_TOLERANCE: f64 = 1e-6;

/// Cartesian grid of parameters and times checked by [`verify`].
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyGrid {
    pub deltas: Vec<f64>,
    pub means: Vec<f64>,
    pub photons: Vec<u32>,
    pub halfwaves: Vec<u32>,
    pub ground_weights: Vec<f64>,
    pub motions: Vec<bool>,
    /// Times per parameter combination, evenly spaced in `(0, gt_max]`.
    pub times: usize,
    pub gt_max: f64,
    pub tail_eps: f64,
}

impl Default for VerifyGrid {
    fn default() -> Self {
        Self {
            deltas: vec![0.0, 1.0, 5.0],
            means: vec![0.5, 1.0, 2.0],
            photons: vec![1, 2, 3],
            halfwaves: vec![1, 3],
            ground_weights: vec![0.0, 0.2, 0.5, 1.0],
            motions: vec![true, false],
            times: 20,
            gt_max: 4.0 * PI,
            tail_eps: 1e-12,
        }
    }
}

impl VerifyGrid {
    /// Every parameter combination, with `coupling = 1`.
    pub fn params(&self) -> Vec<ModelParams> {
        let mut out = Vec::new();
        for &detuning in &self.deltas {
            for &mean_photons in &self.means {
                for &photons in &self.photons {
                    for &mode_halfwaves in &self.halfwaves {
                        for &ground_weight in &self.ground_weights {
                            for &motion in &self.motions {
                                out.push(ModelParams {
                                    detuning,
                                    mean_photons,
                                    photons,
                                    mode_halfwaves,
                                    ground_weight,
                                    motion,
                                    ..Default::default()
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn time_points(&self) -> Vec<f64> {
        (1..=self.times)
            .map(|k| self.gt_max * k as f64 / self.times as f64)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyPoint {
    pub params: ModelParams,
    pub t: f64,
    pub closed: f64,
    pub brute: f64,
}

impl VerifyPoint {
    pub fn error(&self) -> f64 {
        (self.closed - self.brute).abs()
    }
}

/// Closed-form propagator against the converged time-ordered product.
#[derive(Clone, Debug, PartialEq)]
pub struct PropagatorCheck {
    pub params: ModelParams,
    pub t: f64,
    pub max_deviation: f64,
    /// `false` for the moving, detuned regime where only a diagnostic is reported.
    pub asserted: bool,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub points: Vec<VerifyPoint>,
    pub propagator: Vec<PropagatorCheck>,
}

impl VerifyReport {
    pub fn worst(&self) -> Option<&VerifyPoint> {
        self.points
            .iter()
            .max_by(|a, b| a.error().total_cmp(&b.error()))
    }

    pub fn max_error(&self) -> f64 {
        self.worst().map_or(0.0, VerifyPoint::error)
    }

    pub fn passed(&self) -> bool {
        self.max_error() <= NEGATIVITY_TOLERANCE
            && self
                .propagator
                .iter()
                .filter(|c| c.asserted)
                .all(|c| c.max_deviation <= PROPAGATOR_TOLERANCE)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# jcm verify {}", crate::VERSION);
        let _ = writeln!(
            out,
            "# negativity tolerance = {}",
            g12(NEGATIVITY_TOLERANCE)
        );
        let _ = writeln!(
            out,
            "delta,m,l,p,cg,motion,gt_over_pi,closed,oracle,abs_error"
        );
        let worst = self.worst().map(|w| w as *const VerifyPoint);
        for point in &self.points {
            let p = &point.params;
            let _ = write!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                g12(p.detuning),
                g12(p.mean_photons),
                p.photons,
                p.mode_halfwaves,
                g12(p.ground_weight),
                p.motion,
                g12(p.coupling * point.t / PI),
                g12(point.closed),
                g12(point.brute),
                g12(point.error())
            );
            if worst == Some(point as *const VerifyPoint) {
                out.push_str("  <-- worst");
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "# propagator: closed form vs time-ordered product (tolerance {})",
            g12(PROPAGATOR_TOLERANCE)
        );
        for c in &self.propagator {
            let _ = writeln!(
                out,
                "# delta={} l={} motion={} gt={} max_entry_deviation={} {}",
                g12(c.params.detuning),
                c.params.photons,
                c.params.motion,
                g12(c.t * c.params.coupling),
                g12(c.max_deviation),
                if c.asserted { "asserted" } else { "reported" }
            );
        }
        let _ = writeln!(out, "# points = {}", self.points.len());
        let _ = writeln!(out, "# max_abs_error = {}", g12(self.max_error()));
        let _ = writeln!(
            out,
            "# result = {}",
            if self.passed() { "PASS" } else { "FAIL" }
        );
        out
    }
}

/// Propagator comparisons: static and resonant-moving cases are asserted,
/// detuned-moving cases are reported.
pub fn propagator_checks(t: f64, field_dim: usize) -> Vec<PropagatorCheck> {
    let mut cases = Vec::new();
    for &detuning in &[0.0, 3.0] {
        for &photons in &[1, 2] {
            cases.push((
                ModelParams {
                    detuning,
                    photons,
                    ..Default::default()
                },
                true,
            ));
        }
    }
    for &photons in &[1, 2] {
        cases.push((
            ModelParams {
                photons,
                motion: true,
                ..Default::default()
            },
            true,
        ));
    }
    for &detuning in &[1.0, 2.0] {
        cases.push((
            ModelParams {
                detuning,
                photons: 2,
                motion: true,
                ..Default::default()
            },
            false,
        ));
    }
    cases
        .into_par_iter()
        .map(|(params, asserted)| {
            let closed = propagator_matrix(t, &params, field_dim);
            let oracle = converged_propagator(t, &params, field_dim, 1e-8, 64, 1 << 22);
            PropagatorCheck {
                params,
                t,
                max_deviation: max_entry_diff(&closed, &oracle.matrix),
                asserted,
            }
        })
        .collect()
}

pub fn verify(grid: &VerifyGrid) -> Result<VerifyReport> {
    let times = grid.time_points();
    let jobs: Vec<(ModelParams, f64)> = grid
        .params()
        .into_iter()
        .flat_map(|p| times.iter().map(move |&t| (p, t)))
        .collect();
    let points = jobs
        .into_par_iter()
        .map(|(params, t)| {
            let dist = ThermalDistribution::for_params(&params, grid.tail_eps)?;
            Ok(VerifyPoint {
                params,
                t,
                closed: negativity(t, &params, &dist)?,
                brute: negativity_brute(t, &params, &dist)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport {
        points,
        propagator: propagator_checks(3.0, 8),
    })
}
