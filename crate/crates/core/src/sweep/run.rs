//! Sweep engine: evaluates grid points on a worker pool and restores input
//! order before formatting, so output never depends on the pool size.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;

use super::config::{Mode, SweepParam, SweepSpec};
use super::format::g12;
use crate::error::{Error, Result};
use crate::model::{ModelParams, ThermalDistribution};
use crate::negativity::negativity_value;
use crate::oracle::{verify, VerifyGrid};

/// `(g t / pi, t)` pairs evenly spaced over `[0, gt_max_over_pi * pi / g]`.
pub fn time_grid(gt_max_over_pi: f64, points: usize, coupling: f64) -> Vec<(f64, f64)> {
    let last = (points.max(2) - 1) as f64;
    (0..points.max(2))
        .map(|i| {
            let scaled = gt_max_over_pi * i as f64 / last;
            (scaled, scaled * PI / coupling)
        })
        .collect()
}

fn header(spec: &SweepSpec, out: &mut String) {
    let b = &spec.base;
    let _ = writeln!(out, "# jcm {}", crate::VERSION);
    let _ = writeln!(out, "# mode = {}", spec.mode.name());
    if let Some(preset) = spec.preset {
        let _ = writeln!(out, "# preset = {preset}");
    }
    let _ = writeln!(out, "# delta = {}", g12(b.detuning));
    let _ = writeln!(out, "# g = {}", g12(b.coupling));
    let _ = writeln!(out, "# m = {}", g12(b.mean_photons));
    let _ = writeln!(out, "# l = {}", b.photons);
    let _ = writeln!(out, "# p = {}", b.mode_halfwaves);
    let _ = writeln!(out, "# cg = {}", g12(b.ground_weight));
    let _ = writeln!(out, "# motion = {}", b.motion);
    if let Some((param, values)) = &spec.sweep {
        let list: Vec<String> = values.iter().map(|v| g12(*v)).collect();
        let _ = writeln!(out, "# sweep_param = {}", param.key());
        let _ = writeln!(out, "# sweep_values = {}", list.join(","));
    }
    let _ = writeln!(out, "# gt_max_over_pi = {}", g12(spec.gt_max_over_pi));
    let _ = writeln!(out, "# points = {}", spec.points);
    let _ = writeln!(out, "# tail_eps = {}", g12(spec.tail_eps));
}

fn sweep_targets(spec: &SweepSpec) -> Result<Vec<(f64, ModelParams, ThermalDistribution)>> {
    let (param, values): (SweepParam, &[f64]) = match &spec.sweep {
        Some((param, values)) => (*param, values),
        None => {
            return Err(Error::Config(
                "sweep2d requires sweep_param and sweep_values".into(),
            ))
        }
    };
    values
        .iter()
        .map(|&v| {
            let params = param.apply(&spec.base, v).map_err(Error::Config)?;
            let dist = ThermalDistribution::for_params(&params, spec.tail_eps)?;
            Ok((v, params, dist))
        })
        .collect()
}

/// Series CSV: `gt_over_pi,negativity`.
pub fn series_csv(spec: &SweepSpec) -> Result<String> {
    let dist = ThermalDistribution::for_params(&spec.base, spec.tail_eps)?;
    let grid = time_grid(spec.gt_max_over_pi, spec.points, spec.base.coupling);
    let values = grid
        .par_iter()
        .map(|&(_, t)| negativity_value(t, &spec.base, &dist))
        .collect::<Result<Vec<_>>>()?;

    let mut out = String::new();
    header(spec, &mut out);
    let _ = writeln!(out, "# n_max = {}", dist.n_max());
    let clamped = values.iter().filter(|v| v.clamped).count();
    let _ = writeln!(out, "# clamped_samples = {clamped}");
    out.push_str("gt_over_pi,negativity\n");
    for ((scaled, _), v) in grid.iter().zip(&values) {
        let _ = writeln!(out, "{},{}", g12(*scaled), g12(v.value));
    }
    Ok(out)
}

/// Long-format CSV `sweep_value,gt_over_pi,negativity`, row-major by sweep value.
pub fn sweep2d_csv(spec: &SweepSpec) -> Result<String> {
    let targets = sweep_targets(spec)?;
    let grid = time_grid(spec.gt_max_over_pi, spec.points, spec.base.coupling);
    let jobs: Vec<(usize, usize)> = (0..targets.len())
        .flat_map(|s| (0..grid.len()).map(move |i| (s, i)))
        .collect();
    let values = jobs
        .par_iter()
        .map(|&(s, i)| {
            let (_, params, dist) = &targets[s];
            negativity_value(grid[i].1, params, dist)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut out = String::new();
    header(spec, &mut out);
    let key = spec.sweep.as_ref().map_or("", |(p, _)| p.key());
    for (v, _, dist) in &targets {
        let _ = writeln!(out, "# n_max[{key}={}] = {}", g12(*v), dist.n_max());
    }
    let clamped = values.iter().filter(|v| v.clamped).count();
    let _ = writeln!(out, "# clamped_samples = {clamped}");
    out.push_str("sweep_value,gt_over_pi,negativity\n");
    for (&(s, i), v) in jobs.iter().zip(&values) {
        let _ = writeln!(
            out,
            "{},{},{}",
            g12(targets[s].0),
            g12(grid[i].0),
            g12(v.value)
        );
    }
    Ok(out)
}

/// Result of one CLI run.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub text: String,
    /// Where the text was written; `None` means the caller should print it.
    pub path: Option<PathBuf>,
    /// `Some(false)` when verification found a tolerance violation.
    pub verified: Option<bool>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> u8 {
        match self.verified {
            Some(false) => 2,
            _ => 0,
        }
    }
}

fn execute(spec: &SweepSpec) -> Result<(String, Option<bool>)> {
    match spec.mode {
        Mode::Series => Ok((series_csv(spec)?, None)),
        Mode::Sweep2d => Ok((sweep2d_csv(spec)?, None)),
        Mode::Verify => {
            let grid = VerifyGrid {
                times: spec.points,
                gt_max: spec.gt_max_over_pi * PI,
                tail_eps: spec.tail_eps,
                ..VerifyGrid::default()
            };
            let report = verify(&grid)?;
            Ok((report.render(), Some(report.passed())))
        }
    }
}

/// Runs `spec`, on a dedicated pool of `threads` workers when given, and
/// writes the result to `spec.output` if set.
pub fn run(spec: &SweepSpec, threads: Option<usize>) -> Result<RunOutcome> {
    let (text, verified) = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?
            .install(|| execute(spec))?,
        None => execute(spec)?,
    };
    if let Some(path) = &spec.output {
        std::fs::write(path, &text).map_err(|source| Error::Output {
            path: path.clone(),
            source,
        })?;
    }
    Ok(RunOutcome {
        text,
        path: spec.output.clone(),
        verified,
    })
}
