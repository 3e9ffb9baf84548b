//! Model parameters and the scalar "dressed" quantities derived from them.

use crate::error::{invalid, Error, Result};
use crate::theta::sin_power_integral;

/// Physical knobs of the moving multi-photon Jaynes-Cummings model.
///
/// `detuning` and `coupling` are angular frequencies; with the default
/// `coupling = 1` all times are the scaled time `g t`. The excited-state
/// weight is always `1 - ground_weight`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    /// `omega_0 - l * omega`.
    pub detuning: f64,
    pub coupling: f64,
    /// Photons exchanged per transition, `l >= 1`.
    pub photons: u32,
    /// Half-wavelengths of the cavity mode, `p >= 1`.
    pub mode_halfwaves: u32,
    pub motion: bool,
    pub mean_photons: f64,
    pub ground_weight: f64,
    /// Only enters the dynamics through the global phase of the propagator.
    pub field_frequency: Option<f64>,
    pub temperature: Option<f64>,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            detuning: 0.0,
            coupling: 1.0,
            photons: 1,
            mode_halfwaves: 1,
            motion: false,
            mean_photons: 0.0,
            ground_weight: 0.0,
            field_frequency: None,
            temperature: None,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        if !self.detuning.is_finite() {
            return Err(invalid("delta", "must be finite"));
        }
        if !(self.coupling.is_finite() && self.coupling > 0.0) {
            return Err(invalid(
                "g",
                format!("must be positive, got {}", self.coupling),
            ));
        }
        if self.photons < 1 {
            return Err(invalid("l", "must be at least 1"));
        }
        if self.mode_halfwaves < 1 {
            return Err(invalid("p", "must be at least 1"));
        }
        if !(self.mean_photons.is_finite() && self.mean_photons >= 0.0) {
            return Err(invalid(
                "m",
                format!("must be >= 0, got {}", self.mean_photons),
            ));
        }
        if !(0.0..=1.0).contains(&self.ground_weight) {
            return Err(invalid(
                "cg",
                format!("must lie in [0, 1], got {}", self.ground_weight),
            ));
        }
        Ok(())
    }

    pub fn excited_weight(&self) -> f64 {
        1.0 - self.ground_weight
    }

    /// Sets the thermal mean from the Bose occupation of a mode at `omega`, `temperature`.
    pub fn with_temperature(mut self, omega: f64, temperature: f64) -> Result<Self> {
        self.mean_photons = mean_from_temperature(omega, temperature)?;
        self.field_frequency = Some(omega);
        self.temperature = Some(temperature);
        Ok(self)
    }

    /// Cavity mode envelope `[f(v t)]^l` with `v = g L / pi`, i.e. `sin^l(p g t)`.
    pub fn envelope(&self, t: f64) -> f64 {
        if self.motion {
            (self.mode_halfwaves as f64 * self.coupling * t)
                .sin()
                .powi(self.photons as i32)
        } else {
            1.0
        }
    }
}

/// Probability of `n` photons in a thermal mode with mean `m`: `m^n / (m+1)^(n+1)`.
pub fn thermal_weight(n: usize, m: f64) -> Result<f64> {
    if !(m.is_finite() && m >= 0.0) {
        return Err(invalid("m", format!("must be >= 0, got {m}")));
    }
    Ok(weight_unchecked(n, m))
}

fn weight_unchecked(n: usize, m: f64) -> f64 {
    let ratio = m / (m + 1.0);
    ratio.powi(n as i32) / (m + 1.0)
}

/// Bose occupation `1 / (exp(omega / T) - 1)`.
pub fn mean_from_temperature(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(invalid("omega", format!("must be positive, got {omega}")));
    }
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(invalid("T", format!("must be positive, got {temperature}")));
    }
    Ok(1.0 / (omega / temperature).exp_m1())
}

/// Smallest `N_max >= l` whose geometric tail `(m/(m+1))^(N_max+1)` is at most `eps`.
pub fn truncation_level(m: f64, eps: f64, l: u32) -> Result<usize> {
    if !(m.is_finite() && m >= 0.0) {
        return Err(invalid("m", format!("must be >= 0, got {m}")));
    }
    if !(0.0..1.0).contains(&eps) {
        return Err(invalid(
            "tail_eps",
            format!("must lie in [0, 1), got {eps}"),
        ));
    }
    let l = l as usize;
    if m == 0.0 {
        return Ok(l);
    }
    if eps == 0.0 {
        return Err(Error::NoFiniteTruncation(eps));
    }
    let ratio = m / (m + 1.0);
    let estimate = (eps.ln() / ratio.ln()).ceil().max(1.0) as usize - 1;
    let mut n = estimate.saturating_sub(2);
    while ratio.powi(n as i32 + 1) > eps {
        n += 1;
    }
    Ok(n.max(l))
}

/// Falling factorial `n! / (n-l)!`, zero when fewer than `l` photons are present.
pub fn fock_factor(n: usize, l: u32) -> f64 {
    let l = l as usize;
    if n < l {
        return 0.0;
    }
    ((n - l + 1)..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Running integral of the motional envelope, `int_0^t sin^l(p g t') dt'`,
/// or `t` itself when the atomic motion is neglected.
pub fn theta(t: f64, params: &ModelParams) -> f64 {
    if !params.motion {
        return t;
    }
    let rate = params.mode_halfwaves as f64 * params.coupling;
    sin_power_integral(params.photons, rate * t) / rate
}

/// `g theta(t) / t`, with the `t -> 0` limit `g [f(0)]^l`.
pub fn effective_coupling(t: f64, params: &ModelParams) -> f64 {
    if t == 0.0 {
        params.coupling * params.envelope(0.0)
    } else {
        params.coupling * theta(t, params) / t
    }
}

/// Thermal Fock weights truncated at `n_max`, with the exact discarded tail.
#[derive(Clone, Debug, PartialEq)]
pub struct ThermalDistribution {
    mean: f64,
    n_max: usize,
    weights: Vec<f64>,
    tail_bound: f64,
}

impl ThermalDistribution {
    /// Truncates at [`truncation_level`]`(m, eps, l)`.
    pub fn new(mean: f64, eps: f64, photons: u32) -> Result<Self> {
        let n_max = truncation_level(mean, eps, photons)?;
        Self::with_n_max(mean, n_max)
    }

    pub fn for_params(params: &ModelParams, eps: f64) -> Result<Self> {
        params.validate()?;
        Self::new(params.mean_photons, eps, params.photons)
    }

    pub fn with_n_max(mean: f64, n_max: usize) -> Result<Self> {
        if !(mean.is_finite() && mean >= 0.0) {
            return Err(invalid("m", format!("must be >= 0, got {mean}")));
        }
        let weights = (0..=n_max).map(|n| weight_unchecked(n, mean)).collect();
        // 1 - sum_{n <= N} P_n = (m/(m+1))^(N+1)
        let tail_bound = (mean / (mean + 1.0)).powi(n_max as i32 + 1);
        Ok(Self {
            mean,
            n_max,
            weights,
            tail_bound,
        })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// `P_n`, zero beyond the truncation.
    pub fn weight(&self, n: usize) -> f64 {
        self.weights.get(n).copied().unwrap_or(0.0)
    }

    /// `P_{n - shift}`, zero when `n < shift`.
    pub(crate) fn weight_below(&self, n: usize, shift: usize) -> f64 {
        n.checked_sub(shift).map_or(0.0, |k| self.weight(k))
    }

    pub(crate) fn check_against(&self, params: &ModelParams) -> Result<()> {
        if self.mean != params.mean_photons {
            return Err(Error::InconsistentDistribution {
                distribution: self.mean,
                model: params.mean_photons,
            });
        }
        if self.n_max < params.photons as usize {
            return Err(Error::DimensionMismatch {
                expected: params.photons as usize,
                got: self.n_max,
            });
        }
        Ok(())
    }
}

/// Rabi frequency and mixing angles of the sector holding `|n, g>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DressedQuantities {
    pub theta: f64,
    pub effective_coupling: f64,
    pub fock_factor: f64,
    /// `lambda_n = sqrt(delta^2 + 4 g~^2 F(n))`.
    pub rabi: f64,
    /// `lambda_n t`, evaluated as `sqrt(delta^2 t^2 + 4 g^2 theta^2 F(n))`.
    pub rabi_phase: f64,
    pub cos2a: f64,
    pub sin2a: f64,
}

impl DressedQuantities {
    /// `(sin(lambda t / 2), cos(lambda t / 2))`.
    pub fn half_phase(&self) -> (f64, f64) {
        (0.5 * self.rabi_phase).sin_cos()
    }
}

pub fn dressed(n: usize, t: f64, params: &ModelParams) -> DressedQuantities {
    let f = fock_factor(n, params.photons);
    let sqrt_f = f.sqrt();
    let delta = params.detuning;
    let g_eff = effective_coupling(t, params);
    let th = theta(t, params);

    let (rabi, rabi_phase, cos2a, sin2a) = if t > 0.0 {
        let dt = delta * t;
        let coupling_phase = 2.0 * params.coupling * th * sqrt_f;
        let phase = dt.hypot(coupling_phase);
        if phase > 0.0 {
            (phase / t, phase, dt / phase, -coupling_phase / phase)
        } else {
            (0.0, 0.0, 1.0, 0.0)
        }
    } else {
        let coupling_rate = 2.0 * g_eff * sqrt_f;
        let rabi = delta.hypot(coupling_rate);
        if rabi > 0.0 {
            (rabi, 0.0, delta / rabi, -coupling_rate / rabi)
        } else {
            (0.0, 0.0, 1.0, 0.0)
        }
    };

    DressedQuantities {
        theta: th,
        effective_coupling: g_eff,
        fock_factor: f,
        rabi,
        rabi_phase,
        cos2a,
        sin2a,
    }
}
