//! Closed-form negativity from per-sector block coefficients.
//!
//! The partial transpose over the atom pairs `|n, g>` with `|n + l, e>`;
//! each pair contributes a 2x2 block `[[mu_n, phi_n], [chi_n, xi_{n+l}]]`
//! and the `l` excited states `|n < l, e>` stay unpaired. The trace norm is
//! the sum of the absolute block eigenvalues, so no matrix is ever built.

use std::cmp::Ordering;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{dressed, DressedQuantities, ModelParams, ThermalDistribution};

const I: C64 = C64::new(0.0, 1.0);

/// Partial-transpose block data for photon number `n` at one time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockCoefficients {
    pub n: usize,
    /// Weight of `|n, g>`.
    pub mu: f64,
    /// Weight of `|n, e>`.
    pub xi: f64,
    /// Coupling between `|n, g>` and `|n + l, e>` after partial transposition.
    pub phi: C64,
}

impl BlockCoefficients {
    pub fn chi(&self) -> C64 {
        self.phi.conj()
    }
}

/// Dressed quantities for every photon number a block evaluation can touch.
struct DressedTable {
    table: Vec<DressedQuantities>,
}

impl DressedTable {
    fn new(t: f64, params: &ModelParams, dist: &ThermalDistribution) -> Self {
        let top = dist.n_max() + 2 * params.photons as usize;
        Self {
            table: (0..=top).map(|k| dressed(k, t, params)).collect(),
        }
    }

    fn get(&self, k: usize, t: f64, params: &ModelParams) -> DressedQuantities {
        self.table
            .get(k)
            .copied()
            .unwrap_or_else(|| dressed(k, t, params))
    }
}

fn populations(d: &DressedQuantities) -> (f64, f64) {
    let (s, c) = d.half_phase();
    let stay = c * c + s * s * d.cos2a * d.cos2a;
    let moved = (s * d.sin2a).powi(2);
    (stay, moved)
}

fn mu(n: usize, d_n: &DressedQuantities, params: &ModelParams, dist: &ThermalDistribution) -> f64 {
    let l = params.photons as usize;
    let (stay, moved) = populations(d_n);
    params.ground_weight * dist.weight(n) * stay
        + params.excited_weight() * dist.weight_below(n, l) * moved
}

fn xi(n: usize, d_nl: &DressedQuantities, params: &ModelParams, dist: &ThermalDistribution) -> f64 {
    let l = params.photons as usize;
    let (stay, moved) = populations(d_nl);
    params.excited_weight() * dist.weight(n) * stay
        + params.ground_weight * dist.weight(n + l) * moved
}

fn phi(
    n: usize,
    d_nl: &DressedQuantities,
    params: &ModelParams,
    dist: &ThermalDistribution,
) -> C64 {
    let l = params.photons as usize;
    let imbalance =
        params.ground_weight * dist.weight(n + l) - params.excited_weight() * dist.weight(n);
    if imbalance == 0.0 {
        return C64::new(0.0, 0.0);
    }
    let (s, c) = d_nl.half_phase();
    I * imbalance * s * d_nl.sin2a * C64::new(c, -s * d_nl.cos2a)
}

pub fn block_coefficients(
    n: usize,
    t: f64,
    params: &ModelParams,
    dist: &ThermalDistribution,
) -> BlockCoefficients {
    let l = params.photons as usize;
    let d_n = dressed(n, t, params);
    let d_nl = dressed(n + l, t, params);
    BlockCoefficients {
        n,
        mu: mu(n, &d_n, params, dist),
        xi: xi(n, &d_nl, params, dist),
        phi: phi(n, &d_nl, params, dist),
    }
}

/// Eigenvalues of `[[mu, phi], [conj(phi), xi]]`.
fn pair_eigenvalues(mu: f64, xi: f64, phi_sq: f64) -> (f64, f64) {
    let root = ((mu - xi).powi(2) + 4.0 * phi_sq).sqrt();
    (0.5 * (mu + xi + root), 0.5 * (mu + xi - root))
}

/// Trace norm of the partially transposed state, summed over `n <= N_max + l`.
pub fn trace_norm_closed(t: f64, params: &ModelParams, dist: &ThermalDistribution) -> f64 {
    let l = params.photons as usize;
    let table = DressedTable::new(t, params, dist);

    let unpaired: f64 = (0..l)
        .map(|n| xi(n, &table.get(n + l, t, params), params, dist).abs())
        .sum();
    let paired: f64 = (0..=dist.n_max() + l)
        .map(|n| {
            let mu_n = mu(n, &table.get(n, t, params), params, dist);
            let xi_nl = xi(n + l, &table.get(n + 2 * l, t, params), params, dist);
            let phi_n = phi(n, &table.get(n + l, t, params), params, dist);
            let (plus, minus) = pair_eigenvalues(mu_n, xi_nl, phi_n.norm_sqr());
            plus.abs() + minus.abs()
        })
        .sum();
    unpaired + paired
}

/// Negativity together with whether truncation noise was clamped to zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NegativityValue {
    pub value: f64,
    pub clamped: bool,
}

/// Clamps `raw = (||rho^T|| - 1) / 2` at zero when it is within the
/// truncation tolerance `2 eps + 1e-12`; anything below is an error.
pub fn clamp_negativity(raw: f64, tail_bound: f64) -> Result<NegativityValue> {
    if raw >= 0.0 {
        return Ok(NegativityValue {
            value: raw,
            clamped: false,
        });
    }
    let tolerance = 2.0 * tail_bound + 1e-12;
    if raw < -tolerance {
        return Err(Error::NegativityBelowTolerance {
            value: raw,
            tolerance,
        });
    }
    Ok(NegativityValue {
        value: 0.0,
        clamped: true,
    })
}

pub fn negativity_value(
    t: f64,
    params: &ModelParams,
    dist: &ThermalDistribution,
) -> Result<NegativityValue> {
    params.validate()?;
    dist.check_against(params)?;
    let raw = 0.5 * (trace_norm_closed(t, params, dist) - 1.0);
    clamp_negativity(raw, dist.tail_bound())
}

/// `(||rho^T|| - 1) / 2` from the closed-form trace norm.
pub fn negativity(t: f64, params: &ModelParams, dist: &ThermalDistribution) -> Result<f64> {
    negativity_value(t, params, dist).map(|v| v.value)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Oracle,
}

/// Negativity sampled on a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct NegativitySeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub method: Method,
    pub params: ModelParams,
    /// Number of samples whose truncation noise was clamped to zero.
    pub clamped: usize,
}

impl NegativitySeries {
    /// `g t` for every sample.
    pub fn scaled_times(&self) -> Vec<f64> {
        self.times
            .iter()
            .map(|t| t * self.params.coupling)
            .collect()
    }
}

pub fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    if !grid[0].is_finite() || grid[0] < 0.0 {
        return Err(Error::InvalidGrid(format!(
            "grid must start at t >= 0, got {}",
            grid[0]
        )));
    }
    if let Some(w) = grid
        .windows(2)
        .find(|w| w[1].partial_cmp(&w[0]) != Some(Ordering::Greater) || !w[1].is_finite())
    {
        return Err(Error::InvalidGrid(format!(
            "not strictly increasing at {} -> {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

pub fn negativity_series(
    grid: &[f64],
    params: &ModelParams,
    dist: &ThermalDistribution,
) -> Result<NegativitySeries> {
    check_grid(grid)?;
    let mut values = Vec::with_capacity(grid.len());
    let mut clamped = 0;
    for &t in grid {
        let v = negativity_value(t, params, dist)?;
        clamped += v.clamped as usize;
        values.push(v.value);
    }
    Ok(NegativitySeries {
        times: grid.to_vec(),
        values,
        method: Method::ClosedForm,
        params: *params,
        clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn vacuum_rabi() -> ModelParams {
        ModelParams {
            ground_weight: 0.0,
            mean_photons: 0.0,
            photons: 1,
            ..Default::default()
        }
    }

    #[test]
    fn coefficients_at_t0_are_product_diagonal() {
        let p = ModelParams {
            mean_photons: 1.0,
            ground_weight: 0.2,
            photons: 2,
            detuning: 1.0,
            ..Default::default()
        };
        let dist = ThermalDistribution::for_params(&p, 1e-12).unwrap();
        for n in 0..10 {
            let b = block_coefficients(n, 0.0, &p, &dist);
            assert_eq!(b.mu, 0.2 * dist.weight(n));
            assert_relative_eq!(b.xi, 0.8 * dist.weight(n), max_relative = 1e-15);
            assert_eq!(b.phi.norm(), 0.0);
        }
    }

    #[test]
    fn vacuum_rabi_coefficients() {
        let p = vacuum_rabi();
        let dist = ThermalDistribution::for_params(&p, 1e-12).unwrap();
        let t = 0.6;
        let b = block_coefficients(0, t, &p, &dist);
        assert_eq!(b.mu, 0.0);
        assert_relative_eq!(b.xi, t.cos().powi(2), epsilon = 1e-15);
        assert_relative_eq!(b.phi.norm(), (t.sin() * t.cos()).abs(), epsilon = 1e-15);
        assert_eq!(b.chi(), b.phi.conj());
    }

    #[test]
    fn maximally_entangled_point() {
        let p = vacuum_rabi();
        let dist = ThermalDistribution::for_params(&p, 1e-12).unwrap();
        assert_relative_eq!(
            trace_norm_closed(FRAC_PI_4, &p, &dist),
            2.0,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            negativity(FRAC_PI_4, &p, &dist).unwrap(),
            0.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn product_state_has_zero_negativity() {
        let p = ModelParams {
            mean_photons: 1.0,
            ground_weight: 0.2,
            photons: 2,
            motion: true,
            ..Default::default()
        };
        let dist = ThermalDistribution::for_params(&p, 1e-12).unwrap();
        assert!((trace_norm_closed(0.0, &p, &dist) - 1.0).abs() < 1e-12);
        assert_eq!(negativity(0.0, &p, &dist).unwrap(), 0.0);
    }

    #[test]
    fn eds_for_one_photon_motion() {
        let p = ModelParams {
            mean_photons: 1.0,
            ground_weight: 0.2,
            photons: 1,
            motion: true,
            ..Default::default()
        };
        let dist = ThermalDistribution::for_params(&p, 1e-12).unwrap();
        assert!(negativity(2.0 * PI, &p, &dist).unwrap() <= 1e-12);
        assert!(negativity(PI, &p, &dist).unwrap() > 1e-3);
    }

    #[test]
    fn clamp_policy() {
        assert_eq!(
            clamp_negativity(0.1, 1e-12).unwrap(),
            NegativityValue {
                value: 0.1,
                clamped: false
            }
        );
        assert_eq!(
            clamp_negativity(-1e-13, 0.0).unwrap(),
            NegativityValue {
                value: 0.0,
                clamped: true
            }
        );
        assert!(matches!(
            clamp_negativity(-1e-6, 1e-12),
            Err(Error::NegativityBelowTolerance { .. })
        ));
    }

    #[test]
    fn series_rejects_bad_grids() {
        let p = vacuum_rabi();
        let dist = ThermalDistribution::for_params(&p, 1e-12).unwrap();
        assert!(negativity_series(&[], &p, &dist).is_err());
        assert!(negativity_series(&[0.0, 0.0], &p, &dist).is_err());
        assert!(negativity_series(&[-1.0, 0.0], &p, &dist).is_err());
        let s = negativity_series(&[0.0], &p, &dist).unwrap();
        assert_eq!(s.values, vec![0.0]);
        assert_eq!(s.method, Method::ClosedForm);
    }
}
