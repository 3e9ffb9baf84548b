//! Brute-force ground truth: explicit matrices, partial transposition,
//! dense diagonalization and a time-ordered integration of the
//! time-dependent Schrodinger equation.

mod eigen;
mod propagator;
mod verify;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, HermitianSpectrum};
pub use propagator::{
    converged_propagator, propagated_density, time_ordered_propagator, ConvergedPropagator,
};
pub use verify::{verify, PropagatorCheck, VerifyGrid, VerifyPoint, VerifyReport};

use crate::density::{assemble_density, JointDensityMatrix};
use crate::error::{Error, Result};
use crate::model::{ModelParams, ThermalDistribution};
use crate::negativity::clamp_negativity;

/// Transposes the atomic index: entry `((n,s),(n',s'))` becomes `((n,s'),(n',s))`.
pub fn partial_transpose_atom_matrix(rho: &DMatrix<C64>) -> DMatrix<C64> {
    let dim = rho.nrows();
    DMatrix::from_fn(dim, dim, |row, col| {
        let (n, s) = (row / 2, row % 2);
        let (n2, s2) = (col / 2, col % 2);
        rho[(2 * n + s2, 2 * n2 + s)]
    })
}

pub fn partial_transpose_atom(rho: &JointDensityMatrix) -> DMatrix<C64> {
    partial_transpose_atom_matrix(rho.matrix())
}

/// Both oracle routes to the negativity of one spectrum of `rho^T`.
#[derive(Clone, Debug, PartialEq)]
pub struct BruteNegativity {
    /// `(sum |lambda| - 1) / 2`, clamped like the closed form.
    pub value: f64,
    /// `|sum of negative eigenvalues|`.
    pub negative_sum: f64,
    pub spectrum: HermitianSpectrum,
}

pub fn negativity_brute_detail(
    t: f64,
    params: &ModelParams,
    dist: &ThermalDistribution,
) -> Result<BruteNegativity> {
    let rho = assemble_density(t, params, dist)?;
    let spectrum = hermitian_eigenvalues(&partial_transpose_atom(&rho))?;
    let raw = 0.5 * (spectrum.abs_sum() - 1.0);
    let negative_sum = spectrum.negative_sum();
    // the two routes differ by (tr rho - 1)/2, bounded by the thermal tail
    if (raw - negative_sum).abs() > 1e-11 + dist.tail_bound() {
        return Err(Error::OracleMismatch {
            trace_norm: raw,
            negative_sum,
        });
    }
    let value = clamp_negativity(raw, dist.tail_bound())?.value;
    Ok(BruteNegativity {
        value,
        negative_sum,
        spectrum,
    })
}

/// Negativity by explicit diagonalization of the partially transposed state.
pub fn negativity_brute(t: f64, params: &ModelParams, dist: &ThermalDistribution) -> Result<f64> {
    negativity_brute_detail(t, params, dist).map(|b| b.value)
}
