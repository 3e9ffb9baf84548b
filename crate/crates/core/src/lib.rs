//! Exact time evolution of a moving two-level atom coupled to a thermal
//! cavity mode through an `l`-photon transition, and the atom-field
//! negativity of the resulting mixed state.
//!
//! The crate has two independent routes to the negativity:
//!
//! * [`negativity::negativity`] evaluates a closed-form trace norm from
//!   per-sector block coefficients without building any matrix;
//! * [`oracle::negativity_brute`] builds the joint density matrix, takes
//!   the partial transpose over the atom and diagonalizes it.
//!
//! Time is measured in units of `1/g` (the default coupling is `g = 1`).

pub mod density;
pub mod error;
pub mod model;
pub mod negativity;
pub mod oracle;
pub mod sweep;
mod theta;

pub use density::{assemble_density, AtomLevel, BasisState, JointDensityMatrix};
pub use error::{Error, Result};
pub use model::{DressedQuantities, ModelParams, ThermalDistribution};
pub use negativity::{negativity, negativity_series, trace_norm_closed, NegativitySeries};
pub use num_complex::Complex64 as C64;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
