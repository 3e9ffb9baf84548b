//! Time-evolved joint density matrix of the atom and the truncated field.
//!
//! Basis ordering is fixed everywhere: `index(n, s) = 2n + s` with `s = 0`
//! for the ground level and `s = 1` for the excited level.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{dressed, DressedQuantities, ModelParams, ThermalDistribution};
use crate::sweep::format::g12;

const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomLevel {
    Ground = 0,
    Excited = 1,
}

/// `|n, s>`: `n` photons and the atom in level `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisState {
    pub photons: usize,
    pub level: AtomLevel,
}

impl BasisState {
    pub fn ground(photons: usize) -> Self {
        Self {
            photons,
            level: AtomLevel::Ground,
        }
    }

    pub fn excited(photons: usize) -> Self {
        Self {
            photons,
            level: AtomLevel::Excited,
        }
    }

    pub fn index(self) -> usize {
        2 * self.photons + self.level as usize
    }

    pub fn from_index(index: usize) -> Self {
        let level = if index.is_multiple_of(2) {
            AtomLevel::Ground
        } else {
            AtomLevel::Excited
        };
        Self {
            photons: index / 2,
            level,
        }
    }

    /// Conserved excitation number `n + l s`.
    pub fn excitation(self, photons_per_transition: u32) -> usize {
        self.photons + photons_per_transition as usize * self.level as usize
    }
}

/// Evolution of one initially occupied basis projector `|a><a|`.
///
/// `populations` are the coefficients of `|a><a|` and `|b><b|`, and
/// `coherences` those of `|a><b|` and `|b><a|`, where `b` is the partner
/// state in the same excitation sector. Without a partner the projector is
/// stationary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockEvolution {
    pub initial: BasisState,
    pub partner: Option<BasisState>,
    pub populations: [f64; 2],
    pub coherences: [C64; 2],
}

impl BlockEvolution {
    fn stationary(initial: BasisState) -> Self {
        Self {
            initial,
            partner: None,
            populations: [1.0, 0.0],
            coherences: [C64::new(0.0, 0.0); 2],
        }
    }
}

/// `rho_g(t)` for an initial `|n, g>`; couples to `|n - l, e>`.
pub fn evolve_ground_block(n: usize, t: f64, params: &ModelParams) -> BlockEvolution {
    let l = params.photons as usize;
    let initial = BasisState::ground(n);
    if n < l {
        return BlockEvolution::stationary(initial);
    }
    let d = dressed(n, t, params);
    let (s, c) = d.half_phase();
    let amp = s * d.sin2a;
    BlockEvolution {
        initial,
        partner: Some(BasisState::excited(n - l)),
        populations: [c * c + s * s * d.cos2a * d.cos2a, amp * amp],
        coherences: [
            -I * amp * C64::new(c, s * d.cos2a),
            I * amp * C64::new(c, -s * d.cos2a),
        ],
    }
}

/// `rho_e(t)` for an initial `|n, e>`; couples to `|n + l, g>`.
pub fn evolve_excited_block(n: usize, t: f64, params: &ModelParams) -> BlockEvolution {
    let l = params.photons as usize;
    let d = dressed(n + l, t, params);
    let (s, c) = d.half_phase();
    let amp = s * d.sin2a;
    BlockEvolution {
        initial: BasisState::excited(n),
        partner: Some(BasisState::ground(n + l)),
        populations: [c * c + s * s * d.cos2a * d.cos2a, amp * amp],
        coherences: [
            -I * amp * C64::new(c, -s * d.cos2a),
            I * amp * C64::new(c, s * d.cos2a),
        ],
    }
}

/// Density matrix on `atom (x) field` with `field_dim` Fock levels.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDensityMatrix {
    field_dim: usize,
    photons: u32,
    time: f64,
    matrix: DMatrix<C64>,
}

impl JointDensityMatrix {
    pub fn from_matrix(matrix: DMatrix<C64>, photons: u32, time: f64) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols || rows % 2 != 0 {
            return Err(Error::DimensionMismatch {
                expected: rows + rows % 2,
                got: cols,
            });
        }
        Ok(Self {
            field_dim: rows / 2,
            photons,
            time,
            matrix,
        })
    }

    pub fn field_dim(&self) -> usize {
        self.field_dim
    }

    pub fn dim(&self) -> usize {
        2 * self.field_dim
    }

    pub fn photons(&self) -> u32 {
        self.photons
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn entry(&self, row: BasisState, col: BasisState) -> C64 {
        self.matrix[(row.index(), col.index())]
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn purity(&self) -> f64 {
        // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest magnitude among entries joining different excitation sectors.
    pub fn off_sector_max(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            let ni = BasisState::from_index(i).excitation(self.photons);
            for j in 0..n {
                if BasisState::from_index(j).excitation(self.photons) != ni {
                    worst = worst.max(self.matrix[(i, j)].norm());
                }
            }
        }
        worst
    }

    /// Debug dump: a `#` header, then one tab-separated row per matrix row.
    pub fn to_text(&self, params: &ModelParams) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# basis index(n,s) = 2n+s (s=0 ground, s=1 excited); field_dim = {}; t = {}",
            self.field_dim,
            g12(self.time)
        );
        let _ = writeln!(
            out,
            "# delta = {}; g = {}; l = {}; p = {}; motion = {}; m = {}; cg = {}",
            g12(params.detuning),
            g12(params.coupling),
            params.photons,
            params.mode_halfwaves,
            params.motion,
            g12(params.mean_photons),
            g12(params.ground_weight)
        );
        for row in self.matrix.row_iter() {
            let cells: Vec<String> = row.iter().map(|z| complex_cell(*z)).collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out
    }

    pub fn write_text(&self, path: &Path, params: &ModelParams) -> Result<()> {
        let wrap = |source| Error::Output {
            path: path.to_path_buf(),
            source,
        };
        let mut file = std::fs::File::create(path).map_err(wrap)?;
        file.write_all(self.to_text(params).as_bytes())
            .map_err(wrap)
    }
}

fn complex_cell(z: C64) -> String {
    let sign = if z.im.is_sign_negative() && z.im != 0.0 {
        '-'
    } else {
        '+'
    };
    format!("{}{}{}i", g12(z.re), sign, g12(z.im.abs()))
}

/// Field dimension that holds every state reachable from the thermal support.
pub fn field_dim_for(params: &ModelParams, dist: &ThermalDistribution) -> usize {
    dist.n_max() + params.photons as usize + 1
}

/// `rho(t) = sum_n P_n [C_g rho_g(t) + C_e rho_e(t)]`, summed in ascending `n`.
pub fn assemble_density(
    t: f64,
    params: &ModelParams,
    dist: &ThermalDistribution,
) -> Result<JointDensityMatrix> {
    params.validate()?;
    dist.check_against(params)?;
    let field_dim = field_dim_for(params, dist);
    let mut matrix = DMatrix::<C64>::zeros(2 * field_dim, 2 * field_dim);
    let (cg, ce) = (params.ground_weight, params.excited_weight());

    for (n, &pn) in dist.weights().iter().enumerate() {
        for (weight, block) in [
            (pn * cg, evolve_ground_block(n, t, params)),
            (pn * ce, evolve_excited_block(n, t, params)),
        ] {
            if weight == 0.0 {
                continue;
            }
            let a = block.initial.index();
            matrix[(a, a)] += weight * block.populations[0];
            if let Some(partner) = block.partner {
                let b = partner.index();
                matrix[(b, b)] += weight * block.populations[1];
                matrix[(a, b)] += weight * block.coherences[0];
                matrix[(b, a)] += weight * block.coherences[1];
            }
        }
    }
    Ok(JointDensityMatrix {
        field_dim,
        photons: params.photons,
        time: t,
        matrix,
    })
}

/// `E(N) = omega (N - l/2)`; zero when no field frequency is given.
fn sector_energy(excitation: usize, params: &ModelParams) -> f64 {
    params.field_frequency.unwrap_or(0.0) * (excitation as f64 - 0.5 * params.photons as f64)
}

/// One excitation sector of the truncated space: `|N, g>` and `|N - l, e>`
/// when they fit inside `field_dim`.
pub(crate) struct Sector {
    pub excitation: usize,
    pub ground: Option<usize>,
    pub excited: Option<usize>,
}

pub(crate) fn sectors(field_dim: usize, photons: u32) -> impl Iterator<Item = Sector> {
    let l = photons as usize;
    (0..field_dim + l).map(move |n| Sector {
        excitation: n,
        ground: (n < field_dim).then(|| BasisState::ground(n).index()),
        excited: (n >= l && n - l < field_dim).then(|| BasisState::excited(n - l).index()),
    })
}

/// Matrix elements of the closed-form propagator in one sector, ordered
/// `[[<e|U|e>, <e|U|g>], [<g|U|e>, <g|U|g>]]`.
fn sector_propagator(d: &DressedQuantities, phase: C64) -> [[C64; 2]; 2] {
    let (s, c) = d.half_phase();
    let off = phase * I * s * d.sin2a;
    [
        [phase * C64::new(c, -s * d.cos2a), off],
        [off, phase * C64::new(c, s * d.cos2a)],
    ]
}

/// Closed-form propagator on `field_dim` Fock levels, block by block.
///
/// Excited states at the truncation edge whose partner `|n + l, g>` falls
/// outside the space evolve with their uncoupled energy only.
pub fn propagator_matrix(t: f64, params: &ModelParams, field_dim: usize) -> DMatrix<C64> {
    let dim = 2 * field_dim;
    let mut u = DMatrix::<C64>::zeros(dim, dim);
    for sector in sectors(field_dim, params.photons) {
        let phase = C64::from_polar(1.0, -sector_energy(sector.excitation, params) * t);
        match (sector.excited, sector.ground) {
            (Some(e), Some(g)) => {
                let block = sector_propagator(&dressed(sector.excitation, t, params), phase);
                u[(e, e)] = block[0][0];
                u[(e, g)] = block[0][1];
                u[(g, e)] = block[1][0];
                u[(g, g)] = block[1][1];
            }
            (None, Some(g)) => {
                let block = sector_propagator(&dressed(sector.excitation, t, params), phase);
                u[(g, g)] = block[1][1];
            }
            (Some(e), None) => {
                u[(e, e)] = phase * C64::from_polar(1.0, -0.5 * params.detuning * t);
            }
            (None, None) => {}
        }
    }
    u
}

/// Applies the closed-form propagator to a normalized state vector.
pub fn apply_propagator(
    state: &DVector<C64>,
    t: f64,
    params: &ModelParams,
) -> Result<DVector<C64>> {
    if !state.len().is_multiple_of(2) || state.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: state.len() + 1,
            got: state.len(),
        });
    }
    let norm = state.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized(norm));
    }
    let field_dim = state.len() / 2;
    let mut out = DVector::<C64>::zeros(state.len());
    for sector in sectors(field_dim, params.photons) {
        let phase = C64::from_polar(1.0, -sector_energy(sector.excitation, params) * t);
        match (sector.excited, sector.ground) {
            (Some(e), Some(g)) => {
                let b = sector_propagator(&dressed(sector.excitation, t, params), phase);
                out[e] = b[0][0] * state[e] + b[0][1] * state[g];
                out[g] = b[1][0] * state[e] + b[1][1] * state[g];
            }
            (None, Some(g)) => {
                let b = sector_propagator(&dressed(sector.excitation, t, params), phase);
                out[g] = b[1][1] * state[g];
            }
            (Some(e), None) => {
                out[e] = phase * C64::from_polar(1.0, -0.5 * params.detuning * t) * state[e];
            }
            (None, None) => {}
        }
    }
    Ok(out)
}
