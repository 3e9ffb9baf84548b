//! Cyclic Jacobi eigensolver for small dense complex Hermitian matrices.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// Real spectrum of a Hermitian matrix, sorted ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianSpectrum {
    pub values: Vec<f64>,
    pub dim: usize,
}

impl HermitianSpectrum {
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn abs_sum(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    pub fn negative_sum(&self) -> f64 {
        self.values.iter().filter(|v| **v < 0.0).map(|v| -v).sum()
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(f64::NAN)
    }
}

fn hermitian_part(m: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(Error::DimensionMismatch {
            expected: rows,
            got: cols,
        });
    }
    let scale = m.iter().fold(1.0f64, |acc, z| acc.max(z.norm()));
    let mut worst = 0.0f64;
    for i in 0..rows {
        for j in i..rows {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    if worst > 1e-12 * scale {
        return Err(Error::NotHermitian(worst));
    }
    Ok((m + m.adjoint()).unscale(2.0))
}

fn off_norm_sq(a: &DMatrix<C64>) -> f64 {
    let n = a.nrows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            sum += a[(i, j)].norm_sqr();
        }
    }
    2.0 * sum
}

/// Annihilates `a[(p, q)]` with a unitary rotation acting on rows and
/// columns `p`, `q`. Returns the rotation `[[g_pp, g_pq], [g_qp, g_qq]]`.
fn rotate(a: &mut DMatrix<C64>, p: usize, q: usize) -> [[C64; 2]; 2] {
    let apq = a[(p, q)];
    let mag = apq.norm();
    let phase = apq / mag;
    let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);

    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = diag(1, conj(phase)) * [[c, s], [-s, c]]
    let g = [
        [C64::new(c, 0.0), C64::new(s, 0.0)],
        [-phase.conj() * s, phase.conj() * c],
    ];
    let n = a.nrows();
    for k in 0..n {
        let (x, y) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = x * g[0][0] + y * g[1][0];
        a[(k, q)] = x * g[0][1] + y * g[1][1];
    }
    for k in 0..n {
        let (x, y) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = g[0][0].conj() * x + g[1][0].conj() * y;
        a[(q, k)] = g[0][1].conj() * x + g[1][1].conj() * y;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(app - t * mag, 0.0);
    a[(q, q)] = C64::new(aqq + t * mag, 0.0);
    g
}

fn jacobi(m: &DMatrix<C64>, want_vectors: bool) -> Result<(Vec<f64>, Option<DMatrix<C64>>)> {
    let mut a = hermitian_part(m)?;
    let n = a.nrows();
    let mut v = want_vectors.then(|| DMatrix::<C64>::identity(n, n));
    let frob_sq: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let target = (f64::EPSILON * f64::EPSILON) * frob_sq;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_norm_sq(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)].norm();
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[(p, p)].re.abs(), a[(q, q)].re.abs());
                // negligible against both diagonal entries
                if app + 1e3 * apq == app && aqq + 1e3 * apq == aqq {
                    a[(p, q)] = C64::new(0.0, 0.0);
                    a[(q, p)] = C64::new(0.0, 0.0);
                    continue;
                }
                let g = rotate(&mut a, p, q);
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let (x, y) = (v[(k, p)], v[(k, q)]);
                        v[(k, p)] = x * g[0][0] + y * g[1][0];
                        v[(k, q)] = x * g[0][1] + y * g[1][1];
                    }
                }
            }
        }
    }
    if !converged {
        let off = off_norm_sq(&a);
        if off > 1e-24 * frob_sq.max(1.0) {
            return Err(Error::EigenNotConverged(off.sqrt()));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = v.map(|v| DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]));
    Ok((values, vectors))
}

/// Full real spectrum of a Hermitian matrix (symmetrized before solving).
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Result<HermitianSpectrum> {
    let (values, _) = jacobi(m, false)?;
    Ok(HermitianSpectrum {
        values,
        dim: m.nrows(),
    })
}

/// Spectrum plus eigenvectors, column `k` belonging to `values[k]`.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> Result<(HermitianSpectrum, DMatrix<C64>)> {
    let (values, vectors) = jacobi(m, true)?;
    Ok((
        HermitianSpectrum {
            values,
            dim: m.nrows(),
        },
        vectors.expect("vectors requested"),
    ))
}
