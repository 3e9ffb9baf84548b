//! Python bindings: parameters, thermal helpers, closed-form and brute-force
//! negativity, and the joint density matrix.

use jcm_core::model;
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

const DEFAULT_TAIL_EPS: f64 = 1e-12;

fn to_py_err(err: jcm_core::Error) -> PyErr {
    match err {
        jcm_core::Error::EigenNotConverged(_)
        | jcm_core::Error::OracleMismatch { .. }
        | jcm_core::Error::NegativityBelowTolerance { .. } => {
            PyRuntimeError::new_err(err.to_string())
        }
        other => PyValueError::new_err(other.to_string()),
    }
}

#[pyclass(name = "ModelParams", module = "jcm", from_py_object)]
#[derive(Clone)]
struct PyModelParams {
    #[pyo3(get, set)]
    delta: f64,
    #[pyo3(get, set)]
    g: f64,
    #[pyo3(get, set)]
    l: u32,
    #[pyo3(get, set)]
    p: u32,
    #[pyo3(get, set)]
    motion: bool,
    #[pyo3(get, set)]
    m: f64,
    #[pyo3(get, set)]
    cg: f64,
    #[pyo3(get, set)]
    omega: Option<f64>,
}

impl PyModelParams {
    fn core(&self) -> PyResult<model::ModelParams> {
        let params = model::ModelParams {
            detuning: self.delta,
            coupling: self.g,
            photons: self.l,
            mode_halfwaves: self.p,
            motion: self.motion,
            mean_photons: self.m,
            ground_weight: self.cg,
            field_frequency: self.omega,
            temperature: None,
        };
        params.validate().map_err(to_py_err)?;
        Ok(params)
    }

    fn with_distribution(
        &self,
        tail_eps: f64,
    ) -> PyResult<(model::ModelParams, model::ThermalDistribution)> {
        let params = self.core()?;
        let dist = model::ThermalDistribution::for_params(&params, tail_eps).map_err(to_py_err)?;
        Ok((params, dist))
    }
}

#[pymethods]
impl PyModelParams {
    #[new]
    #[pyo3(signature = (*, delta = 0.0, g = 1.0, l = 1, p = 1, motion = false, m = 0.0, cg = 0.0, omega = None))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        delta: f64,
        g: f64,
        l: u32,
        p: u32,
        motion: bool,
        m: f64,
        cg: f64,
        omega: Option<f64>,
    ) -> PyResult<Self> {
        let out = Self {
            delta,
            g,
            l,
            p,
            motion,
            m,
            cg,
            omega,
        };
        out.core()?;
        Ok(out)
    }

    /// Sets `m` from the Bose occupation at field frequency `omega` and `temperature`.
    #[staticmethod]
    #[pyo3(signature = (omega, temperature, **kwargs))]
    fn thermal(omega: f64, temperature: f64, kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let m = model::mean_from_temperature(omega, temperature).map_err(to_py_err)?;
        let mut out = Self {
            delta: 0.0,
            g: 1.0,
            l: 1,
            p: 1,
            motion: false,
            m,
            cg: 0.0,
            omega: Some(omega),
        };
        if let Some(kwargs) = kwargs {
            for (key, value) in kwargs.iter() {
                match key.extract::<String>()?.as_str() {
                    "delta" => out.delta = value.extract()?,
                    "g" => out.g = value.extract()?,
                    "l" => out.l = value.extract()?,
                    "p" => out.p = value.extract()?,
                    "motion" => out.motion = value.extract()?,
                    "cg" => out.cg = value.extract()?,
                    other => {
                        return Err(PyValueError::new_err(format!(
                            "unexpected keyword `{other}`"
                        )))
                    }
                }
            }
        }
        out.core()?;
        Ok(out)
    }

    fn __repr__(&self) -> String {
        format!(
            "ModelParams(delta={}, g={}, l={}, p={}, motion={}, m={}, cg={}, omega={:?})",
            self.delta, self.g, self.l, self.p, self.motion, self.m, self.cg, self.omega
        )
    }
}

#[pyclass(name = "ThermalDistribution", module = "jcm", frozen)]
struct PyThermalDistribution {
    inner: model::ThermalDistribution,
}

#[pymethods]
impl PyThermalDistribution {
    #[new]
    #[pyo3(signature = (mean, eps = DEFAULT_TAIL_EPS, l = 1))]
    fn new(mean: f64, eps: f64, l: u32) -> PyResult<Self> {
        Ok(Self {
            inner: model::ThermalDistribution::new(mean, eps, l).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn mean(&self) -> f64 {
        self.inner.mean()
    }

    #[getter]
    fn n_max(&self) -> usize {
        self.inner.n_max()
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.weights().to_vec()
    }

    #[getter]
    fn tail_bound(&self) -> f64 {
        self.inner.tail_bound()
    }
}

#[pyfunction]
fn thermal_weight(n: usize, m: f64) -> PyResult<f64> {
    model::thermal_weight(n, m).map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (m, eps = DEFAULT_TAIL_EPS, l = 1))]
fn truncation_level(m: f64, eps: f64, l: u32) -> PyResult<usize> {
    model::truncation_level(m, eps, l).map_err(to_py_err)
}

#[pyfunction]
fn mean_from_temperature(omega: f64, temperature: f64) -> PyResult<f64> {
    model::mean_from_temperature(omega, temperature).map_err(to_py_err)
}

/// Integrated coupling envelope `int_0^t f^l`.
#[pyfunction]
fn theta(t: f64, params: &PyModelParams) -> PyResult<f64> {
    Ok(model::theta(t, &params.core()?))
}

/// Rabi frequency and mixing angles of the sector holding `|n, g>`.
#[pyfunction]
fn dressed<'py>(
    py: Python<'py>,
    n: usize,
    t: f64,
    params: &PyModelParams,
) -> PyResult<Bound<'py, PyDict>> {
    let d = model::dressed(n, t, &params.core()?);
    let out = PyDict::new(py);
    out.set_item("theta", d.theta)?;
    out.set_item("effective_coupling", d.effective_coupling)?;
    out.set_item("fock_factor", d.fock_factor)?;
    out.set_item("rabi", d.rabi)?;
    out.set_item("rabi_phase", d.rabi_phase)?;
    out.set_item("cos2a", d.cos2a)?;
    out.set_item("sin2a", d.sin2a)?;
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (t, params, tail_eps = DEFAULT_TAIL_EPS))]
fn negativity(t: f64, params: &PyModelParams, tail_eps: f64) -> PyResult<f64> {
    let (params, dist) = params.with_distribution(tail_eps)?;
    jcm_core::negativity(t, &params, &dist).map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (times, params, tail_eps = DEFAULT_TAIL_EPS))]
fn negativity_series(
    py: Python<'_>,
    times: Vec<f64>,
    params: &PyModelParams,
    tail_eps: f64,
) -> PyResult<Vec<f64>> {
    let (params, dist) = params.with_distribution(tail_eps)?;
    py.detach(|| jcm_core::negativity_series(&times, &params, &dist))
        .map(|s| s.values)
        .map_err(to_py_err)
}

/// Negativity by diagonalizing the partially transposed density matrix.
#[pyfunction]
#[pyo3(signature = (t, params, tail_eps = DEFAULT_TAIL_EPS))]
fn negativity_brute(
    py: Python<'_>,
    t: f64,
    params: &PyModelParams,
    tail_eps: f64,
) -> PyResult<f64> {
    let (params, dist) = params.with_distribution(tail_eps)?;
    py.detach(|| jcm_core::oracle::negativity_brute(t, &params, &dist))
        .map_err(to_py_err)
}

/// Joint density matrix in the basis `index(n, s) = 2n + s`, `s = 0` ground.
#[pyfunction]
#[pyo3(signature = (t, params, tail_eps = DEFAULT_TAIL_EPS))]
fn density_matrix(t: f64, params: &PyModelParams, tail_eps: f64) -> PyResult<Vec<Vec<Complex64>>> {
    let (params, dist) = params.with_distribution(tail_eps)?;
    let rho = jcm_core::assemble_density(t, &params, &dist).map_err(to_py_err)?;
    let m = rho.matrix();
    Ok((0..m.nrows())
        .map(|r| m.row(r).iter().copied().collect())
        .collect())
}

#[pymodule]
fn jcm(module: &Bound<'_, PyModule>) -> PyResult<()> {
    module.add("__version__", jcm_core::VERSION)?;
    module.add_class::<PyModelParams>()?;
    module.add_class::<PyThermalDistribution>()?;
    module.add_function(wrap_pyfunction!(thermal_weight, module)?)?;
    module.add_function(wrap_pyfunction!(truncation_level, module)?)?;
    module.add_function(wrap_pyfunction!(mean_from_temperature, module)?)?;
    module.add_function(wrap_pyfunction!(theta, module)?)?;
    module.add_function(wrap_pyfunction!(dressed, module)?)?;
    module.add_function(wrap_pyfunction!(negativity, module)?)?;
    module.add_function(wrap_pyfunction!(negativity_series, module)?)?;
    module.add_function(wrap_pyfunction!(negativity_brute, module)?)?;
    module.add_function(wrap_pyfunction!(density_matrix, module)?)?;
    Ok(())
}
