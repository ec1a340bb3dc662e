//! Python bindings: `import pyurbounds`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

use urbounds::io::StateFile;
use urbounds::sweep::{run_sweep, SweepConfig};
use urbounds::{BoundReport, Complex64, ExampleParams, Observable, PhysConfig};

fn err(e: urbounds::Error) -> PyErr {
    match e {
        urbounds::Error::Accuracy(_) | urbounds::Error::Truncation(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn cfg(hbar: f64) -> PyResult<PhysConfig> {
    PhysConfig::with_hbar(hbar).map_err(err)
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn serialize<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    to_py(py, &v)
}

fn square(rows: &[Vec<f64>]) -> PyResult<nalgebra::DMatrix<f64>> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("expected a non-empty square matrix"));
    }
    Ok(nalgebra::DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn rows(m: &nalgebra::DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// Symmetric and antisymmetric second moments of a list of observables.
#[pyclass(name = "MomentPair", module = "pyurbounds", frozen)]
struct PyMomentPair {
    inner: urbounds::MomentPair,
}

#[pymethods]
impl PyMomentPair {
    #[new]
    #[pyo3(signature = (x, y, labels=None, means=None))]
    fn new(x: Vec<Vec<f64>>, y: Vec<Vec<f64>>, labels: Option<Vec<String>>, means: Option<Vec<f64>>) -> PyResult<Self> {
        let x = square(&x)?;
        let y = square(&y)?;
        let n = x.nrows();
        let labels = labels.unwrap_or_else(|| (1..=n).map(|k| format!("z{k}")).collect());
        let means = means.unwrap_or_else(|| vec![0.0; n]);
        let inner = urbounds::MomentPair::new(labels, means, x, y).map_err(err)?;
        Ok(PyMomentPair { inner })
    }

    #[getter]
    fn x(&self) -> Vec<Vec<f64>> {
        rows(self.inner.x_matrix())
    }

    #[getter]
    fn y(&self) -> Vec<Vec<f64>> {
        rows(self.inner.y_matrix())
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    #[getter]
    fn means(&self) -> Vec<f64> {
        self.inner.means().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Positivity of `F = X + iY`: dict with min_eigenvalue, det_f, passed, tolerance_used.
    #[pyo3(signature = (rel_tol=1e-10))]
    fn psd_check<'py>(&self, py: Python<'py>, rel_tol: f64) -> PyResult<Bound<'py, PyAny>> {
        serialize(py, &urbounds::gram_psd_check(&self.inner, rel_tol))
    }

    fn rs_bound(&self) -> PyResult<f64> {
        urbounds::rs_bound(&self.inner, 0, 1).map_err(err)
    }

    /// `(r, Y12²/(1 − r²))` on the variance scale.
    fn correlation_form(&self) -> PyResult<(f64, f64)> {
        urbounds::correlation_form(&self.inner, 0, 1).map_err(err)
    }

    fn triple_det_residual(&self) -> PyResult<f64> {
        urbounds::triple_det_residual(&self.inner).map_err(err)
    }

    /// Dict with omega, gamma, radicand and bound (None when vacuous).
    fn coupled_bound<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        serialize(py, &urbounds::coupled_bound(&self.inner).map_err(err)?)
    }

    fn coupled_bound_commuting(&self) -> PyResult<f64> {
        urbounds::coupled_bound_commuting(&self.inner).map_err(err)
    }

    /// Full bound report; pass `heisenberg=ħ/2` for a canonical pair.
    #[pyo3(signature = (heisenberg=None))]
    fn report<'py>(&self, py: Python<'py>, heisenberg: Option<f64>) -> PyResult<Bound<'py, PyAny>> {
        serialize(py, &BoundReport::from_moments(&self.inner, heisenberg).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("MomentPair(labels={:?})", self.inner.labels())
    }
}

/// Closed-form moments of `(x, p_x, y)` for the entangled Gaussian.
#[pyfunction]
#[pyo3(signature = (a, c, b_re, b_im, hbar=1.0))]
fn analytic_covariances(a: f64, c: f64, b_re: f64, b_im: f64, hbar: f64) -> PyResult<PyMomentPair> {
    let p = ExampleParams::new(a, c, Complex64::new(b_re, b_im)).map_err(err)?;
    Ok(PyMomentPair {
        inner: urbounds::analytic_covariances(&p, &cfg(hbar)?),
    })
}

#[pyfunction]
fn example_purity(a: f64, c: f64, b_re: f64, b_im: f64) -> PyResult<f64> {
    let p = ExampleParams::new(a, c, Complex64::new(b_re, b_im)).map_err(err)?;
    Ok(urbounds::example_purity(&p))
}

#[pyfunction]
#[pyo3(signature = (a, c, b_re, b_im, hbar=1.0))]
fn saturation_residual(a: f64, c: f64, b_re: f64, b_im: f64, hbar: f64) -> PyResult<f64> {
    let p = ExampleParams::new(a, c, Complex64::new(b_re, b_im)).map_err(err)?;
    Ok(urbounds::saturation_residual(&p, &cfg(hbar)?))
}

/// Purity of one mode of the entangled Gaussian by numerical partial trace.
#[pyfunction]
#[pyo3(signature = (a, c, b_re, b_im, hbar=1.0))]
fn numeric_reduced_purity(a: f64, c: f64, b_re: f64, b_im: f64, hbar: f64) -> PyResult<f64> {
    let cfg = cfg(hbar)?;
    let psi = urbounds::make_entangled_gaussian(a, c, Complex64::new(b_re, b_im), None, &cfg).map_err(err)?;
    Ok(urbounds::reduced_moments(&psi, 0, &cfg).map_err(err)?.1)
}

/// Bound report for a state given in the JSON state-file format.
#[pyfunction]
#[pyo3(signature = (state_json, observables=None, hbar=1.0))]
fn report_from_json<'py>(
    py: Python<'py>,
    state_json: &str,
    observables: Option<Vec<String>>,
    hbar: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let file = StateFile::parse(state_json).map_err(err)?;
    let cfg = cfg(file.state.hbar(&cfg(hbar)?))?;
    let state = file.state.build(&cfg).map_err(err)?;
    let obs: Vec<Observable> = match (observables, &file.observables) {
        (Some(labels), _) => labels
            .iter()
            .map(|l| Observable::from_label(l, &state, &cfg))
            .collect::<urbounds::Result<_>>(),
        (None, Some(specs)) => specs
            .iter()
            .enumerate()
            .map(|(i, s)| s.resolve(&state, &cfg, i))
            .collect(),
        (None, None) => ["x", "p"]
            .iter()
            .map(|l| Observable::from_label(l, &state, &cfg))
            .collect(),
    }
    .map_err(err)?;
    if !(obs.len() == 2 || obs.len() == 3) {
        return Err(PyValueError::new_err(format!(
            "need 2 or 3 observables, got {}",
            obs.len()
        )));
    }
    let report = urbounds::bound_report(&state, &obs[0], &obs[1], obs.get(2), &cfg).map_err(err)?;
    serialize(py, &report)
}

/// `(σ_xx, σ_pp, μ)` of the thermal oscillator state.
#[pyfunction]
#[pyo3(signature = (omega, temperature, hbar=1.0, kb=1.0))]
fn thermal_moments(omega: f64, temperature: f64, hbar: f64, kb: f64) -> PyResult<(f64, f64, f64)> {
    let cfg = PhysConfig::new(hbar, kb).map_err(err)?;
    let g = urbounds::make_thermal(omega, temperature, &cfg).map_err(err)?;
    let (sxx, spp, _) = g.mode_moments(0);
    let mu = urbounds::purity(&urbounds::State::Gaussian(g));
    Ok((sxx, spp, mu))
}

#[pyfunction]
fn phi_exact(mu: f64) -> PyResult<f64> {
    urbounds::phi_exact(mu).map_err(err)
}

#[pyfunction]
fn phi_tilde(mu: f64) -> PyResult<f64> {
    urbounds::phi_tilde(mu).map_err(err)
}

#[pyfunction]
fn phi_asymptotic(mu: f64) -> PyResult<f64> {
    urbounds::phi_asymptotic(mu).map_err(err)
}

/// `(min <n>, probabilities)` over diagonal Fock mixtures of purity `mu`.
#[pyfunction]
#[pyo3(signature = (mu, max_levels=256))]
fn min_mean_occupation(mu: f64, max_levels: usize) -> PyResult<(f64, Vec<f64>)> {
    urbounds::min_mean_occupation(mu, max_levels).map_err(err)
}

#[pyfunction]
fn frontier_table<'py>(py: Python<'py>, mu_min: f64, mu_max: f64, steps: usize) -> PyResult<Bound<'py, PyAny>> {
    let table = urbounds::frontier_table(mu_min, mu_max, steps).map_err(err)?;
    serialize(py, &table)
}

/// Randomized validity sweep; returns the summary dict.
#[pyfunction]
#[pyo3(signature = (seed=0, trials=500, dims=vec![6]))]
fn verify<'py>(py: Python<'py>, seed: u64, trials: usize, dims: Vec<usize>) -> PyResult<Bound<'py, PyAny>> {
    if dims.iter().any(|d| !(2..=64).contains(d)) {
        return Err(PyValueError::new_err("dimensions must lie in [2, 64]"));
    }
    let (summary, _) = py
        .detach(|| run_sweep(&SweepConfig::new(seed, trials, dims)))
        .map_err(err)?;
    serialize(py, &summary)
}

#[pymodule]
fn pyurbounds(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMomentPair>()?;
    m.add_function(wrap_pyfunction!(analytic_covariances, m)?)?;
    m.add_function(wrap_pyfunction!(example_purity, m)?)?;
    m.add_function(wrap_pyfunction!(saturation_residual, m)?)?;
    m.add_function(wrap_pyfunction!(numeric_reduced_purity, m)?)?;
    m.add_function(wrap_pyfunction!(report_from_json, m)?)?;
    m.add_function(wrap_pyfunction!(thermal_moments, m)?)?;
    m.add_function(wrap_pyfunction!(phi_exact, m)?)?;
    m.add_function(wrap_pyfunction!(phi_tilde, m)?)?;
    m.add_function(wrap_pyfunction!(phi_asymptotic, m)?)?;
    m.add_function(wrap_pyfunction!(min_mean_occupation, m)?)?;
    m.add_function(wrap_pyfunction!(frontier_table, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
