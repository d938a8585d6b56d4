//! Python bindings for `analogia`.

use analogia::boolean::{affine_distance as affine_distance_impl, verify_ap_affine as verify_ap_affine_impl};
use analogia::boolean::{BooleanModel, BooleanTable};
use analogia::bounds::{self, AverageMode, BooleanSuiteConfig, SuiteConfig};
use analogia::counterexample::algorithm1_lower_bound;
use analogia::numeric::{self, SolvePowerOptions};
use analogia::regression::{self, LabeledDataset};
use analogia::{Error, FiniteMeasure};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

create_exception!(analogia_py, AnalogiaError, PyException);

fn err(e: Error) -> PyErr {
    match e {
        Error::Usage(_) | Error::Domain(_) => PyValueError::new_err(e.to_string()),
        other => AnalogiaError::new_err(other.to_string()),
    }
}

fn model_arg(name: &str) -> PyResult<BooleanModel> {
    name.parse().map_err(err)
}

/// Converts any serializable report into plain Python dicts and lists.
fn to_py<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<PyObject> {
    let v = serde_json::to_value(value).map_err(|e| AnalogiaError::new_err(e.to_string()))?;
    json_to_py(py, &v)
}

fn json_to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<PyObject> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any().unbind(),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.into_pyobject(py)?.into_any().unbind(),
            (None, Some(i)) => i.into_pyobject(py)?.into_any().unbind(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any().unbind(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any().unbind(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any().unbind()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, json_to_py(py, item)?)?;
            }
            dict.into_any().unbind()
        }
    })
}

#[pyclass(name = "Tolerance", frozen)]
#[derive(Clone, Copy)]
struct PyTolerance(analogia::Tolerance);

#[pymethods]
impl PyTolerance {
    #[new]
    #[pyo3(signature = (rel = 1e-9, abs = 1e-12))]
    fn new(rel: f64, abs: f64) -> PyResult<Self> {
        analogia::Tolerance::new(rel, abs).map(Self).map_err(err)
    }

    #[getter]
    fn rel(&self) -> f64 {
        self.0.rel()
    }

    #[getter]
    fn abs(&self) -> f64 {
        self.0.abs()
    }

    fn __repr__(&self) -> String {
        format!("Tolerance(rel={}, abs={})", self.0.rel(), self.0.abs())
    }
}

fn tol_or_default(tol: Option<PyTolerance>) -> analogia::Tolerance {
    tol.map(|t| t.0).unwrap_or_default()
}

#[pyclass(name = "PowerProfile", frozen)]
#[derive(Clone)]
struct PyPowerProfile(analogia::PowerProfile);

#[pymethods]
impl PyPowerProfile {
    #[new]
    fn new(p: Vec<f64>, q: f64) -> PyResult<Self> {
        analogia::PowerProfile::new(p, q).map(Self).map_err(err)
    }

    #[getter]
    fn p(&self) -> Vec<f64> {
        self.0.p().to_vec()
    }

    #[getter]
    fn q(&self) -> f64 {
        self.0.q()
    }

    fn __repr__(&self) -> String {
        format!("PowerProfile(p={:?}, q={})", self.0.p(), self.0.q())
    }
}

#[pyclass(name = "ApModel", frozen)]
#[derive(Clone)]
struct PyApModel(regression::ApModel);

#[pymethods]
impl PyApModel {
    #[new]
    fn new(coefficients: Vec<f64>, intercept: f64, profile: PyPowerProfile) -> PyResult<Self> {
        regression::ApModel::new(coefficients, intercept, profile.0).map(Self).map_err(err)
    }

    #[getter]
    fn coefficients(&self) -> Vec<f64> {
        self.0.coefficients().to_vec()
    }

    #[getter]
    fn intercept(&self) -> f64 {
        self.0.intercept()
    }

    #[getter]
    fn profile(&self) -> PyPowerProfile {
        PyPowerProfile(self.0.profile().clone())
    }

    fn __call__(&self, x: Vec<f64>) -> PyResult<f64> {
        regression::ap_eval(&self.0, &x).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("ApModel(coefficients={:?}, intercept={})", self.0.coefficients(), self.0.intercept())
    }
}

#[pyclass(name = "Dataset", frozen)]
#[derive(Clone)]
struct PyDataset(LabeledDataset);

#[pymethods]
impl PyDataset {
    #[new]
    #[pyo3(signature = (points, labels, weights = None))]
    fn new(points: Vec<Vec<f64>>, labels: Vec<f64>, weights: Option<Vec<f64>>) -> PyResult<Self> {
        let d = match weights {
            Some(w) => LabeledDataset::with_measure(points, labels, FiniteMeasure::from_weights(w).map_err(err)?),
            None => LabeledDataset::new(points, labels),
        };
        d.map(Self).map_err(err)
    }

    #[getter]
    fn points(&self) -> Vec<Vec<f64>> {
        self.0.points().to_vec()
    }

    #[getter]
    fn labels(&self) -> Vec<f64> {
        self.0.labels().to_vec()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    /// Analogical value at `query`, or `None` outside the extension.
    #[pyo3(signature = (query, profile, tol = None, cap = None))]
    fn predict(&self, query: Vec<f64>, profile: &PyPowerProfile, tol: Option<PyTolerance>, cap: Option<usize>) -> PyResult<Option<f64>> {
        regression::analogical_value(&self.0, &query, &profile.0, tol_or_default(tol), cap).map_err(err)
    }

    /// Fits an AP model; returns `(model, residual_uniform, residual_expected)`.
    fn fit(&self, profile: &PyPowerProfile) -> PyResult<(PyApModel, f64, f64)> {
        let fit = regression::ap_fit(&self.0, &profile.0).map_err(err)?;
        Ok((PyApModel(fit.model), fit.residual_uniform, fit.residual_expected))
    }
}

#[pyfunction]
fn generalized_mean(values: Vec<f64>, p: f64) -> PyResult<f64> {
    numeric::generalized_mean(&values, p).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (a, b, c, d, p, tol = None))]
fn analogy_holds(a: f64, b: f64, c: f64, d: f64, p: f64, tol: Option<PyTolerance>) -> PyResult<bool> {
    numeric::scalar_analogy_holds(a, b, c, d, p, tol_or_default(tol)).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (a, b, c, d, profile, tol = None))]
fn vector_analogy_holds(
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
    d: Vec<f64>,
    profile: &PyPowerProfile,
    tol: Option<PyTolerance>,
) -> PyResult<bool> {
    numeric::analogy_holds(&a, &b, &c, &d, &profile.0, tol_or_default(tol)).map_err(err)
}

#[pyfunction]
fn sol(a: f64, b: f64, c: f64, q: f64) -> PyResult<Option<f64>> {
    numeric::sol(a, b, c, q).map_err(err)
}

#[pyfunction]
fn solve_power(a: f64, b: f64, c: f64, d: f64) -> PyResult<f64> {
    numeric::solve_power(a, b, c, d, SolvePowerOptions::default()).map_err(err)
}

#[pyfunction]
fn q_distance(x: f64, y: f64, q: f64) -> PyResult<f64> {
    numeric::q_distance(x, y, q).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n = 4, model = "minimal"))]
fn counterexample(py: Python<'_>, n: u32, model: &str) -> PyResult<PyObject> {
    let model = model_arg(model)?;
    let report = py.allow_threads(|| algorithm1_lower_bound(n, model)).map_err(err)?;
    to_py(py, &report)
}

/// Nearest affine function to a truth table given as a bitstring.
#[pyfunction]
fn affine_distance(py: Python<'_>, table: &str) -> PyResult<PyObject> {
    let f = BooleanTable::from_bitstring(table).map_err(err)?;
    let d = affine_distance_impl(&f).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("num", d.distance.numer())?;
    out.set_item("den", d.distance.denom())?;
    out.set_item("distance", d.distance.to_f64())?;
    out.set_item("mismatches", d.mismatches)?;
    out.set_item("witness", d.witness.to_bitstring())?;
    Ok(out.into_any().unbind())
}

#[pyfunction]
#[pyo3(signature = (n, model = "minimal"))]
fn verify_ap_affine(py: Python<'_>, n: u32, model: &str) -> PyResult<PyObject> {
    let model = model_arg(model)?;
    let report = py.allow_threads(|| verify_ap_affine_impl(n, model)).map_err(err)?;
    to_py(py, &report)
}

/// Runs a bound suite (`worst`, `average` or `boolean`) and returns its report.
#[pyfunction]
#[pyo3(signature = (suite, q = 1.0, delta = None, trials = 100, seed = 0, mode = "uniform", n = 2, model = "minimal"))]
#[allow(clippy::too_many_arguments)]
fn verify_bounds(
    py: Python<'_>,
    suite: &str,
    q: f64,
    delta: Option<f64>,
    trials: usize,
    seed: u64,
    mode: &str,
    n: u32,
    model: &str,
) -> PyResult<PyObject> {
    let report = match suite {
        "worst" | "average" => {
            let cfg = SuiteConfig::new(q, delta, trials, seed).map_err(err)?;
            if suite == "worst" {
                py.allow_threads(|| bounds::run_worst_case_suite(&cfg))
            } else {
                let mode: AverageMode = mode.parse().map_err(err)?;
                py.allow_threads(|| bounds::run_average_suite(&cfg, mode))
            }
        }
        "boolean" => {
            let cfg = BooleanSuiteConfig {
                n,
                model: model_arg(model)?,
                trials,
                seed,
            };
            py.allow_threads(|| bounds::run_boolean_suite(&cfg))
        }
        other => return Err(PyValueError::new_err(format!("unknown suite {other:?}"))),
    }
    .map_err(err)?;
    to_py(py, &report)
}

#[pymodule]
fn analogia_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("AnalogiaError", m.py().get_type::<AnalogiaError>())?;
    m.add_class::<PyTolerance>()?;
    m.add_class::<PyPowerProfile>()?;
    m.add_class::<PyApModel>()?;
    m.add_class::<PyDataset>()?;
    m.add_function(wrap_pyfunction!(generalized_mean, m)?)?;
    m.add_function(wrap_pyfunction!(analogy_holds, m)?)?;
    m.add_function(wrap_pyfunction!(vector_analogy_holds, m)?)?;
    m.add_function(wrap_pyfunction!(sol, m)?)?;
    m.add_function(wrap_pyfunction!(solve_power, m)?)?;
    m.add_function(wrap_pyfunction!(q_distance, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(affine_distance, m)?)?;
    m.add_function(wrap_pyfunction!(verify_ap_affine, m)?)?;
    m.add_function(wrap_pyfunction!(verify_bounds, m)?)?;
    Ok(())
}
