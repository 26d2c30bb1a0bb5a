//! Python bindings: the main types and operations of the root-statistics
//! engine, exposed with plain Python data types.
//!
//! Build produces `libtrigroots_py.so`; import it as `trigroots_py` (see
//! `python/smoke_test.py` for the loading dance and a usage tour).

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use trigroots::coefficients::CoefficientDistribution as CoreDist;
use trigroots::covariance;
use trigroots::edgeworth;
use trigroots::ergodic;
use trigroots::montecarlo;
use trigroots::polynomial::TrigPolynomialSample as CoreSample;
use trigroots::roots;
use trigroots::stream::{rng_for, StreamDomain};

/// A centered, unit-variance coefficient law.
#[pyclass(name = "CoefficientDistribution", frozen, from_py_object)]
#[derive(Clone)]
struct PyDist {
    inner: CoreDist,
}

#[pymethods]
impl PyDist {
    #[staticmethod]
    fn gaussian() -> Self {
        PyDist { inner: CoreDist::Gaussian }
    }

    #[staticmethod]
    fn uniform() -> Self {
        PyDist { inner: CoreDist::Uniform }
    }

    #[staticmethod]
    fn mixture(p: f64, v1: f64, v2: f64) -> PyResult<Self> {
        CoreDist::mixture(p, v1, v2)
            .map(|inner| PyDist { inner })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[staticmethod]
    fn sign_flip() -> Self {
        PyDist { inner: CoreDist::SignFlip }
    }

    /// Exact analytic moment of one component (orders 1..=4).
    fn moment(&self, order: u32) -> PyResult<f64> {
        self.inner.moment(order).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// The theorem's fourth-moment aggregate y*.
    fn y_star(&self) -> f64 {
        self.inner.moment_table().y_star()
    }

    /// Predicted variance shift per unit degree, y*/60.
    fn predicted_shift(&self) -> f64 {
        self.inner.moment_table().y_star() / 60.0
    }

    fn doeblin_ok(&self) -> bool {
        self.inner.doeblin_ok()
    }

    fn name(&self) -> String {
        self.inner.name()
    }

    fn __repr__(&self) -> String {
        format!("CoefficientDistribution({})", self.inner.name())
    }
}

/// One realization of the random trigonometric polynomial.
#[pyclass(name = "TrigPolynomialSample", frozen)]
struct PySample {
    inner: CoreSample,
}

#[pymethods]
impl PySample {
    /// Build from explicit cosine/sine coefficient arrays.
    #[staticmethod]
    fn from_coefficients(a: Vec<f64>, b: Vec<f64>) -> PyResult<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(PyValueError::new_err("need equal-length, non-empty coefficient arrays"));
        }
        Ok(PySample { inner: CoreSample::new(a, b) })
    }

    /// Draw sample `index` of the stream `(seed, n, index)`.
    #[staticmethod]
    #[pyo3(signature = (dist, n, seed, index = 0))]
    fn sample(dist: &PyDist, n: usize, seed: u64, index: u64) -> Self {
        let mut rng = rng_for(seed, StreamDomain::Ensemble, n as u64, index);
        PySample { inner: CoreSample::from_distribution(&dist.inner, n, &mut rng) }
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn eval(&self, t: f64) -> f64 {
        self.inner.eval(t)
    }

    fn eval_derivative(&self, t: f64) -> f64 {
        self.inner.eval_derivative(t)
    }

    /// Values and derivatives on the uniform grid `t_j = j pi / m`.
    fn eval_grid(&self, m: usize) -> PyResult<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        let ge = trigroots::polynomial::eval_grid(&self.inner, m)
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok((ge.grid, ge.values, ge.derivative_values))
    }

    /// `(P_n(t), P_n'(t), P_n(s), P_n'(s))` in the rescaled variables.
    fn pair_statistic(&self, t: f64, s: f64) -> [f64; 4] {
        self.inner.pair_statistic(t, s)
    }

    fn __repr__(&self) -> String {
        format!("TrigPolynomialSample(n={})", self.inner.n())
    }
}

/// Root-count result: count, refined locations, suspicious intervals, and
/// the number of direct evaluations spent.
#[pyfunction]
#[pyo3(signature = (sample))]
fn count_roots(py: Python<'_>, sample: &PySample) -> PyResult<Py<PyDict>> {
    let r = roots::count_roots(&sample.inner);
    let out = PyDict::new(py);
    out.set_item("count", r.count)?;
    out.set_item("locations", r.locations)?;
    out.set_item("suspicious_intervals", r.suspicious_intervals)?;
    out.set_item("evaluations_used", r.evaluations_used)?;
    Ok(out.into())
}

/// The smoothed counting functional `I_{0,pi}(delta, p_n)`; `delta = None`
/// selects `min(n^-5, delta_hat/2)`.
#[pyfunction]
#[pyo3(signature = (sample, delta = None, quadrature_points = 32))]
fn kac_rice_count(
    py: Python<'_>,
    sample: &PySample,
    delta: Option<f64>,
    quadrature_points: usize,
) -> PyResult<Py<PyDict>> {
    let params = match delta {
        Some(d) if d > 0.0 => {
            let mut p = roots::SmoothedCountParams::new(d);
            p.quadrature_points = quadrature_points;
            p
        }
        Some(_) => return Err(PyValueError::new_err("delta must be positive")),
        None => roots::SmoothedCountParams::auto_for(&sample.inner),
    };
    let kr = roots::kac_rice_count(&sample.inner, &params);
    let out = PyDict::new(py);
    out.set_item("value", kr.value)?;
    out.set_item("delta", kr.delta)?;
    out.set_item("degenerate", kr.degenerate)?;
    out.set_item("converged", kr.converged)?;
    Ok(out.into())
}

/// `(omega, delta_{0,pi})` of the sample.
#[pyfunction]
fn min_modulus(sample: &PySample) -> (f64, f64) {
    roots::min_modulus(&sample.inner)
}

/// Finite-n covariance matrix of `(P_n(t), P_n'(t), P_n(s), P_n'(s))`.
#[pyfunction]
fn sigma_n(n: usize, t: f64, s: f64) -> Vec<Vec<f64>> {
    let m = covariance::sigma_n(n, t, s);
    m.matrix().iter().map(|row| row.to_vec()).collect()
}

/// Stationary limit covariance as a function of `u = t - s`, plus its
/// determinant and minimum eigenvalue.
#[pyfunction]
fn sigma_limit(py: Python<'_>, u: f64) -> PyResult<Py<PyDict>> {
    let m = covariance::sigma_limit(u);
    let out = PyDict::new(py);
    out.set_item("matrix", m.matrix().iter().map(|row| row.to_vec()).collect::<Vec<_>>())?;
    out.set_item("det", m.det())?;
    out.set_item("min_eigenvalue", m.min_eigenvalue())?;
    Ok(out.into())
}

/// Expected number of roots on `[0, pi)` under Gaussian coefficients.
#[pyfunction]
fn gaussian_mean_density(n: usize) -> f64 {
    covariance::gaussian_mean_density(n)
}

/// The limiting variance constant `C(G)` by two-point Kac-Rice quadrature.
#[pyfunction]
#[pyo3(signature = (u_max = 400.0, panels_per_unit = 4))]
fn gaussian_variance_constant(py: Python<'_>, u_max: f64, panels_per_unit: usize) -> PyResult<Py<PyDict>> {
    let vc = covariance::gaussian_variance_constant(&covariance::QuadratureParams {
        u_max,
        panels_per_unit,
        ..Default::default()
    });
    let out = PyDict::new(py);
    out.set_item("value", vc.value)?;
    out.set_item("two_pi_normalized", vc.two_pi_normalized)?;
    out.set_item("tail", vc.tail)?;
    Ok(out.into())
}

/// Probabilists' Hermite polynomial.
#[pyfunction]
fn hermite(k: usize, x: f64) -> f64 {
    edgeworth::hermite_uni(k, x)
}

/// The exact rational constant chain, as strings.
#[pyfunction]
fn assemble_constants(py: Python<'_>) -> PyResult<Py<PyDict>> {
    let report = edgeworth::assemble_constants();
    let out = PyDict::new(py);
    for ((i, j), term) in &report.inner_terms {
        out.set_item(format!("inner_term_{i}{j}"), term.to_string())?;
    }
    out.set_item("inner_sum", report.inner_sum.to_string())?;
    out.set_item("gamma_prime_coefficient", report.gamma_prime_coefficient.to_string())?;
    out.set_item("theorem_coefficient", report.theorem_coefficient.to_string())?;
    out.set_item("iid_kurtosis_divisor", report.iid_kurtosis_divisor.to_string())?;
    Ok(out.into())
}

/// Weighted ergodic average `(1/n) sum (k/n)^q f(k alpha)` and its limit.
#[pyfunction]
#[pyo3(signature = (alpha, q, n, f = "cos"))]
fn weighted_average(alpha: f64, q: u32, n: usize, f: &str) -> PyResult<(f64, f64)> {
    let func = match f {
        "one" => ergodic::PeriodicFunction::One,
        "cos" => ergodic::PeriodicFunction::Cos,
        "sin" => ergodic::PeriodicFunction::Sin,
        "cos2" => ergodic::PeriodicFunction::CosSquared,
        "sin2" => ergodic::PeriodicFunction::SinSquared,
        other => return Err(PyValueError::new_err(format!("unknown test function `{other}`"))),
    };
    let query = ergodic::ErgodicQuery::new(alpha, q, n, func);
    Ok((ergodic::weighted_average(&query), query.limit()))
}

/// Quartic mixing-matrix average and its limit `1/(4(1+2(i+j-2)))`.
#[pyfunction]
fn quartic_average(i: u8, j: u8, l: u8, lp: u8, t: f64, s: f64, n: usize) -> (f64, f64) {
    (ergodic::quartic_average(i, j, l, lp, t, s, n), ergodic::quartic_limit(i, j))
}

/// Trigonometric sum `S_{b,i}` with its discrepancy and bound shape.
#[pyfunction]
fn trig_sum(py: Python<'_>, b: f64, i: u8, n: usize) -> PyResult<Py<PyDict>> {
    let ts = ergodic::trig_sum(b, i, n).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let out = PyDict::new(py);
    out.set_item("cosine", ts.cosine)?;
    out.set_item("sine", ts.sine)?;
    out.set_item("b_bar", ts.b_bar)?;
    out.set_item("bound", ts.bound)?;
    Ok(out.into())
}

fn summary_to_py(py: Python<'_>, summary: &montecarlo::ExperimentSummary) -> PyResult<Py<PyDict>> {
    let out = PyDict::new(py);
    let rows: Vec<Py<PyDict>> = summary
        .rows
        .iter()
        .map(|r| {
            let row = PyDict::new(py);
            row.set_item("dist", &r.dist)?;
            row.set_item("n", r.n)?;
            row.set_item("m", r.m)?;
            row.set_item("mean_count", r.mean_count)?;
            row.set_item("var_count", r.var_count)?;
            row.set_item("mean_over_n", r.mean_over_n)?;
            row.set_item("var_over_n", r.var_over_n)?;
            row.set_item("stderr_mean", r.stderr_mean)?;
            row.set_item("stderr_var", r.stderr_var)?;
            row.set_item("m_effective", r.m_effective)?;
            row.set_item("suspicious", r.suspicious)?;
            row.set_item("seed", r.seed)?;
            row.set_item("theorem_covered", r.theorem_covered)?;
            Ok(row.into())
        })
        .collect::<PyResult<_>>()?;
    out.set_item("rows", rows)?;
    out.set_item("unreliable", summary.unreliable)?;
    Ok(out.into())
}

/// Run a root-count ensemble: `m` samples at each degree in `n_list`.
#[pyfunction]
#[pyo3(signature = (dist, n_list, m, seed, workers = 1))]
fn run_ensemble(
    py: Python<'_>,
    dist: &PyDist,
    n_list: Vec<usize>,
    m: usize,
    seed: u64,
    workers: usize,
) -> PyResult<Py<PyDict>> {
    let mut config = montecarlo::ExperimentConfig::new(dist.inner, n_list, m, seed);
    config.workers = workers;
    let summary =
        montecarlo::run_ensemble(&config).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    summary_to_py(py, &summary)
}

/// Run an ensemble for `dist` plus an independent Gaussian baseline and
/// compare the observed variance shift against the predicted `y*/60`.
#[pyfunction]
#[pyo3(signature = (dist, n_list, m, seed, workers = 1))]
fn compare_to_theory(
    py: Python<'_>,
    dist: &PyDist,
    n_list: Vec<usize>,
    m: usize,
    seed: u64,
    workers: usize,
) -> PyResult<Py<PyDict>> {
    let mut config = montecarlo::ExperimentConfig::new(dist.inner, n_list.clone(), m, seed);
    config.workers = workers;
    let mut baseline = montecarlo::ExperimentConfig::new(CoreDist::Gaussian, n_list, m, seed ^ 0x9e37_79b9);
    baseline.workers = workers;
    let summary =
        montecarlo::run_ensemble(&config).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    let base =
        montecarlo::run_ensemble(&baseline).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    let report = montecarlo::compare_to_theory(&summary, &base, &dist.inner.moment_table())
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    let out = PyDict::new(py);
    out.set_item("predicted_shift", report.predicted_shift)?;
    out.set_item("y_star", report.y_star)?;
    out.set_item("theorem_covered", report.theorem_covered)?;
    let rows: Vec<Py<PyDict>> = report
        .rows
        .iter()
        .map(|r| {
            let row = PyDict::new(py);
            row.set_item("n", r.n)?;
            row.set_item("var_over_n", r.var_over_n)?;
            row.set_item("var_over_n_baseline", r.var_over_n_baseline)?;
            row.set_item("observed_shift", r.observed_shift)?;
            row.set_item("stderr", r.stderr)?;
            row.set_item("z", r.z)?;
            Ok(row.into())
        })
        .collect::<PyResult<_>>()?;
    out.set_item("rows", rows)?;
    if let Some(ex) = &report.extrapolation {
        let e = PyDict::new(py);
        e.set_item("degrees", ex.degrees.clone())?;
        e.set_item("intercept", ex.intercept)?;
        e.set_item("intercept_se", ex.intercept_se)?;
        e.set_item("slope", ex.slope)?;
        e.set_item("z", ex.z)?;
        out.set_item("extrapolation", e)?;
    }
    Ok(out.into())
}

#[pymodule]
fn trigroots_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDist>()?;
    m.add_class::<PySample>()?;
    m.add_function(wrap_pyfunction!(count_roots, m)?)?;
    m.add_function(wrap_pyfunction!(kac_rice_count, m)?)?;
    m.add_function(wrap_pyfunction!(min_modulus, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_n, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_limit, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_mean_density, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_variance_constant, m)?)?;
    m.add_function(wrap_pyfunction!(hermite, m)?)?;
    m.add_function(wrap_pyfunction!(assemble_constants, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_average, m)?)?;
    m.add_function(wrap_pyfunction!(quartic_average, m)?)?;
    m.add_function(wrap_pyfunction!(trig_sum, m)?)?;
    m.add_function(wrap_pyfunction!(run_ensemble, m)?)?;
    m.add_function(wrap_pyfunction!(compare_to_theory, m)?)?;
    Ok(())
}
