use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use curie_weiss::asymptotics;
use curie_weiss::model::{self, Regime, Roots};
use curie_weiss::sampling;
use curie_weiss::special;
use curie_weiss::verification::{self, SuiteOptions};

fn to_py(e: curie_weiss::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "ModelParams", frozen)]
struct PyModelParams {
    inner: model::ModelParams,
}

#[pymethods]
impl PyModelParams {
    #[new]
    #[pyo3(signature = (n, beta = 1.0, h = 0.0))]
    fn new(n: u64, beta: f64, h: f64) -> PyResult<Self> {
        Ok(Self {
            inner: model::ModelParams::new(n, beta, h).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn critical(n: u64) -> PyResult<Self> {
        Ok(Self {
            inner: model::ModelParams::critical(n).map_err(to_py)?,
        })
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.n()
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta()
    }

    #[getter]
    fn h(&self) -> f64 {
        self.inner.h()
    }

    fn regime(&self) -> &'static str {
        match self.inner.regime() {
            Regime::Unique => "unique",
            Regime::Pair => "pair",
            Regime::Critical => "critical",
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "ModelParams(n={}, beta={}, h={})",
            self.inner.n(),
            self.inner.beta(),
            self.inner.h()
        )
    }
}

/// Exact law of the magnetization, indexed by the number of up spins.
#[pyclass(name = "LogWeightTable", frozen)]
struct PyLogWeightTable {
    inner: model::LogWeightTable,
}

#[pymethods]
impl PyLogWeightTable {
    #[new]
    fn new(params: PyRef<'_, PyModelParams>) -> PyResult<Self> {
        Ok(Self {
            inner: model::build_log_weight_table(params.inner).map_err(to_py)?,
        })
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.n()
    }

    fn log_z(&self) -> f64 {
        self.inner.log_z()
    }

    fn log_weight(&self, k: u64) -> PyResult<f64> {
        if k > self.inner.n() {
            return Err(PyValueError::new_err(format!(
                "k = {k} exceeds n = {}",
                self.inner.n()
            )));
        }
        Ok(self.inner.log_weight(k))
    }

    fn probabilities(&self) -> Vec<f64> {
        self.inner.probabilities()
    }

    /// Probability of `S_n` keyed by the spin sum.
    fn pmf_by_spin_sum(&self) -> Vec<(i64, f64)> {
        self.inner.pmf_by_spin_sum().into_iter().collect()
    }

    /// `P(S_n > n^{3/4} x)` for the critical model.
    fn exact_tail_critical(&self, x: f64) -> PyResult<f64> {
        model::exact_tail_critical(&self.inner, x).map_err(to_py)
    }
}

#[pyclass(name = "LimitLaw", frozen)]
struct PyLimitLaw {
    inner: asymptotics::LimitLaw,
}

#[pymethods]
impl PyLimitLaw {
    #[new]
    fn new() -> PyResult<Self> {
        Ok(Self {
            inner: asymptotics::LimitLaw::new().map_err(to_py)?,
        })
    }

    #[getter]
    fn c1(&self) -> f64 {
        self.inner.c1
    }

    #[getter]
    fn c2(&self) -> f64 {
        self.inner.c2
    }

    fn cdf(&self, x: f64) -> f64 {
        self.inner.cdf(x)
    }

    fn tail(&self, x: f64) -> f64 {
        self.inner.limit_tail(x)
    }

    /// First-order correction `G(x)`.
    fn correction(&self, x: f64) -> f64 {
        self.inner.correction(x)
    }

    fn corrected_tail(&self, n: u64, x: f64) -> f64 {
        self.inner.corrected_tail(n, x)
    }

    fn second_order_limit(&self, x: f64) -> f64 {
        self.inner.second_order_limit(x)
    }

    fn error_envelope(&self, n: u64, x: f64) -> PyResult<f64> {
        self.inner.error_envelope(n, x).map_err(to_py)
    }
}

#[pyclass(name = "Sampler", unsendable)]
struct PySampler {
    inner: sampling::SamplerState,
}

#[pymethods]
impl PySampler {
    #[new]
    fn new(params: PyRef<'_, PyModelParams>, seed: u64) -> PyResult<Self> {
        Ok(Self {
            inner: sampling::SamplerState::new(params.inner, seed).map_err(to_py)?,
        })
    }

    /// Independent draws of the spin sum.
    fn sample(&mut self, count: usize) -> Vec<i64> {
        self.inner.sample_magnetization_exact(count)
    }

    /// Empirical pmf (by number of up spins) after heat-bath dynamics, and
    /// its total-variation distance to the exact law.
    #[pyo3(signature = (sweeps, burn_in = 1000))]
    fn glauber(&mut self, sweeps: usize, burn_in: usize) -> (Vec<f64>, f64) {
        let pmf = self.inner.glauber_chain(sweeps, burn_in);
        let tv = pmf.total_variation(&self.inner.table().probabilities());
        (pmf.probabilities(), tv)
    }

    #[getter]
    fn magnetization(&self) -> i64 {
        self.inner.magnetization()
    }
}

/// Roots of `m = tanh(beta (m + h))`; empty in the critical case.
#[pyfunction]
fn solve_fixed_point(beta: f64, h: f64) -> PyResult<Vec<f64>> {
    let roots = model::solve_fixed_point(beta, h).map_err(to_py)?;
    Ok(match roots.roots {
        Roots::Critical => Vec::new(),
        _ => roots.values(),
    })
}

#[pyfunction]
fn log_factorial(n: u64) -> f64 {
    special::log_factorial(n)
}

#[pyfunction]
fn stirling_bounds(n: u64) -> PyResult<(f64, f64)> {
    let b = special::stirling_bounds(n).map_err(to_py)?;
    Ok((b.lower(), b.upper()))
}

#[pyfunction]
fn quartic_tail_integral(k: u32, x: f64) -> PyResult<f64> {
    special::quartic_tail_integral(k, x).map_err(to_py)
}

#[pyfunction]
fn upper_incomplete_gamma(s: f64, z: f64) -> PyResult<f64> {
    special::upper_incomplete_gamma(s, z).map_err(to_py)
}

#[pyfunction]
fn normal_cdf(x: f64) -> f64 {
    special::normal_cdf(x)
}

#[pyfunction]
fn j(t: f64) -> f64 {
    model::j(t)
}

#[pyfunction]
fn j_derivative(order: u32, t: f64) -> PyResult<f64> {
    model::j_derivative(order, t).map_err(to_py)
}

#[pyfunction]
fn check_ids() -> Vec<&'static str> {
    verification::CHECK_IDS.to_vec()
}

/// Runs one verification check and returns its report as JSON text.
#[pyfunction]
#[pyo3(signature = (check_id, n_values = None, x_values = None))]
fn verify(
    check_id: &str,
    n_values: Option<Vec<u64>>,
    x_values: Option<Vec<f64>>,
) -> PyResult<String> {
    let report =
        verification::run_check(check_id, &SuiteOptions { n_values, x_values }).map_err(to_py)?;
    serde_json::to_string(&report).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule(name = "curie_weiss")]
fn curie_weiss_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModelParams>()?;
    m.add_class::<PyLogWeightTable>()?;
    m.add_class::<PyLimitLaw>()?;
    m.add_class::<PySampler>()?;
    m.add_function(wrap_pyfunction!(solve_fixed_point, m)?)?;
    m.add_function(wrap_pyfunction!(log_factorial, m)?)?;
    m.add_function(wrap_pyfunction!(stirling_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(quartic_tail_integral, m)?)?;
    m.add_function(wrap_pyfunction!(upper_incomplete_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(normal_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(j, m)?)?;
    m.add_function(wrap_pyfunction!(j_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(check_ids, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("RNG_ALGORITHM", sampling::RNG_ALGORITHM)?;
    Ok(())
}
