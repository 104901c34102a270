//! Python bindings.

use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use netepi::graphs::{self, DegreeSource};
use netepi::harness::{self, ExperimentConfig, ExperimentKind};
use netepi::{ode, outbreak, sim};

fn to_py(e: netepi::Error) -> PyErr {
    if e.is_config() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for netepi::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

#[pyclass(name = "DegreeDistribution", module = "netepi_py", frozen)]
struct PyDegree(netepi::DegreeDistribution);

#[pymethods]
impl PyDegree {
    #[staticmethod]
    fn point_mass(k: usize) -> Self {
        Self(netepi::DegreeDistribution::point_mass(k))
    }

    #[staticmethod]
    fn poisson(mean: f64) -> PyResult<Self> {
        netepi::DegreeDistribution::poisson(mean).py().map(Self)
    }

    #[staticmethod]
    fn from_weights(weights: Vec<f64>) -> PyResult<Self> {
        netepi::DegreeDistribution::from_weights(&weights).py().map(Self)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(Self).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn probs(&self) -> Vec<f64> {
        self.0.probs().to_vec()
    }

    fn pmf(&self, k: usize) -> f64 {
        self.0.pmf(k)
    }

    fn mean(&self) -> f64 {
        self.0.mean()
    }

    fn laplace(&self, x: f64) -> PyResult<f64> {
        self.0.laplace(x).py()
    }

    fn size_biased(&self) -> PyResult<Self> {
        self.0.size_biased().py().map(Self)
    }

    fn phi(&self, z: f64) -> f64 {
        self.0.phi(z)
    }

    fn __repr__(&self) -> String {
        format!("DegreeDistribution(mean={})", self.0.mean())
    }
}

#[pyclass(name = "RateFunction", module = "netepi_py", frozen)]
struct PyRate(netepi::RateFunction);

#[pymethods]
impl PyRate {
    #[staticmethod]
    fn constant(value: f64) -> PyResult<Self> {
        netepi::RateFunction::constant(value).py().map(Self)
    }

    #[staticmethod]
    fn ramp(start: f64, end: f64, t0: f64, t1: f64) -> PyResult<Self> {
        netepi::RateFunction::ramp(start, end, t0, t1).py().map(Self)
    }

    #[staticmethod]
    fn sinusoidal(base: f64, amplitude: f64, period: f64, phase: f64) -> PyResult<Self> {
        netepi::RateFunction::sinusoidal(base, amplitude, period, phase).py().map(Self)
    }

    #[staticmethod]
    fn piecewise_linear(knots: Vec<(f64, f64)>) -> PyResult<Self> {
        netepi::RateFunction::piecewise_linear(knots).py().map(Self)
    }

    fn __call__(&self, t: f64) -> f64 {
        self.0.evaluate(t)
    }
}

#[pyclass(name = "Graph", module = "netepi_py", frozen)]
struct PyGraph(netepi::SparseGraph);

#[pymethods]
impl PyGraph {
    #[staticmethod]
    fn erdos_renyi(n: usize, mean: f64, seed: u64) -> PyResult<Self> {
        graphs::erdos_renyi(n, mean, seed).py().map(Self)
    }

    #[staticmethod]
    fn configuration_model(n: usize, degree: &PyDegree, seed: u64) -> PyResult<Self> {
        graphs::configuration_model(n, DegreeSource::Iid(&degree.0), seed).py().map(Self)
    }

    #[staticmethod]
    fn from_edges(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        netepi::SparseGraph::from_edges(n, edges).py().map(Self)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn edge_count(&self) -> usize {
        self.0.edge_count()
    }

    fn degree(&self, v: usize) -> usize {
        self.0.degree(v)
    }
}

#[pyclass(name = "Trajectory", module = "netepi_py", frozen)]
struct PyTrajectory(netepi::Trajectory);

#[pymethods]
impl PyTrajectory {
    fn grid(&self) -> Vec<f64> {
        self.0.grid().to_vec()
    }

    /// `[s, e, i, r]` per grid time.
    fn fractions(&self) -> Vec<[f64; 4]> {
        self.0.grid_fractions().to_vec()
    }

    fn fractions_at(&self, t: f64) -> PyResult<[f64; 4]> {
        self.0.fractions_at(t).py()
    }

    fn final_outbreak(&self) -> PyResult<f64> {
        self.0.final_outbreak().py()
    }

    fn extinction_time(&self) -> Option<f64> {
        self.0.extinction_time()
    }

    /// `(time, vertex, from, to)` with states as single letters.
    fn events(&self) -> Vec<(f64, usize, char, char)> {
        self.0
            .events()
            .iter()
            .map(|e| (e.time, e.vertex as usize, e.from.as_char(), e.to.as_char()))
            .collect()
    }
}

#[pyclass(name = "LimitSolution", module = "netepi_py", frozen)]
struct PyLimit(netepi::LimitSolution);

#[pymethods]
impl PyLimit {
    #[getter]
    fn horizon(&self) -> f64 {
        self.0.horizon()
    }

    /// `[s, e, i, r]` at `t`.
    fn fractions(&self, t: f64) -> [f64; 4] {
        self.0.fractions(t)
    }

    fn pressure(&self, t: f64) -> f64 {
        self.0.pressure(t)
    }

    fn s_inf(&self, t: f64) -> f64 {
        self.0.s_inf(t)
    }

    fn i_inf(&self, t: f64) -> f64 {
        self.0.i_inf(t)
    }

    fn uniform_grid(&self, step: f64) -> Vec<f64> {
        self.0.uniform_grid(step)
    }

    fn outbreak(&self) -> PyOutbreak {
        PyOutbreak(outbreak::outbreak_of_solution(&self.0))
    }

    fn effective_rate(&self) -> f64 {
        outbreak::effective_rate_of(&self.0)
    }
}

#[pyclass(name = "OutbreakResult", module = "netepi_py", frozen)]
struct PyOutbreak(netepi::OutbreakResult);

#[pymethods]
impl PyOutbreak {
    #[getter]
    fn pressure(&self) -> f64 {
        self.0.pressure
    }

    #[getter]
    fn s_final(&self) -> f64 {
        self.0.s_final
    }

    #[getter]
    fn outbreak(&self) -> f64 {
        self.0.outbreak
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.0.residual
    }

    #[getter]
    fn method(&self) -> &'static str {
        self.0.method.as_str()
    }

    fn __repr__(&self) -> String {
        format!("OutbreakResult(outbreak={}, method={})", self.0.outbreak, self.0.method.as_str())
    }
}

/// SIR when `e0` is zero and `alpha` is 0, SEIR when `alpha` is 1.
#[pyfunction]
#[pyo3(signature = (graph, beta, rho, s0, t_max, grid_step, seed, alpha=0.0, lam=None, e0=0.0, i0=None))]
#[allow(clippy::too_many_arguments)]
fn simulate(
    py: Python<'_>,
    graph: &PyGraph,
    beta: &PyRate,
    rho: &PyRate,
    s0: f64,
    t_max: f64,
    grid_step: f64,
    seed: u64,
    alpha: f64,
    lam: Option<&PyRate>,
    e0: f64,
    i0: Option<f64>,
) -> PyResult<PyTrajectory> {
    let lam = lam.map(|l| l.0.clone()).unwrap_or(netepi::RateFunction::constant(1.0).py()?);
    let p = netepi::EpidemicParams::new(alpha, beta.0.clone(), rho.0.clone(), lam, s0, e0, i0.unwrap_or(1.0 - s0 - e0))
        .py()?;
    py.detach(|| sim::simulate(&graph.0, &p, t_max, grid_step, seed)).py().map(PyTrajectory)
}

#[pyfunction]
fn solve_sir_limit(theta: &PyDegree, beta: &PyRate, rho: &PyRate, s0: f64, t_max: f64) -> PyResult<PyLimit> {
    ode::solve_sir_limit(&theta.0, &beta.0, &rho.0, s0, t_max, ode::DEFAULT_RK_TOL).py().map(PyLimit)
}

#[pyfunction]
#[allow(clippy::too_many_arguments)]
fn solve_seir_limit(
    theta: &PyDegree,
    beta: &PyRate,
    rho: &PyRate,
    lam: &PyRate,
    s0: f64,
    e0: f64,
    i0: f64,
    t_max: f64,
) -> PyResult<PyLimit> {
    ode::solve_seir_limit(&theta.0, &beta.0, &rho.0, &lam.0, s0, e0, i0, t_max, ode::DEFAULT_RK_TOL)
        .py()
        .map(PyLimit)
}

/// SIR limit integrated until the infection dies out.
#[pyfunction]
fn sir_to_extinction(theta: &PyDegree, beta: &PyRate, rho: &PyRate, s0: f64) -> PyResult<PyLimit> {
    ode::sir_to_extinction(&theta.0, &beta.0, &rho.0, s0, &ode::LimitOptions::default()).py().map(PyLimit)
}

#[pyfunction]
fn solve_constant_ratio(theta: &PyDegree, r: f64, s0: f64) -> PyResult<PyOutbreak> {
    outbreak::solve_constant_ratio(&theta.0, r, s0).py().map(PyOutbreak)
}

#[pyfunction]
fn solve_time_varying(theta: &PyDegree, beta: &PyRate, rho: &PyRate, s0: f64) -> PyResult<PyOutbreak> {
    outbreak::solve_time_varying(&theta.0, &beta.0, &rho.0, s0, &ode::LimitOptions::default())
        .py()
        .map(PyOutbreak)
}

#[pyfunction]
fn regular_outbreak(kappa: usize, r: f64, s0: f64) -> PyResult<f64> {
    outbreak::regular_outbreak(kappa, r, s0).py()
}

#[pyfunction]
fn mean_field_outbreak(kappa: usize, r: f64, s0: f64) -> PyResult<f64> {
    outbreak::mean_field_outbreak(kappa, r, s0).py()
}

/// Runs an experiment kind (`"sim_vs_ode"`, `"periodic_sweep"`, ...) with
/// optional JSON overrides and returns the written paths.
#[pyfunction]
#[pyo3(signature = (kind, out_dir, config_json=None))]
fn run_experiment(py: Python<'_>, kind: &str, out_dir: PathBuf, config_json: Option<&str>) -> PyResult<Vec<PathBuf>> {
    let kind: ExperimentKind =
        serde_json::from_value(kind.into()).map_err(|e| PyValueError::new_err(format!("unknown kind: {e}")))?;
    let cfg = match config_json {
        Some(text) => {
            let mut value: serde_json::Value =
                serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
            if let Some(obj) = value.as_object_mut() {
                obj.entry("kind").or_insert_with(|| kind.as_str().into());
            }
            ExperimentConfig::from_json_with_preset(kind, &value.to_string()).py()?
        }
        None => ExperimentConfig::preset(kind),
    };
    py.detach(|| harness::with_threads(cfg.threads, || harness::run_experiment(&cfg, &out_dir)))
        .py()?
        .py()
}

#[pymodule]
fn netepi_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDegree>()?;
    m.add_class::<PyRate>()?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyTrajectory>()?;
    m.add_class::<PyLimit>()?;
    m.add_class::<PyOutbreak>()?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(solve_sir_limit, m)?)?;
    m.add_function(wrap_pyfunction!(solve_seir_limit, m)?)?;
    m.add_function(wrap_pyfunction!(sir_to_extinction, m)?)?;
    m.add_function(wrap_pyfunction!(solve_constant_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(solve_time_varying, m)?)?;
    m.add_function(wrap_pyfunction!(regular_outbreak, m)?)?;
    m.add_function(wrap_pyfunction!(mean_field_outbreak, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
