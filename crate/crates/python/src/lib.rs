//! Python bindings: builtin problems, schedules, integration, hypothesis
//! reports and diagnostics. Structured results come back as plain dicts.

use nalgebra::DVector;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::Value;

use tikhonov_core::diagnostics;
use tikhonov_core::dynamics::{self, DynamicsConfig, Spacing};
use tikhonov_core::problems::{self, ObjectiveSpec, ProblemParams};
use tikhonov_core::schedules::{self, HypothesisParams, TikhonovSchedule};
use tikhonov_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Integration { .. } => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, value: &Value) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn serialize<T: serde::Serialize>(v: &T) -> PyResult<Value> {
    serde_json::to_value(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

fn vector(obj: &ObjectiveSpec, x: Vec<f64>) -> PyResult<DVector<f64>> {
    if x.len() != obj.dimension() {
        return Err(PyValueError::new_err(format!(
            "expected a vector of length {}, got {}",
            obj.dimension(),
            x.len()
        )));
    }
    Ok(DVector::from_vec(x))
}

/// A builtin convex objective.
#[pyclass(name = "Problem", module = "tikhonov_lab", frozen)]
struct PyProblem {
    inner: ObjectiveSpec,
}

#[pymethods]
impl PyProblem {
    #[new]
    #[pyo3(signature = (name, c=None, a=None, b=None))]
    fn new(name: &str, c: Option<Vec<f64>>, a: Option<Vec<Vec<f64>>>, b: Option<Vec<f64>>) -> PyResult<Self> {
        let inner = problems::builtin(name, &ProblemParams { c, a, b }).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    #[getter]
    fn min_value(&self) -> Option<f64> {
        self.inner.min_value
    }

    fn value(&self, x: Vec<f64>) -> PyResult<f64> {
        Ok(self.inner.value(&vector(&self.inner, x)?))
    }

    fn gradient(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(self.inner.gradient(&vector(&self.inner, x)?).as_slice().to_vec())
    }

    fn hessian_vec(&self, x: Vec<f64>, v: Vec<f64>) -> PyResult<Vec<f64>> {
        let (x, v) = (vector(&self.inner, x)?, vector(&self.inner, v)?);
        Ok(self.inner.hessian_vec(&x, &v).as_slice().to_vec())
    }

    fn min_norm_solution(&self) -> PyResult<Vec<f64>> {
        Ok(problems::min_norm_solution(&self.inner).map_err(py_err)?.as_slice().to_vec())
    }

    /// Solution of `∇g(x) + εx = 0`.
    fn tikhonov_point(&self, eps: f64) -> PyResult<Vec<f64>> {
        Ok(diagnostics::tikhonov_point(&self.inner, eps).map_err(py_err)?.as_slice().to_vec())
    }

    fn __repr__(&self) -> String {
        format!("Problem({:?}, dimension={})", self.inner.name, self.inner.dimension())
    }
}

/// A Tikhonov schedule `t ↦ ε(t)` on `[t0, ∞)`.
#[pyclass(name = "Schedule", module = "tikhonov_lab", frozen)]
struct PySchedule {
    inner: TikhonovSchedule,
}

#[pymethods]
impl PySchedule {
    #[staticmethod]
    #[pyo3(signature = (gamma, scale=1.0, t0=1.0))]
    fn power(gamma: f64, scale: f64, t0: f64) -> PyResult<Self> {
        Ok(Self {
            inner: TikhonovSchedule::power(gamma, scale, t0).map_err(py_err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (offset=std::f64::consts::E, t0=1.0))]
    fn logarithmic(offset: f64, t0: f64) -> PyResult<Self> {
        Ok(Self {
            inner: TikhonovSchedule::logarithmic(offset, t0).map_err(py_err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (t0=1.0))]
    fn zero(t0: f64) -> Self {
        Self {
            inner: TikhonovSchedule::zero(t0),
        }
    }

    #[staticmethod]
    #[pyo3(signature = (times, values, t0=1.0))]
    fn tabulated(times: Vec<f64>, values: Vec<f64>, t0: f64) -> PyResult<Self> {
        Ok(Self {
            inner: TikhonovSchedule::tabulated(times, values, t0).map_err(py_err)?,
        })
    }

    #[getter]
    fn t0(&self) -> f64 {
        self.inner.t0()
    }

    fn eps(&self, t: f64) -> PyResult<f64> {
        self.inner.eps(t).map_err(py_err)
    }

    fn derivative(&self, t: f64) -> PyResult<f64> {
        self.inner.derivative(t).map_err(py_err)
    }

    /// Hypothesis verdicts and applicable results, as a dict.
    #[pyo3(signature = (alpha, beta, a=schedules::DEFAULT_A, a_cond_b=schedules::DEFAULT_A_COND_B, c=schedules::DEFAULT_C))]
    fn hypotheses<'py>(
        &self,
        py: Python<'py>,
        alpha: f64,
        beta: f64,
        a: f64,
        a_cond_b: f64,
        c: f64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let params = HypothesisParams { alpha, beta, a, a_cond_b, c };
        let report = schedules::hypothesis_report(&self.inner, &params).map_err(py_err)?;
        to_py(py, &serialize(&report)?)
    }

    fn __repr__(&self) -> String {
        format!("Schedule({:?}, t0={})", self.inner.kind(), self.inner.t0())
    }
}

/// Sampled solution of the damped system.
#[pyclass(name = "Trajectory", module = "tikhonov_lab", frozen)]
struct PyTrajectory {
    inner: dynamics::Trajectory,
    problem: ObjectiveSpec,
    schedule: TikhonovSchedule,
    config: DynamicsConfig,
}

impl PyTrajectory {
    fn column(&self, f: impl Fn(&dynamics::Sample) -> f64) -> Vec<f64> {
        self.inner.samples.iter().map(f).collect()
    }
}

#[pymethods]
impl PyTrajectory {
    fn __len__(&self) -> usize {
        self.inner.samples.len()
    }

    #[getter]
    fn t(&self) -> Vec<f64> {
        self.column(|p| p.t)
    }

    /// Positions, one list per sample.
    #[getter]
    fn x(&self) -> Vec<Vec<f64>> {
        self.inner.samples.iter().map(|p| p.x.as_slice().to_vec()).collect()
    }

    #[getter]
    fn velocity(&self) -> Vec<Vec<f64>> {
        self.inner.samples.iter().map(|p| p.velocity.as_slice().to_vec()).collect()
    }

    #[getter]
    fn eps(&self) -> Vec<f64> {
        self.column(|p| p.eps)
    }

    #[getter]
    fn gap(&self) -> Vec<f64> {
        self.column(|p| p.gap)
    }

    #[getter]
    fn energy(&self) -> Vec<f64> {
        self.column(|p| p.energy)
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn meta<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &serialize(&self.inner.meta)?)
    }

    fn rate_report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let r = diagnostics::rate_report(&self.inner, &self.problem, &self.schedule, &self.config).map_err(py_err)?;
        to_py(py, &serialize(&r)?)
    }

    fn ergodic_deviation(&self) -> PyResult<Vec<(f64, f64)>> {
        diagnostics::ergodic_deviation(&self.inner).map_err(py_err)
    }

    /// `E_b` at every sample against the minimum-norm solution.
    #[pyo3(signature = (b=None))]
    fn energy_eb(&self, b: Option<f64>) -> PyResult<Vec<f64>> {
        let xstar = problems::min_norm_solution(&self.problem).map_err(py_err)?;
        let b = b.unwrap_or_else(|| diagnostics::default_b(self.config.alpha));
        let params = diagnostics::EnergyParams::new(b, 0.0, xstar).map_err(py_err)?;
        self.inner
            .samples
            .iter()
            .map(|p| diagnostics::energy_eb(&self.problem, &self.schedule, &self.config, &params, p).map_err(py_err))
            .collect()
    }

    /// Checks `W` is nonincreasing; returns `None` or `(index, magnitude)`.
    #[pyo3(signature = (tol=1e-8))]
    fn w_violation(&self, tol: f64) -> PyResult<Option<(usize, f64)>> {
        let series = self.inner.series(|p| p.energy);
        Ok(match diagnostics::monotonicity_check(&series, tol).map_err(py_err)? {
            diagnostics::Monotonicity::Pass => None,
            diagnostics::Monotonicity::Violation { index, magnitude } => Some((index, magnitude)),
        })
    }
}

/// Integrate from `(u0, v0)` at `t0` to `horizon`.
#[pyfunction]
#[pyo3(signature = (
    problem, schedule, alpha, beta, u0, v0=None, horizon=1e4, t0=None,
    rel_tol=dynamics::DEFAULT_REL_TOL, abs_tol=dynamics::DEFAULT_ABS_TOL,
    samples=400, spacing="logarithmic", direct=false
))]
#[allow(clippy::too_many_arguments)]
fn integrate(
    problem: &PyProblem,
    schedule: &PySchedule,
    alpha: f64,
    beta: f64,
    u0: Vec<f64>,
    v0: Option<Vec<f64>>,
    horizon: f64,
    t0: Option<f64>,
    rel_tol: f64,
    abs_tol: f64,
    samples: usize,
    spacing: &str,
    direct: bool,
) -> PyResult<PyTrajectory> {
    let spacing = match spacing {
        "logarithmic" => Spacing::Logarithmic,
        "linear" => Spacing::Linear,
        other => return Err(PyValueError::new_err(format!("unknown spacing `{other}`"))),
    };
    let d = problem.inner.dimension();
    let t0 = t0.unwrap_or_else(|| schedule.inner.t0());
    let config = DynamicsConfig::new(alpha, beta, t0, u0, v0.unwrap_or_else(|| vec![0.0; d]), horizon)
        .with_tolerances(rel_tol, abs_tol)
        .with_sampling(samples, spacing);
    let run = if direct { dynamics::integrate_direct } else { dynamics::integrate };
    let inner = run(&problem.inner, &schedule.inner, &config).map_err(py_err)?;
    Ok(PyTrajectory {
        inner,
        problem: problem.inner.clone(),
        schedule: schedule.inner.clone(),
        config,
    })
}

/// Run the command-line interface with `args` (program name excluded);
/// returns the exit status.
#[pyfunction]
fn run_cli(args: Vec<String>) -> i32 {
    tikhonov_core::cli::main_with_args(std::iter::once("tikhonov-lab".to_string()).chain(args))
}

/// `(2/3)α(α/3 − 1 + βc²)`.
#[pyfunction]
#[pyo3(signature = (alpha, beta, c=schedules::DEFAULT_C))]
fn strong_convergence_threshold(alpha: f64, beta: f64, c: f64) -> f64 {
    schedules::strong_convergence_threshold(alpha, beta, c)
}

#[pymodule]
fn tikhonov_lab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProblem>()?;
    m.add_class::<PySchedule>()?;
    m.add_class::<PyTrajectory>()?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add_function(wrap_pyfunction!(strong_convergence_threshold, m)?)?;
    m.add("BUILTIN_PROBLEMS", problems::BUILTIN_NAMES.to_vec())?;
    Ok(())
}
