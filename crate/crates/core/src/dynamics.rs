//! The damped inertial system
//!
//! ```text
//! x'' + (α/t) x' + β ∇²g(x) x' + ∇g(x) + ε(t) x = 0,   x(t0) = u0, x'(t0) = v0
//! ```
//!
//! integrated through its Hessian-free lifted form in `(x, y)` with
//! `y = x' + β∇g(x)`:
//!
//! ```text
//! x' = y − β∇g(x)
//! y' = −(α/t) y − (1 − αβ/t) ∇g(x) − ε(t) x
//! ```
//!
//! [`integrate_direct`] integrates the second-order form in `(x, x')` with
//! Hessian-vector products and serves as a cross-check. Both append the
//! running integrals `∫ε/s`, `∫(ε/s)‖x − x*‖²` and `∫‖x'‖²/s` to the state
//! so they are computed under the same error control.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, IntegrationFailure, Result};
use crate::integrator::{self, IntegratorStats, OdeSystem, StepControl};
use crate::problems::{min_norm_solution, ObjectiveSpec};
use crate::schedules::{ScheduleKind, TikhonovSchedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Logarithmic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Sampling {
    pub count: usize,
    pub spacing: Spacing,
}

impl Default for Sampling {
    fn default() -> Self {
        Self {
            count: 400,
            spacing: Spacing::Logarithmic,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsConfig {
    pub alpha: f64,
    pub beta: f64,
    pub t0: f64,
    pub u0: Vec<f64>,
    pub v0: Vec<f64>,
    pub horizon: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub sampling: Sampling,
    pub max_steps: usize,
}

pub const DEFAULT_REL_TOL: f64 = 1e-9;
pub const DEFAULT_ABS_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_STEPS: usize = 50_000_000;

impl DynamicsConfig {
    /// Default tolerances and sampling plan.
    pub fn new(alpha: f64, beta: f64, t0: f64, u0: Vec<f64>, v0: Vec<f64>, horizon: f64) -> Self {
        Self {
            alpha,
            beta,
            t0,
            u0,
            v0,
            horizon,
            rel_tol: DEFAULT_REL_TOL,
            abs_tol: DEFAULT_ABS_TOL,
            sampling: Sampling::default(),
            max_steps: DEFAULT_MAX_STEPS,
        }
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_sampling(mut self, count: usize, spacing: Spacing) -> Self {
        self.sampling = Sampling { count, spacing };
        self
    }

    pub fn validate(&self, dimension: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be >= 0, got {}", self.alpha));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return bad(format!("beta must be >= 0, got {}", self.beta));
        }
        if !(self.t0 > 0.0 && self.t0.is_finite()) {
            return bad(format!("t0 must be > 0, got {}", self.t0));
        }
        if !(self.horizon >= self.t0 && self.horizon.is_finite()) {
            return bad(format!("horizon {} must be >= t0 = {}", self.horizon, self.t0));
        }
        for (name, tol) in [("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)] {
            if !(tol > 0.0 && tol <= 1e-2) {
                return bad(format!("{name} must lie in (0, 1e-2], got {tol}"));
            }
        }
        if self.sampling.count < 2 && self.horizon > self.t0 {
            return bad("sampling.count must be >= 2 when horizon > t0".into());
        }
        if self.max_steps == 0 {
            return bad("max_steps must be positive".into());
        }
        for (name, v) in [("u0", &self.u0), ("v0", &self.v0)] {
            if v.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    got: v.len(),
                });
            }
            if v.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFinite(if name == "u0" { "u0" } else { "v0" }));
            }
        }
        Ok(())
    }

    /// Output times: first `t0`, last `horizon`, strictly increasing.
    pub fn sample_times(&self) -> Vec<f64> {
        if self.horizon == self.t0 {
            return vec![self.t0];
        }
        let n = self.sampling.count;
        let mut times: Vec<f64> = (0..n)
            .map(|i| {
                let f = i as f64 / (n - 1) as f64;
                match self.sampling.spacing {
                    Spacing::Linear => self.t0 + f * (self.horizon - self.t0),
                    Spacing::Logarithmic => self.t0 * ((self.horizon / self.t0).ln() * f).exp(),
                }
            })
            .collect();
        times[0] = self.t0;
        times[n - 1] = self.horizon;
        times.dedup_by(|b, a| b <= a);
        times
    }

    fn step_control(&self) -> StepControl {
        StepControl {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_steps: self.max_steps,
            ..StepControl::default()
        }
    }
}

/// Position and auxiliary variable `y = x' + β∇g(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedState {
    pub x: DVector<f64>,
    pub y: DVector<f64>,
}

fn check_dim(obj: &ObjectiveSpec, v: &DVector<f64>) -> Result<()> {
    if v.len() != obj.dimension() {
        return Err(Error::DimensionMismatch {
            expected: obj.dimension(),
            got: v.len(),
        });
    }
    Ok(())
}

/// `(x, y)(t0) = (u0, v0 + β∇g(u0))`.
pub fn lift_initial_conditions(
    obj: &ObjectiveSpec,
    beta: f64,
    u0: &DVector<f64>,
    v0: &DVector<f64>,
) -> Result<LiftedState> {
    check_dim(obj, u0)?;
    check_dim(obj, v0)?;
    let y = if beta == 0.0 {
        v0.clone()
    } else {
        v0 + obj.gradient(u0) * beta
    };
    Ok(LiftedState { x: u0.clone(), y })
}

/// `x' = y − β∇g(x)`.
pub fn recover_velocity(obj: &ObjectiveSpec, beta: f64, state: &LiftedState) -> Result<DVector<f64>> {
    check_dim(obj, &state.x)?;
    check_dim(obj, &state.y)?;
    Ok(velocity_of(obj, beta, &state.x, &state.y))
}

fn velocity_of(obj: &ObjectiveSpec, beta: f64, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    if beta == 0.0 {
        y.clone()
    } else {
        y - obj.gradient(x) * beta
    }
}

/// Right-hand side of the lifted system.
pub fn vector_field(
    obj: &ObjectiveSpec,
    s: &TikhonovSchedule,
    cfg: &DynamicsConfig,
    t: f64,
    state: &LiftedState,
) -> Result<(DVector<f64>, DVector<f64>)> {
    if !(t > 0.0) || t < cfg.t0 || t < s.t0() {
        return Err(Error::BeforeStart {
            t,
            t0: cfg.t0.max(s.t0()),
        });
    }
    check_dim(obj, &state.x)?;
    check_dim(obj, &state.y)?;
    let grad = obj.gradient(&state.x);
    Ok(lifted_rhs(cfg.alpha, cfg.beta, s.value_at(t), t, &state.x, &state.y, &grad))
}

#[inline]
fn lifted_rhs(
    alpha: f64,
    beta: f64,
    eps: f64,
    t: f64,
    x: &DVector<f64>,
    y: &DVector<f64>,
    grad: &DVector<f64>,
) -> (DVector<f64>, DVector<f64>) {
    let dx = y - grad * beta;
    let dy = -(y * (alpha / t)) - grad * (1.0 - alpha * beta / t) - x * eps;
    (dx, dy)
}

/// `½‖x'‖² + g(x) + ½ε‖x‖²`, the energy that bounds velocities.
pub fn existence_energy(obj: &ObjectiveSpec, eps: f64, x: &DVector<f64>, velocity: &DVector<f64>) -> f64 {
    0.5 * velocity.norm_squared() + obj.value(x) + 0.5 * eps * x.norm_squared()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formulation {
    Lifted,
    Direct,
}

/// One reported point of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub x: DVector<f64>,
    pub velocity: DVector<f64>,
    pub y: DVector<f64>,
    pub eps: f64,
    pub gap: f64,
    pub grad_norm: f64,
    pub energy: f64,
    pub int_eps_over_t: f64,
    pub int_erg_num: f64,
    pub int_vel: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub formulation: Formulation,
    pub problem: String,
    pub schedule: ScheduleKind,
    pub alpha: f64,
    pub beta: f64,
    pub t0: f64,
    pub horizon: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub stats: IntegratorStats,
    /// Point `x*` used in the ergodic integrand.
    pub reference_point: Vec<f64>,
    /// False when the problem has no known argmin and the origin was used.
    pub reference_is_min_norm: bool,
    pub completed: bool,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub meta: RunMeta,
}

impl Trajectory {
    pub fn dimension(&self) -> usize {
        self.samples.first().map_or(0, |s| s.x.len())
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    /// `(t, f(sample))` for every sample.
    pub fn series<F: Fn(&Sample) -> f64>(&self, f: F) -> Vec<(f64, f64)> {
        self.samples.iter().map(|s| (s.t, f(s))).collect()
    }

    /// Sample whose time is closest to `t` (in log-distance).
    pub fn nearest(&self, t: f64) -> Option<&Sample> {
        self.samples
            .iter()
            .min_by(|a, b| (a.t / t).ln().abs().total_cmp(&(b.t / t).ln().abs()))
    }

    pub fn csv_header(dimension: usize) -> String {
        let mut cols = vec!["t".to_string()];
        cols.extend((0..dimension).map(|i| format!("x_{i}")));
        cols.extend((0..dimension).map(|i| format!("v_{i}")));
        cols.extend(
            ["eps", "gap", "grad_norm", "W", "int_eps_over_t", "int_erg_num", "int_vel"]
                .iter()
                .map(|s| s.to_string()),
        );
        cols.join(",")
    }

    /// CSV with 17 significant digits per value and `\n` line endings.
    pub fn to_csv(&self) -> String {
        let d = self.dimension();
        let mut out = Self::csv_header(d);
        out.push('\n');
        for s in &self.samples {
            let values = std::iter::once(s.t)
                .chain(s.x.iter().copied())
                .chain(s.velocity.iter().copied())
                .chain([s.eps, s.gap, s.grad_norm, s.energy, s.int_eps_over_t, s.int_erg_num, s.int_vel]);
            for (i, v) in values.enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{v:.16e}");
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_csv())
    }
}

struct LiftedSystem<'a> {
    obj: &'a ObjectiveSpec,
    s: &'a TikhonovSchedule,
    alpha: f64,
    beta: f64,
    xstar: &'a DVector<f64>,
}

impl OdeSystem for LiftedSystem<'_> {
    fn dim(&self) -> usize {
        2 * self.obj.dimension() + 3
    }

    fn rhs(&self, t: f64, state: &[f64], out: &mut [f64]) {
        let d = self.obj.dimension();
        let x = DVector::from_column_slice(&state[..d]);
        let y = DVector::from_column_slice(&state[d..2 * d]);
        let eps = self.s.value_at(t);
        let grad = self.obj.gradient(&x);
        let (dx, dy) = lifted_rhs(self.alpha, self.beta, eps, t, &x, &y, &grad);
        out[..d].copy_from_slice(dx.as_slice());
        out[d..2 * d].copy_from_slice(dy.as_slice());
        // dx is the velocity
        augment(out, 2 * d, eps, t, (&x - self.xstar).norm_squared(), dx.norm_squared());
    }
}

struct DirectSystem<'a> {
    obj: &'a ObjectiveSpec,
    s: &'a TikhonovSchedule,
    alpha: f64,
    beta: f64,
    xstar: &'a DVector<f64>,
}

impl OdeSystem for DirectSystem<'_> {
    fn dim(&self) -> usize {
        2 * self.obj.dimension() + 3
    }

    fn rhs(&self, t: f64, state: &[f64], out: &mut [f64]) {
        let d = self.obj.dimension();
        let x = DVector::from_column_slice(&state[..d]);
        let v = DVector::from_column_slice(&state[d..2 * d]);
        let eps = self.s.value_at(t);
        let grad = self.obj.gradient(&x);
        let mut dv = -(&v * (self.alpha / t)) - &grad - &x * eps;
        if self.beta != 0.0 {
            dv -= self.obj.hessian_vec(&x, &v) * self.beta;
        }
        out[..d].copy_from_slice(v.as_slice());
        out[d..2 * d].copy_from_slice(dv.as_slice());
        augment(out, 2 * d, eps, t, (&x - self.xstar).norm_squared(), v.norm_squared());
    }
}

#[inline]
fn augment(out: &mut [f64], at: usize, eps: f64, t: f64, dist2: f64, vel2: f64) {
    out[at] = eps / t;
    out[at + 1] = eps / t * dist2;
    out[at + 2] = vel2 / t;
}

/// Integrate the lifted, Hessian-free system.
pub fn integrate(obj: &ObjectiveSpec, s: &TikhonovSchedule, cfg: &DynamicsConfig) -> Result<Trajectory> {
    run(obj, s, cfg, Formulation::Lifted)
}

/// Integrate the second-order system directly, using Hessian-vector products.
pub fn integrate_direct(obj: &ObjectiveSpec, s: &TikhonovSchedule, cfg: &DynamicsConfig) -> Result<Trajectory> {
    run(obj, s, cfg, Formulation::Direct)
}

fn run(
    obj: &ObjectiveSpec,
    s: &TikhonovSchedule,
    cfg: &DynamicsConfig,
    formulation: Formulation,
) -> Result<Trajectory> {
    let d = obj.dimension();
    cfg.validate(d)?;
    if s.t0() > cfg.t0 {
        return Err(Error::InvalidParameter(format!(
            "schedule starts at {} after the dynamics start t0 = {}",
            s.t0(),
            cfg.t0
        )));
    }
    let (xstar, reference_is_min_norm) = match min_norm_solution(obj) {
        Ok(x) => (x, true),
        Err(_) => (DVector::zeros(d), false),
    };
    let u0 = DVector::from_column_slice(&cfg.u0);
    let v0 = DVector::from_column_slice(&cfg.v0);
    let mut state0 = Vec::with_capacity(2 * d + 3);
    state0.extend_from_slice(u0.as_slice());
    match formulation {
        Formulation::Lifted => {
            let lifted = lift_initial_conditions(obj, cfg.beta, &u0, &v0)?;
            state0.extend_from_slice(lifted.y.as_slice());
        }
        Formulation::Direct => state0.extend_from_slice(v0.as_slice()),
    }
    state0.extend_from_slice(&[0.0, 0.0, 0.0]);

    let times = cfg.sample_times();
    let mut samples = Vec::with_capacity(times.len());
    let beta = cfg.beta;
    let make_sample = |t: f64, state: &[f64]| -> Sample {
        let x = DVector::from_column_slice(&state[..d]);
        let second = DVector::from_column_slice(&state[d..2 * d]);
        let grad = obj.gradient(&x);
        let (velocity, y) = match formulation {
            Formulation::Lifted => (&second - &grad * beta, second),
            Formulation::Direct => (second.clone(), &second + &grad * beta),
        };
        let eps = s.value_at(t);
        Sample {
            t,
            energy: existence_energy(obj, eps, &x, &velocity),
            gap: obj.gap(&x),
            grad_norm: grad.norm(),
            x,
            velocity,
            y,
            eps,
            int_eps_over_t: state[2 * d],
            int_erg_num: state[2 * d + 1],
            int_vel: state[2 * d + 2],
        }
    };

    let ctl = cfg.step_control();
    let outcome = match formulation {
        Formulation::Lifted => {
            let sys = LiftedSystem { obj, s, alpha: cfg.alpha, beta, xstar: &xstar };
            integrator::integrate_observed(&sys, &state0, &times, &ctl, |t, y| samples.push(make_sample(t, y)))
        }
        Formulation::Direct => {
            let sys = DirectSystem { obj, s, alpha: cfg.alpha, beta, xstar: &xstar };
            integrator::integrate_observed(&sys, &state0, &times, &ctl, |t, y| samples.push(make_sample(t, y)))
        }
    };

    let mut meta = RunMeta {
        formulation,
        problem: obj.name.clone(),
        schedule: s.kind().clone(),
        alpha: cfg.alpha,
        beta,
        t0: cfg.t0,
        horizon: cfg.horizon,
        rel_tol: cfg.rel_tol,
        abs_tol: cfg.abs_tol,
        stats: IntegratorStats::default(),
        reference_point: xstar.as_slice().to_vec(),
        reference_is_min_norm,
        completed: true,
        failure: None,
    };
    match outcome {
        Ok(stats) => {
            meta.stats = stats;
            Ok(Trajectory { samples, meta })
        }
        Err((failure, stats, last_state, t_last)) => {
            meta.stats = stats;
            meta.completed = false;
            meta.failure = Some(failure.to_string());
            let last_finite = last_state.iter().all(|v| v.is_finite());
            if last_finite && samples.last().is_none_or(|s| s.t < t_last) {
                samples.push(make_sample(t_last, &last_state));
            }
            if let IntegrationFailure::NonFiniteState { .. } = failure {
                samples.retain(|s| s.x.iter().chain(s.y.iter()).all(|v| v.is_finite()));
            }
            Err(Error::Integration {
                failure,
                partial: Box::new(Trajectory { samples, meta }),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{paper1d, shifted_quadratic};

    fn dv(v: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(v)
    }

    #[test]
    fn lift_examples() {
        let g = paper1d();
        let l = lift_initial_conditions(&g, 1.0, &dv(&[2.0]), &dv(&[0.0])).unwrap();
        assert_eq!(l.y, dv(&[3.0]));
        let l = lift_initial_conditions(&g, 0.0, &dv(&[2.0]), &dv(&[0.7])).unwrap();
        assert_eq!(l.y, dv(&[0.7]));
        let q = shifted_quadratic(dv(&[0.0, 0.0])).unwrap();
        let l = lift_initial_conditions(&q, 2.0, &dv(&[1.0, 0.0]), &dv(&[0.0, 1.0])).unwrap();
        assert_eq!(l.y, dv(&[2.0, 1.0]));
        assert!(lift_initial_conditions(&q, 2.0, &dv(&[1.0]), &dv(&[0.0, 1.0])).is_err());
    }

    #[test]
    fn recover_velocity_examples() {
        let g = paper1d();
        let state = LiftedState { x: dv(&[2.0]), y: dv(&[3.0]) };
        assert_eq!(recover_velocity(&g, 1.0, &state).unwrap(), dv(&[0.0]));
        assert_eq!(recover_velocity(&g, 0.0, &state).unwrap(), dv(&[3.0]));
        for (u0, v0) in [(2.0, -0.3), (-1.7, 4.0), (0.2, 0.2)] {
            let l = lift_initial_conditions(&g, 1.3, &dv(&[u0]), &dv(&[v0])).unwrap();
            let v = recover_velocity(&g, 1.3, &l).unwrap();
            assert!((v[0] - v0).abs() <= 1e-14 * (1.0 + l.y[0].abs()));
        }
    }

    #[test]
    fn vector_field_examples() {
        let q = shifted_quadratic(dv(&[0.0])).unwrap();
        let zero = TikhonovSchedule::zero(1.0);
        let cfg = DynamicsConfig::new(3.0, 0.0, 1.0, vec![1.0], vec![0.0], 10.0);
        let (dx, dy) = vector_field(&q, &zero, &cfg, 1.0, &LiftedState { x: dv(&[1.0]), y: dv(&[1.0]) }).unwrap();
        assert_eq!((dx[0], dy[0]), (1.0, -4.0));

        let s = TikhonovSchedule::power(1.5, 1.0, 1.0).unwrap();
        let cfg = DynamicsConfig::new(3.0, 1.0, 1.0, vec![1.0], vec![0.0], 10.0);
        let state = LiftedState { x: dv(&[0.4]), y: dv(&[2.0]) };
        let (_, dy) = vector_field(&q, &s, &cfg, 3.0, &state).unwrap();
        assert_eq!(dy[0], -2.0 - s.value_at(3.0) * 0.4);

        let g = paper1d();
        let cfg = DynamicsConfig::new(4.0, 1.0, 1.0, vec![0.0], vec![0.0], 10.0);
        let (dx, dy) = vector_field(&g, &zero, &cfg, 2.0, &LiftedState { x: dv(&[0.5]), y: dv(&[1.5]) }).unwrap();
        assert_eq!((dx[0], dy[0]), (1.5, -3.0));

        assert!(vector_field(&g, &zero, &cfg, 0.5, &LiftedState { x: dv(&[0.5]), y: dv(&[1.5]) }).is_err());
        assert!(vector_field(&g, &zero, &cfg, -1.0, &LiftedState { x: dv(&[0.5]), y: dv(&[1.5]) }).is_err());
    }

    #[test]
    fn empty_span_gives_initial_sample() {
        let g = paper1d();
        let s = TikhonovSchedule::power(1.5, 1.0, 1.0).unwrap();
        let cfg = DynamicsConfig::new(3.0, 1.0, 1.0, vec![2.0], vec![0.0], 1.0);
        for traj in [integrate(&g, &s, &cfg).unwrap(), integrate_direct(&g, &s, &cfg).unwrap()] {
            assert_eq!(traj.samples.len(), 1);
            let first = &traj.samples[0];
            assert_eq!(first.t, 1.0);
            assert_eq!(first.x, dv(&[2.0]));
            assert_eq!(first.y, dv(&[3.0]));
            assert_eq!(first.velocity, dv(&[0.0]));
            assert_eq!(first.int_vel, 0.0);
        }
    }

    #[test]
    fn sample_times_contract() {
        let cfg = DynamicsConfig::new(3.0, 1.0, 2.0, vec![0.0], vec![0.0], 2e4);
        let times = cfg.sample_times();
        assert_eq!(times.len(), 400);
        assert_eq!(times[0], 2.0);
        assert_eq!(*times.last().unwrap(), 2e4);
        assert!(times.windows(2).all(|w| w[1] > w[0]));
        let lin = cfg.clone().with_sampling(11, Spacing::Linear).sample_times();
        assert_eq!(lin.len(), 11);
        assert_eq!(*lin.last().unwrap(), 2e4);
    }

    #[test]
    fn config_validation() {
        let good = DynamicsConfig::new(3.0, 1.0, 1.0, vec![2.0], vec![0.0], 10.0);
        assert!(good.validate(1).is_ok());
        assert!(good.validate(2).is_err());
        let mut bad = good.clone();
        bad.t0 = 0.0;
        assert!(bad.validate(1).is_err());
        let bad = good.clone().with_tolerances(0.1, 1e-12);
        assert!(bad.validate(1).is_err());
        let bad = good.clone().with_sampling(1, Spacing::Linear);
        assert!(bad.validate(1).is_err());
    }

    #[test]
    fn quadratic_converges_without_regularization() {
        let q = shifted_quadratic(dv(&[0.0])).unwrap();
        let s = TikhonovSchedule::zero(1.0);
        let cfg = DynamicsConfig::new(3.0, 0.0, 1.0, vec![1.0], vec![0.0], 100.0);
        let traj = integrate(&q, &s, &cfg).unwrap();
        assert!(traj.last().unwrap().gap <= 1e-4);
        assert!(traj.meta.completed);
        assert!(traj.meta.stats.accepted > 0);
    }

    #[test]
    fn determinism() {
        let g = paper1d();
        let s = TikhonovSchedule::power(1.5, 1.0, 1.0).unwrap();
        let cfg = DynamicsConfig::new(3.0, 1.0, 1.0, vec![2.0], vec![0.0], 500.0);
        let a = integrate(&g, &s, &cfg).unwrap();
        let b = integrate(&g, &s, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn csv_layout() {
        let q = shifted_quadratic(dv(&[1.0, 2.0])).unwrap();
        let s = TikhonovSchedule::zero(1.0);
        let cfg = DynamicsConfig::new(3.0, 0.0, 1.0, vec![0.0, 0.0], vec![0.0, 0.0], 10.0).with_sampling(5, Spacing::Linear);
        let csv = integrate(&q, &s, &cfg).unwrap().to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t,x_0,x_1,v_0,v_1,eps,gap,grad_norm,W,int_eps_over_t,int_erg_num,int_vel"
        );
        let first = lines.next().unwrap();
        assert_eq!(first.split(',').count(), 12);
        assert!(first.starts_with("1.0000000000000000e0,"));
        assert!(!first.ends_with(','));
        assert_eq!(csv.lines().count(), 6);
        assert!(csv.ends_with('\n') && !csv.contains('\r'));
    }
}
