//! Inertial gradient dynamics with Hessian-driven damping and vanishing
//! Tikhonov regularization.
//!
//! The crate integrates
//!
//! ```text
//! x'' + (α/t) x' + β ∇²g(x) x' + ∇g(x) + ε(t) x = 0
//! ```
//!
//! for smooth convex `g`, checks the hypotheses on `ε` under which the known
//! convergence results apply, and evaluates the associated energy
//! functionals along computed trajectories.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod integrator;
pub mod problems;
pub mod quadrature;
pub mod schedules;

pub use dynamics::{integrate, integrate_direct, DynamicsConfig, Sample, Trajectory};
pub use error::{Error, IntegrationFailure, Result};
pub use problems::{builtin, ObjectiveSpec, SmoothConvex};
pub use schedules::{hypothesis_report, HypothesisParams, HypothesisReport, ScheduleKind, TikhonovSchedule, Verdict};
