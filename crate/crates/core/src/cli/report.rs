//! `report.json` assembly.

use serde::Serialize;
use serde_json::{json, Map, Value};

use super::config::Resolved;
use crate::diagnostics::{
    default_b, eb_drift_bound_check, energy_eb, energy_ebp, energy_w, ergodic_deviation, existence_energy_of,
    monotonicity_check, rate_report, tikhonov_curve, DriftCase, EnergyParams,
};
use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::problems::min_norm_solution;
use crate::schedules::{hypothesis_report, HypothesisReport};

/// Relative tolerance for the W monotonicity verdict.
pub const W_TOL: f64 = 1e-8;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

pub fn hypotheses(r: &Resolved) -> Result<HypothesisReport> {
    hypothesis_report(&r.schedule, &r.hypothesis_params)
}

fn w_report(r: &Resolved, traj: &Trajectory) -> Result<Value> {
    let series: Vec<(f64, f64)> = traj.series(|p| energy_w(&r.objective, &r.schedule, p));
    let identity_gap = traj
        .samples
        .iter()
        .map(|p| (energy_w(&r.objective, &r.schedule, p) - existence_energy_of(&r.objective, &r.schedule, p)).abs())
        .fold(0.0, f64::max);
    let max_rise = series.windows(2).map(|w| w[1].1 - w[0].1).fold(f64::NEG_INFINITY, f64::max);
    let verdict = if series.len() >= 2 { Some(monotonicity_check(&series, W_TOL)?) } else { None };
    Ok(json!({
        "initial": series.first().map(|p| p.1),
        "final": series.last().map(|p| p.1),
        "max_rise": if series.len() >= 2 { Some(max_rise) } else { None },
        "monotonicity": verdict,
        "tolerance": W_TOL,
        "identity_max_abs_diff": identity_gap,
    }))
}

fn eb_report(r: &Resolved, traj: &Trajectory) -> Result<Value> {
    let alpha = r.dynamics.alpha;
    let xstar = min_norm_solution(&r.objective)?;
    let b = r.config.diagnostics.eb_b.unwrap_or_else(|| default_b(alpha));
    let params = EnergyParams::new(b, 0.0, xstar)?;
    let series = traj
        .samples
        .iter()
        .map(|p| Ok((p.t, energy_eb(&r.objective, &r.schedule, &r.dynamics, &params, p)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut drift = Map::new();
    let diag = &r.config.diagnostics;
    for (name, case, a) in [("case_a", DriftCase::A, diag.hyp_a), ("case_b", DriftCase::B, diag.hyp_a_b)] {
        let entry = match eb_drift_bound_check(traj, &r.objective, &r.schedule, &r.dynamics, &params, a, case) {
            Ok(rep) => to_value(&rep),
            Err(e) => json!({ "error": e.to_string() }),
        };
        drift.insert(name.into(), entry);
    }
    Ok(json!({
        "b": b,
        "initial": series.first().map(|p| p.1),
        "final": series.last().map(|p| p.1),
        "drift": drift,
        "series": series,
    }))
}

fn ebp_report(r: &Resolved, traj: &Trajectory) -> Result<Value> {
    let xstar = min_norm_solution(&r.objective)?;
    let params = EnergyParams::strong_convergence(r.dynamics.alpha, xstar)?;
    let series = traj
        .samples
        .iter()
        .map(|p| Ok((p.t, energy_ebp(&r.objective, &r.schedule, &r.dynamics, &params, p)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "b": params.b,
        "p": params.p,
        "final": series.last().map(|p| p.1),
        "series": series,
    }))
}

fn ergodic_report(traj: &Trajectory) -> Result<Value> {
    if traj.samples.iter().all(|p| p.eps == 0.0) {
        return Err(Error::ZeroDenominator("ε vanishes identically, so ∫ε/s = 0".into()));
    }
    let series = ergodic_deviation(traj)?;
    Ok(json!({
        "reference_is_min_norm": traj.meta.reference_is_min_norm,
        "final": series.last().map(|p| p.1),
        "series": series,
    }))
}

/// Full report; diagnostics that cannot be computed are listed under
/// `diagnostic_errors` instead of failing the run.
pub fn build_report(r: &Resolved, traj: &Trajectory) -> Value {
    let mut diagnostics = Map::new();
    let mut errors = Map::new();
    let mut record = |name: &str, value: Result<Value>| match value {
        Ok(v) => {
            diagnostics.insert(name.into(), v);
        }
        Err(e) => {
            errors.insert(name.into(), Value::String(e.to_string()));
        }
    };
    if r.wants("W") {
        record("W", w_report(r, traj));
    }
    if r.wants("Eb") {
        record("Eb", eb_report(r, traj));
    }
    if r.wants("Ebp") {
        record("Ebp", ebp_report(r, traj));
    }
    if r.wants("rates") {
        record("rates", rate_report(traj, &r.objective, &r.schedule, &r.dynamics).map(|v| to_value(&v)));
    }
    if r.wants("ergodic") {
        record("ergodic", ergodic_report(traj));
    }
    if r.wants("tikhonov_curve") {
        record(
            "tikhonov_curve",
            tikhonov_curve(&r.objective, &r.config.diagnostics.tikhonov_eps).map(|v| to_value(&v)),
        );
    }
    let hyp = if r.wants("hypotheses") {
        match hypotheses(r) {
            Ok(h) => to_value(&h),
            Err(e) => {
                errors.insert("hypotheses".into(), Value::String(e.to_string()));
                Value::Null
            }
        }
    } else {
        Value::Null
    };
    let last = traj.last();
    json!({
        "config": to_value(&r.config),
        "hypotheses": hyp,
        "integrator": {
            "formulation": traj.meta.formulation,
            "completed": traj.meta.completed,
            "failure": traj.meta.failure,
            "stats": traj.meta.stats,
            "samples": traj.samples.len(),
            "reference_point": traj.meta.reference_point,
            "reference_is_min_norm": traj.meta.reference_is_min_norm,
        },
        "final": last.map(|p| json!({
            "t": p.t,
            "x": p.x.as_slice(),
            "gap": p.gap,
            "W": p.energy,
        })),
        "diagnostics": diagnostics,
        "diagnostic_errors": errors,
    })
}
