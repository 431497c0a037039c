use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::config::{ConfigError, ExperimentConfig, OutputSection, Resolved, ScheduleSection};
use super::report::{build_report, hypotheses};
use crate::diagnostics::threshold_crossing_time;
use crate::dynamics::{integrate, Trajectory};
use crate::error::Error;
use crate::schedules::{strong_convergence_threshold, threshold_crossing_closed_form, ScheduleKind, Verdict};

#[derive(Debug)]
pub enum CliError {
    /// Exit status 2.
    Config(ConfigError),
    /// Exit status 3.
    Numeric(String),
    /// Exit status 1.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "config error: {e}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Load a config and apply the `--out` override.
pub fn load(path: &Path, out: Option<&Path>) -> Result<ExperimentConfig, CliError> {
    let mut cfg = ExperimentConfig::from_path(path)?;
    if let Some(out) = out {
        cfg.output.dir = out.to_string_lossy().into_owned();
    }
    Ok(cfg)
}

/// Result of integrating one resolved config.
pub struct RunResult {
    pub trajectory: Trajectory,
    pub failure: Option<String>,
}

pub fn execute(r: &Resolved) -> Result<RunResult, CliError> {
    match integrate(&r.objective, &r.schedule, &r.dynamics) {
        Ok(trajectory) => Ok(RunResult { trajectory, failure: None }),
        Err(Error::Integration { failure, partial }) => Ok(RunResult {
            trajectory: *partial,
            failure: Some(failure.to_string()),
        }),
        Err(e) => Err(CliError::Config(ConfigError::new("", e.to_string()))),
    }
}

pub fn write_artifacts(dir: &Path, r: &Resolved, traj: &Trajectory) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let csv = dir.join("trajectory.csv");
    traj.write_csv(&csv).map_err(|e| io_err(&csv, e))?;
    let report = dir.join("report.json");
    let text = serde_json::to_string_pretty(&build_report(r, traj)).expect("report serializes");
    fs::write(&report, text + "\n").map_err(|e| io_err(&report, e))?;
    let manifest = dir.join("manifest.toml");
    fs::write(&manifest, r.config.to_toml_string()).map_err(|e| io_err(&manifest, e))?;
    Ok(())
}

fn run_one(r: &Resolved) -> Result<RunResult, CliError> {
    let result = execute(r)?;
    write_artifacts(&r.run_dir(), r, &result.trajectory)?;
    Ok(result)
}

pub fn run(cfg: &ExperimentConfig) -> Result<PathBuf, CliError> {
    let r = cfg.resolve()?;
    let result = run_one(&r)?;
    match result.failure {
        None => Ok(r.run_dir()),
        Some(msg) => Err(CliError::Numeric(format!("{msg}; partial artifacts in {}", r.run_dir().display()))),
    }
}

pub fn check_schedule(cfg: &ExperimentConfig) -> Result<String, CliError> {
    let r = cfg.resolve()?;
    let report = hypotheses(&r).map_err(|e| ConfigError::new("dynamics.alpha", e.to_string()))?;
    Ok(serde_json::to_string_pretty(&report).expect("report serializes"))
}

fn fmt_num(v: f64) -> String {
    format!("{v}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

fn child(base: &ExperimentConfig, label: String) -> ExperimentConfig {
    let mut cfg = base.clone();
    cfg.output = OutputSection {
        dir: Path::new(&base.output.dir).join(&base.output.label).to_string_lossy().into_owned(),
        label,
    };
    cfg
}

fn base_scale(base: &ExperimentConfig) -> f64 {
    if base.schedule.kind == "power" {
        base.schedule.scale.unwrap_or(1.0)
    } else {
        1.0
    }
}

fn duplicate_free(values: &[f64], key: &str) -> Result<(), ConfigError> {
    for (i, v) in values.iter().enumerate() {
        if values[..i].contains(v) {
            return Err(ConfigError::new(key, format!("duplicate value {v}")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareRow {
    pub label: String,
    pub gamma: Option<f64>,
    pub status: String,
    pub final_x: Vec<f64>,
    pub final_gap: f64,
    pub min_x_norm: f64,
}

fn compare_row(label: String, gamma: Option<f64>, res: &RunResult) -> CompareRow {
    let traj = &res.trajectory;
    let last = traj.last();
    CompareRow {
        label,
        gamma,
        status: res.failure.clone().map_or("ok".into(), |m| format!("failed: {m}")),
        final_x: last.map(|p| p.x.as_slice().to_vec()).unwrap_or_default(),
        final_gap: last.map_or(f64::NAN, |p| p.gap),
        min_x_norm: traj.samples.iter().map(|p| p.x.norm()).fold(f64::INFINITY, f64::min),
    }
}

fn write_summary<T: Serialize>(dir: &Path, header: &str, lines: &[String], rows: &[T]) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut csv = String::from(header);
    csv.push('\n');
    for l in lines {
        csv.push_str(l);
        csv.push('\n');
    }
    let path = dir.join("summary.csv");
    fs::write(&path, csv).map_err(|e| io_err(&path, e))?;
    let path = dir.join("summary.json");
    let text = serde_json::to_string_pretty(&json!({ "rows": rows })).expect("summary serializes");
    fs::write(&path, text + "\n").map_err(|e| io_err(&path, e))?;
    Ok(())
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| fmt_num(*v)).collect::<Vec<_>>().join(";")
}

/// The zero schedule plus `power(γ)` for every `γ`, with shared dynamics.
pub fn compare(base: &ExperimentConfig, gammas: &[f64]) -> Result<PathBuf, CliError> {
    if gammas.is_empty() {
        return Err(ConfigError::new("--gammas", "at least one gamma is required").into());
    }
    duplicate_free(gammas, "--gammas")?;
    base.resolve()?;
    let scale = base_scale(base);
    let mut cells: Vec<(String, Option<f64>, Resolved)> = Vec::new();
    let mut zero = child(base, "zero".into());
    zero.schedule = ScheduleSection::zero();
    cells.push(("zero".into(), None, zero.resolve()?));
    for &g in gammas {
        let label = format!("gamma_{}", fmt_num(g));
        let mut cfg = child(base, label.clone());
        cfg.schedule = ScheduleSection::power(g, scale);
        cells.push((label, Some(g), cfg.resolve().map_err(|e| ConfigError::new("--gammas", e.to_string()))?));
    }

    let results: Vec<Result<RunResult, CliError>> = cells.par_iter().map(|(_, _, r)| run_one(r)).collect();
    let mut rows = Vec::new();
    for ((label, gamma, _), res) in cells.iter().zip(results) {
        rows.push(compare_row(label.clone(), *gamma, &res?));
    }
    let lines: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{}",
                r.label,
                fmt_opt(r.gamma),
                csv_field(&r.status),
                join(&r.final_x),
                fmt_num(r.final_gap),
                fmt_num(r.min_x_norm)
            )
        })
        .collect();
    let dir = Path::new(&base.output.dir).join(&base.output.label);
    write_summary(&dir, "label,gamma,status,final_x,final_gap,min_x_norm", &lines, &rows)?;
    numeric_status(&rows.iter().map(|r| r.status.as_str()).collect::<Vec<_>>(), dir)
}

fn numeric_status(statuses: &[&str], dir: PathBuf) -> Result<PathBuf, CliError> {
    let failed = statuses.iter().filter(|s| **s != "ok").count();
    if failed == 0 {
        Ok(dir)
    } else {
        Err(CliError::Numeric(format!("{failed} run(s) failed; see {}", dir.join("summary.csv").display())))
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub label: String,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: Option<f64>,
    pub status: String,
    pub final_gap: f64,
    pub final_x_norm: f64,
    pub min_x_norm: f64,
    pub threshold: f64,
    pub t_cross_sampled: Option<f64>,
    pub t_cross_closed_form: Option<f64>,
    pub cond_a: Option<bool>,
    pub cond_b: Option<bool>,
    pub t2eps_growth: Option<bool>,
    pub limit_condition: Option<bool>,
    pub applicable: Vec<String>,
}

fn flag(v: &Verdict) -> bool {
    v.holds()
}

fn fmt_flag(v: Option<bool>) -> String {
    v.map(|b| b.to_string()).unwrap_or_default()
}

/// Cartesian product over `alpha × beta × gamma`; an empty axis keeps the
/// base value.
pub fn sweep(base: &ExperimentConfig, alphas: &[f64], betas: &[f64], gammas: &[f64]) -> Result<PathBuf, CliError> {
    duplicate_free(alphas, "--alpha")?;
    duplicate_free(betas, "--beta")?;
    duplicate_free(gammas, "--gamma")?;
    base.resolve()?;
    let alphas = if alphas.is_empty() { vec![base.dynamics.alpha] } else { alphas.to_vec() };
    let betas = if betas.is_empty() { vec![base.dynamics.beta] } else { betas.to_vec() };
    let gammas: Vec<Option<f64>> = if !gammas.is_empty() {
        gammas.iter().map(|g| Some(*g)).collect()
    } else if base.schedule.kind == "power" {
        vec![base.schedule.gamma]
    } else {
        vec![None]
    };
    let scale = base_scale(base);

    let mut cells = Vec::new();
    for &a in &alphas {
        for &b in &betas {
            for &g in &gammas {
                let mut label = format!("alpha_{}_beta_{}", fmt_num(a), fmt_num(b));
                if let Some(g) = g {
                    let _ = write!(label, "_gamma_{}", fmt_num(g));
                }
                let mut cfg = child(base, label.clone());
                cfg.dynamics.alpha = a;
                cfg.dynamics.beta = b;
                if let Some(g) = g {
                    cfg.schedule = ScheduleSection::power(g, scale);
                }
                let r = cfg.resolve().map_err(|e| ConfigError::new(format!("sweep cell {label}"), e.to_string()))?;
                cells.push((label, a, b, g, r));
            }
        }
    }

    let results: Vec<Result<RunResult, CliError>> = cells.par_iter().map(|c| run_one(&c.4)).collect();
    let mut rows = Vec::new();
    for ((label, a, b, g, r), res) in cells.iter().zip(results) {
        let res = res?;
        let traj = &res.trajectory;
        let last = traj.last();
        let threshold = strong_convergence_threshold(*a, *b, r.hypothesis_params.c);
        let hyp = hypotheses(r).ok();
        rows.push(SweepRow {
            label: label.clone(),
            alpha: *a,
            beta: *b,
            gamma: *g,
            status: res.failure.clone().map_or("ok".into(), |m| format!("failed: {m}")),
            final_gap: last.map_or(f64::NAN, |p| p.gap),
            final_x_norm: last.map_or(f64::NAN, |p| p.x.norm()),
            min_x_norm: traj.samples.iter().map(|p| p.x.norm()).fold(f64::INFINITY, f64::min),
            threshold,
            t_cross_sampled: threshold_crossing_time(traj, &r.schedule, threshold),
            t_cross_closed_form: match r.schedule.kind() {
                ScheduleKind::Power { .. } => threshold_crossing_closed_form(&r.schedule, threshold),
                _ => None,
            },
            cond_a: hyp.as_ref().map(|h| flag(&h.cond_a)),
            cond_b: hyp.as_ref().map(|h| flag(&h.cond_b)),
            t2eps_growth: hyp.as_ref().map(|h| flag(&h.t2eps_growth)),
            limit_condition: hyp.as_ref().map(|h| flag(&h.limit_condition)),
            applicable: hyp
                .as_ref()
                .map(|h| {
                    h.applicable_theorems
                        .iter()
                        .map(|t| serde_json::to_value(t).unwrap().as_str().unwrap().to_string())
                        .collect()
                })
                .unwrap_or_default(),
        });
    }
    let lines: Vec<String> = rows
        .iter()
        .map(|r| {
            [
                r.label.clone(),
                fmt_num(r.alpha),
                fmt_num(r.beta),
                fmt_opt(r.gamma),
                csv_field(&r.status),
                fmt_num(r.final_gap),
                fmt_num(r.final_x_norm),
                fmt_num(r.min_x_norm),
                fmt_num(r.threshold),
                fmt_opt(r.t_cross_sampled),
                fmt_opt(r.t_cross_closed_form),
                fmt_flag(r.cond_a),
                fmt_flag(r.cond_b),
                fmt_flag(r.t2eps_growth),
                fmt_flag(r.limit_condition),
                r.applicable.join(";"),
            ]
            .join(",")
        })
        .collect();
    let dir = Path::new(&base.output.dir).join(&base.output.label);
    write_summary(
        &dir,
        "label,alpha,beta,gamma,status,final_gap,final_x_norm,min_x_norm,threshold,t_cross_sampled,\
         t_cross_closed_form,cond_a,cond_b,t2eps_growth,limit_condition,applicable",
        &lines,
        &rows,
    )?;
    numeric_status(&rows.iter().map(|r| r.status.as_str()).collect::<Vec<_>>(), dir)
}
