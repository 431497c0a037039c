//! Experiment configuration, read from TOML.
//!
//! ```toml
//! [problem]
//! name = "paper1d"            # paper1d | shifted_quadratic | psd_quadratic | least_squares
//! # c = [1.0]                 # shifted_quadratic center
//! # a = [[1.0, 0.0]]          # matrix rows (psd_quadratic, least_squares)
//! # b = [1.0]
//!
//! [schedule]
//! kind = "power"              # power | logarithmic | zero | tabulated
//! gamma = 1.5
//! scale = 1.0
//! # offset = 2.718281828459045      (logarithmic)
//! # times = [...]  values = [...]   (tabulated)
//!
//! [dynamics]
//! alpha = 3.0
//! beta = 1.0
//! t0 = 1.0
//! u0 = [2.0]
//! v0 = [0.0]
//! horizon = 1e4
//! rel_tol = 1e-9
//! abs_tol = 1e-12
//! [dynamics.sampling]
//! count = 400
//! spacing = "logarithmic"     # logarithmic | linear
//!
//! [diagnostics]
//! reports = ["W", "Eb", "rates", "ergodic", "hypotheses"]
//! # eb_b = 2.5
//! tikhonov_eps = [1.0, 0.1, 0.01, 0.001]
//! hyp_a = 2.0
//! hyp_a_b = 1.0
//! hyp_c = 1.0
//!
//! [output]
//! dir = "out"
//! label = "run"
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{DynamicsConfig, Sampling, DEFAULT_ABS_TOL, DEFAULT_MAX_STEPS, DEFAULT_REL_TOL};
use crate::problems::{builtin, ObjectiveSpec, ProblemParams, BUILTIN_NAMES};
use crate::schedules::{HypothesisParams, ScheduleKind, TikhonovSchedule, DEFAULT_A, DEFAULT_A_COND_B, DEFAULT_C};

/// A configuration problem, with the offending key.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            key: key.into(),
            message: message.into(),
        }
    }
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.key.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.key, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

pub const REPORT_NAMES: [&str; 7] = ["W", "Eb", "Ebp", "rates", "ergodic", "tikhonov_curve", "hypotheses"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSection {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

impl ScheduleSection {
    pub fn power(gamma: f64, scale: f64) -> Self {
        Self {
            kind: "power".into(),
            gamma: Some(gamma),
            scale: Some(scale),
            offset: None,
            times: None,
            values: None,
        }
    }

    pub fn zero() -> Self {
        Self {
            kind: "zero".into(),
            gamma: None,
            scale: None,
            offset: None,
            times: None,
            values: None,
        }
    }
}

fn default_t0() -> f64 {
    1.0
}
fn default_horizon() -> f64 {
    1e4
}
fn default_rel_tol() -> f64 {
    DEFAULT_REL_TOL
}
fn default_abs_tol() -> f64 {
    DEFAULT_ABS_TOL
}
fn default_max_steps() -> usize {
    DEFAULT_MAX_STEPS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsSection {
    pub alpha: f64,
    pub beta: f64,
    #[serde(default = "default_t0")]
    pub t0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v0: Option<Vec<f64>>,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "default_abs_tol")]
    pub abs_tol: f64,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
    #[serde(default)]
    pub sampling: Sampling,
}

fn default_reports() -> Vec<String> {
    ["W", "Eb", "rates", "ergodic", "hypotheses"].iter().map(|s| s.to_string()).collect()
}
fn default_tikhonov_eps() -> Vec<f64> {
    vec![1.0, 0.1, 0.01, 1e-3]
}
fn default_hyp_a() -> f64 {
    DEFAULT_A
}
fn default_hyp_a_b() -> f64 {
    DEFAULT_A_COND_B
}
fn default_hyp_c() -> f64 {
    DEFAULT_C
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsSection {
    #[serde(default = "default_reports")]
    pub reports: Vec<String>,
    /// Index of `E_b`; defaults to 2 at `α = 3`, else the midpoint of `(2, α−1)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eb_b: Option<f64>,
    #[serde(default = "default_tikhonov_eps")]
    pub tikhonov_eps: Vec<f64>,
    #[serde(default = "default_hyp_a")]
    pub hyp_a: f64,
    #[serde(default = "default_hyp_a_b")]
    pub hyp_a_b: f64,
    #[serde(default = "default_hyp_c")]
    pub hyp_c: f64,
}

impl Default for DiagnosticsSection {
    fn default() -> Self {
        Self {
            reports: default_reports(),
            eb_b: None,
            tikhonov_eps: default_tikhonov_eps(),
            hyp_a: DEFAULT_A,
            hyp_a_b: DEFAULT_A_COND_B,
            hyp_c: DEFAULT_C,
        }
    }
}

fn default_dir() -> String {
    "out".into()
}
fn default_label() -> String {
    "run".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_dir")]
    pub dir: String,
    #[serde(default = "default_label")]
    pub label: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            label: default_label(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemSection,
    pub schedule: ScheduleSection,
    pub dynamics: DynamicsSection,
    #[serde(default)]
    pub diagnostics: DiagnosticsSection,
    #[serde(default)]
    pub output: OutputSection,
}

/// A validated configuration with all names resolved.
#[derive(Debug, Clone)]
pub struct Resolved {
    /// The input with every default filled in; this is what manifests echo.
    pub config: ExperimentConfig,
    pub objective: ObjectiveSpec,
    pub schedule: TikhonovSchedule,
    pub dynamics: DynamicsConfig,
    pub hypothesis_params: HypothesisParams,
}

impl Resolved {
    pub fn run_dir(&self) -> PathBuf {
        Path::new(&self.config.output.dir).join(&self.config.output.label)
    }

    pub fn wants(&self, report: &str) -> bool {
        self.config.diagnostics.reports.iter().any(|r| r == report)
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::new("", format!("invalid config: {}", e.to_string().trim_end())))
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("", format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Validate and resolve every name and default.
    pub fn resolve(&self) -> Result<Resolved, ConfigError> {
        let objective = resolve_problem(&self.problem)?;
        let d = objective.dimension();
        let kind = resolve_schedule(&self.schedule)?;
        let dy = &self.dynamics;
        let schedule = TikhonovSchedule::new(kind.clone(), dy.t0)
            .map_err(|e| ConfigError::new(schedule_key(&self.schedule), e.to_string()))?;

        let u0 = dy.u0.clone().unwrap_or_else(|| vec![2.0; d]);
        let v0 = dy.v0.clone().unwrap_or_else(|| vec![0.0; d]);
        for (key, v) in [("dynamics.u0", &u0), ("dynamics.v0", &v0)] {
            if v.len() != d {
                return Err(ConfigError::new(key, format!("expected {d} entries for problem `{}`, got {}", objective.name, v.len())));
            }
        }
        let dynamics = DynamicsConfig {
            alpha: dy.alpha,
            beta: dy.beta,
            t0: dy.t0,
            u0: u0.clone(),
            v0: v0.clone(),
            horizon: dy.horizon,
            rel_tol: dy.rel_tol,
            abs_tol: dy.abs_tol,
            sampling: dy.sampling,
            max_steps: dy.max_steps,
        };
        dynamics
            .validate(d)
            .map_err(|e| ConfigError::new(dynamics_key(&dynamics), e.to_string()))?;

        let diag = &self.diagnostics;
        for r in &diag.reports {
            if !REPORT_NAMES.contains(&r.as_str()) {
                return Err(ConfigError::new(
                    "diagnostics.reports",
                    format!("unknown report `{r}`; expected one of {REPORT_NAMES:?}"),
                ));
            }
        }
        if diag.tikhonov_eps.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return Err(ConfigError::new("diagnostics.tikhonov_eps", "every entry must be a positive number"));
        }
        if let Some(b) = diag.eb_b {
            if !b.is_finite() {
                return Err(ConfigError::new("diagnostics.eb_b", "must be finite"));
            }
        }
        if !(diag.hyp_a > 1.0) {
            return Err(ConfigError::new("diagnostics.hyp_a", format!("must be > 1, got {}", diag.hyp_a)));
        }
        if !(diag.hyp_a_b > 0.0) {
            return Err(ConfigError::new("diagnostics.hyp_a_b", format!("must be > 0, got {}", diag.hyp_a_b)));
        }
        if !(diag.hyp_c > 0.0 && diag.hyp_c.is_finite()) {
            return Err(ConfigError::new("diagnostics.hyp_c", format!("must be > 0, got {}", diag.hyp_c)));
        }
        validate_label(&self.output.label)?;
        if self.output.dir.is_empty() {
            return Err(ConfigError::new("output.dir", "must be nonempty"));
        }

        let mut config = self.clone();
        config.dynamics.u0 = Some(u0);
        config.dynamics.v0 = Some(v0);
        config.schedule = section_of(&kind);
        Ok(Resolved {
            hypothesis_params: HypothesisParams {
                alpha: dy.alpha,
                beta: dy.beta,
                a: diag.hyp_a,
                a_cond_b: diag.hyp_a_b,
                c: diag.hyp_c,
            },
            config,
            objective,
            schedule,
            dynamics,
        })
    }
}

fn dynamics_key(cfg: &DynamicsConfig) -> &'static str {
    // Point at the most likely culprit for the validation message.
    if !(cfg.alpha >= 0.0) {
        "dynamics.alpha"
    } else if !(cfg.beta >= 0.0) {
        "dynamics.beta"
    } else if !(cfg.t0 > 0.0) {
        "dynamics.t0"
    } else if !(cfg.horizon >= cfg.t0) {
        "dynamics.horizon"
    } else if !(cfg.rel_tol > 0.0 && cfg.rel_tol <= 1e-2) {
        "dynamics.rel_tol"
    } else if !(cfg.abs_tol > 0.0 && cfg.abs_tol <= 1e-2) {
        "dynamics.abs_tol"
    } else if cfg.max_steps == 0 {
        "dynamics.max_steps"
    } else {
        "dynamics"
    }
}

fn schedule_key(s: &ScheduleSection) -> &'static str {
    match s.kind.as_str() {
        "power" => "schedule.gamma",
        "logarithmic" => "schedule.offset",
        "tabulated" => "schedule.values",
        _ => "schedule.kind",
    }
}

fn validate_label(label: &str) -> Result<(), ConfigError> {
    let safe = !label.is_empty()
        && label != "."
        && label != ".."
        && label.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-'));
    if safe {
        Ok(())
    } else {
        Err(ConfigError::new(
            "output.label",
            format!("`{label}` is not a nonempty name of letters, digits, `.`, `_` or `-`"),
        ))
    }
}

fn resolve_problem(p: &ProblemSection) -> Result<ObjectiveSpec, ConfigError> {
    if !BUILTIN_NAMES.contains(&p.name.as_str()) {
        return Err(ConfigError::new(
            "problem.name",
            format!("unknown problem `{}`; expected one of {BUILTIN_NAMES:?}", p.name),
        ));
    }
    let params = ProblemParams {
        c: p.c.clone(),
        a: p.a.clone(),
        b: p.b.clone(),
    };
    builtin(&p.name, &params).map_err(|e| ConfigError::new("problem", e.to_string()))
}

pub const SCHEDULE_KINDS: [&str; 4] = ["power", "logarithmic", "zero", "tabulated"];

fn resolve_schedule(s: &ScheduleSection) -> Result<ScheduleKind, ConfigError> {
    let unexpected = |fields: &[(&str, bool)]| -> Result<(), ConfigError> {
        for (name, present) in fields {
            if *present {
                return Err(ConfigError::new(
                    format!("schedule.{name}"),
                    format!("not a parameter of the `{}` schedule", s.kind),
                ));
            }
        }
        Ok(())
    };
    match s.kind.as_str() {
        "power" => {
            unexpected(&[("offset", s.offset.is_some()), ("times", s.times.is_some()), ("values", s.values.is_some())])?;
            let gamma = s.gamma.ok_or_else(|| ConfigError::new("schedule.gamma", "required for the power schedule"))?;
            Ok(ScheduleKind::Power {
                gamma,
                scale: s.scale.unwrap_or(1.0),
            })
        }
        "logarithmic" => {
            unexpected(&[
                ("gamma", s.gamma.is_some()),
                ("scale", s.scale.is_some()),
                ("times", s.times.is_some()),
                ("values", s.values.is_some()),
            ])?;
            Ok(ScheduleKind::Logarithmic {
                offset: s.offset.unwrap_or(std::f64::consts::E),
            })
        }
        "zero" => {
            unexpected(&[
                ("gamma", s.gamma.is_some()),
                ("scale", s.scale.is_some()),
                ("offset", s.offset.is_some()),
                ("times", s.times.is_some()),
                ("values", s.values.is_some()),
            ])?;
            Ok(ScheduleKind::Zero)
        }
        "tabulated" => {
            unexpected(&[("gamma", s.gamma.is_some()), ("scale", s.scale.is_some()), ("offset", s.offset.is_some())])?;
            let times = s.times.clone().ok_or_else(|| ConfigError::new("schedule.times", "required for the tabulated schedule"))?;
            let values = s.values.clone().ok_or_else(|| ConfigError::new("schedule.values", "required for the tabulated schedule"))?;
            Ok(ScheduleKind::Tabulated { times, values })
        }
        other => Err(ConfigError::new(
            "schedule.kind",
            format!("unknown schedule kind `{other}`; expected one of {SCHEDULE_KINDS:?}"),
        )),
    }
}

fn section_of(kind: &ScheduleKind) -> ScheduleSection {
    let mut s = ScheduleSection::zero();
    match kind {
        ScheduleKind::Power { gamma, scale } => return ScheduleSection::power(*gamma, *scale),
        ScheduleKind::Logarithmic { offset } => {
            s.kind = "logarithmic".into();
            s.offset = Some(*offset);
        }
        ScheduleKind::Zero => {}
        ScheduleKind::Tabulated { times, values } => {
            s.kind = "tabulated".into();
            s.times = Some(times.clone());
            s.values = Some(values.clone());
        }
    }
    s
}
