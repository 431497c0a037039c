use thiserror::Error;

use crate::dynamics::Trajectory;

pub type Result<T> = std::result::Result<T, Error>;

/// Why an integration run stopped before reaching the horizon.
#[derive(Debug, Clone, PartialEq)]
pub enum IntegrationFailure {
    /// The adaptive step fell below `1e-14 * t`.
    StepSizeUnderflow { t: f64, step: f64 },
    /// The state or its derivative became NaN/inf.
    NonFiniteState { t: f64 },
    /// The configured step budget was exhausted.
    MaxSteps { t: f64, steps: usize },
}

impl std::fmt::Display for IntegrationFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IntegrationFailure::StepSizeUnderflow { t, step } => {
                write!(f, "step size underflow at t = {t:e} (h = {step:e})")
            }
            IntegrationFailure::NonFiniteState { t } => {
                write!(f, "non-finite state encountered at t = {t:e}")
            }
            IntegrationFailure::MaxSteps { t, steps } => {
                write!(f, "step budget of {steps} exhausted at t = {t:e}")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("unknown problem name `{0}`")]
    UnknownProblem(String),

    #[error("unknown schedule kind `{0}`")]
    UnknownSchedule(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    IndefiniteMatrix { min_eigenvalue: f64 },

    #[error("argmin structure unavailable for objective `{0}`")]
    ArgminUnavailable(String),

    #[error("minimal value unknown for objective `{0}`")]
    MinValueUnavailable(String),

    #[error("time {t} precedes the start time t0 = {t0}")]
    BeforeStart { t: f64, t0: f64 },

    #[error("integration failed: {failure}")]
    Integration {
        failure: IntegrationFailure,
        partial: Box<Trajectory>,
    },

    #[error("insufficient trajectory span: {0}")]
    InsufficientSpan(String),

    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    #[error("inner solver stagnated with residual {residual:e}")]
    Stagnation { residual: f64 },

    #[error("series is not strictly ordered in t at index {index}")]
    Unordered { index: usize },

    #[error("hypotheses not certified: {0}")]
    HypothesisNotCertified(String),
}
