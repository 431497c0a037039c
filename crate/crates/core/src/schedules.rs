//! Tikhonov parametrizations `t ↦ ε(t)` and the hypothesis checker.
//!
//! Closed-form kinds (power, logarithmic, zero) are classified by exponent
//! arithmetic and then certified on a geometric grid `t1·1.05^k` up to
//! `T_CHECK`. Tabulated schedules are only ever checked on their grid; any
//! statement about the tail beyond the table is reported as unknown.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;

/// Upper end of the certification grid.
pub const T_CHECK: f64 = 1e6;
/// Ratio of the geometric certification grid.
pub const GRID_RATIO: f64 = 1.05;
/// Default `a` in condition (a) checks.
pub const DEFAULT_A: f64 = 2.0;
/// Default `a` in condition (b) checks.
pub const DEFAULT_A_COND_B: f64 = 1.0;
/// Default `c` in the `t²ε` lower bound.
pub const DEFAULT_C: f64 = 1.0;

const SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScheduleKind {
    /// `scale · t^{-gamma}`
    Power { gamma: f64, scale: f64 },
    /// `1 / ln(offset + t)`
    Logarithmic { offset: f64 },
    Zero,
    /// Monotone cubic interpolation of the table, held constant past the
    /// last node.
    Tabulated { times: Vec<f64>, values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TikhonovSchedule {
    kind: ScheduleKind,
    t0: f64,
    slopes: Vec<f64>,
}

impl TikhonovSchedule {
    pub fn new(kind: ScheduleKind, t0: f64) -> Result<Self> {
        if !(t0 > 0.0 && t0.is_finite()) {
            return Err(Error::InvalidParameter(format!("t0 must be positive, got {t0}")));
        }
        let mut slopes = Vec::new();
        match &kind {
            ScheduleKind::Power { gamma, scale } => {
                if !(*gamma > 0.0 && gamma.is_finite()) {
                    return Err(Error::InvalidParameter(format!("power schedule needs gamma > 0, got {gamma}")));
                }
                if !(*scale >= 0.0 && scale.is_finite()) {
                    return Err(Error::InvalidParameter(format!("power schedule needs scale >= 0, got {scale}")));
                }
            }
            ScheduleKind::Logarithmic { offset } => {
                if !offset.is_finite() || offset + t0 <= 1.0 {
                    return Err(Error::InvalidParameter(format!(
                        "logarithmic schedule needs offset + t0 > 1, got offset {offset}"
                    )));
                }
            }
            ScheduleKind::Zero => {}
            ScheduleKind::Tabulated { times, values } => {
                slopes = validate_table(times, values, t0)?;
            }
        }
        Ok(Self { kind, t0, slopes })
    }

    pub fn power(gamma: f64, scale: f64, t0: f64) -> Result<Self> {
        Self::new(ScheduleKind::Power { gamma, scale }, t0)
    }

    pub fn logarithmic(offset: f64, t0: f64) -> Result<Self> {
        Self::new(ScheduleKind::Logarithmic { offset }, t0)
    }

    pub fn zero(t0: f64) -> Self {
        Self::new(ScheduleKind::Zero, t0).expect("t0 validated by caller")
    }

    pub fn tabulated(times: Vec<f64>, values: Vec<f64>, t0: f64) -> Result<Self> {
        Self::new(ScheduleKind::Tabulated { times, values }, t0)
    }

    pub fn kind(&self) -> &ScheduleKind {
        &self.kind
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn is_zero(&self) -> bool {
        match &self.kind {
            ScheduleKind::Zero => true,
            ScheduleKind::Power { scale, .. } => *scale == 0.0,
            ScheduleKind::Tabulated { values, .. } => values.iter().all(|v| *v == 0.0),
            ScheduleKind::Logarithmic { .. } => false,
        }
    }

    /// `ε(t)` without the domain check.
    #[inline]
    pub fn value_at(&self, t: f64) -> f64 {
        match &self.kind {
            ScheduleKind::Power { gamma, scale } => scale * t.powf(-gamma),
            ScheduleKind::Logarithmic { offset } => 1.0 / (offset + t).ln(),
            ScheduleKind::Zero => 0.0,
            ScheduleKind::Tabulated { times, values } => hermite(times, values, &self.slopes, t).0,
        }
    }

    /// `ε̇(t)` without the domain check.
    #[inline]
    pub fn derivative_at(&self, t: f64) -> f64 {
        match &self.kind {
            ScheduleKind::Power { gamma, scale } => -gamma * scale * t.powf(-gamma - 1.0),
            ScheduleKind::Logarithmic { offset } => {
                let l = (offset + t).ln();
                -1.0 / ((offset + t) * l * l)
            }
            ScheduleKind::Zero => 0.0,
            ScheduleKind::Tabulated { times, values } => hermite(times, values, &self.slopes, t).1,
        }
    }

    pub fn eps(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        Ok(self.value_at(t))
    }

    pub fn derivative(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        Ok(self.derivative_at(t))
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if t.is_nan() || t < self.t0 {
            return Err(Error::BeforeStart { t, t0: self.t0 });
        }
        Ok(())
    }

    /// `(1/φ(T)) ∫_{t0}^T φ(s) ε(s)/s ds`, the average that vanishes for
    /// integrable `ε/s` and nondecreasing unbounded `φ`.
    pub fn weighted_average<P: Fn(f64) -> f64>(&self, phi: P, t_end: f64) -> f64 {
        let integral = quadrature::integrate_log(|s| phi(s) * self.value_at(s) / s, self.t0, t_end, 1e-14);
        integral / phi(t_end)
    }
}

fn validate_table(times: &[f64], values: &[f64], t0: f64) -> Result<Vec<f64>> {
    if times.is_empty() || times.len() != values.len() {
        return Err(Error::InvalidParameter(
            "tabulated schedule needs equally long nonempty `times` and `values`".into(),
        ));
    }
    if times.iter().chain(values).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("schedule table"));
    }
    if times[0] > t0 {
        return Err(Error::InvalidParameter(format!(
            "table starts at {} after t0 = {t0}",
            times[0]
        )));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("table times must be strictly increasing".into()));
    }
    if values.iter().any(|v| *v < 0.0) {
        return Err(Error::InvalidParameter("table values must be nonnegative".into()));
    }
    if values.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidParameter("table values must be nonincreasing".into()));
    }
    Ok(monotone_slopes(times, values))
}

/// Node slopes for a monotone piecewise cubic Hermite interpolant. The
/// last slope is zero so the constant extension is C¹.
fn monotone_slopes(times: &[f64], values: &[f64]) -> Vec<f64> {
    let n = times.len();
    if n == 1 {
        return vec![0.0];
    }
    let h: Vec<f64> = times.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = (0..n - 1).map(|k| (values[k + 1] - values[k]) / h[k]).collect();
    let mut m = vec![0.0; n];
    m[0] = d[0];
    for k in 1..n - 1 {
        if d[k - 1] * d[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
    m[n - 1] = 0.0;
    m
}

fn hermite(times: &[f64], values: &[f64], slopes: &[f64], t: f64) -> (f64, f64) {
    let n = times.len();
    if t >= times[n - 1] {
        return (values[n - 1], 0.0);
    }
    if t <= times[0] {
        return (values[0], slopes[0]);
    }
    let k = times.partition_point(|&x| x <= t) - 1;
    let h = times[k + 1] - times[k];
    let s = (t - times[k]) / h;
    let (s2, s3) = (s * s, s * s * s);
    let value = (2.0 * s3 - 3.0 * s2 + 1.0) * values[k]
        + (s3 - 2.0 * s2 + s) * h * slopes[k]
        + (-2.0 * s3 + 3.0 * s2) * values[k + 1]
        + (s3 - s2) * h * slopes[k + 1];
    let deriv = ((6.0 * s2 - 6.0 * s) * values[k] + (-6.0 * s2 + 6.0 * s) * values[k + 1]) / h
        + (3.0 * s2 - 4.0 * s + 1.0) * slopes[k]
        + (3.0 * s2 - 2.0 * s) * slopes[k + 1];
    (value.max(0.0), deriv.min(0.0))
}

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

/// Outcome of an eventual-inequality check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    /// Holds for every `t >= t1`. For limit statements `t1` is `t0`.
    Holds { t1: f64 },
    Fails {
        witness: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
    Unknown { note: String },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails { .. })
    }

    pub fn t1(&self) -> Option<f64> {
        match self {
            Verdict::Holds { t1 } => Some(*t1),
            _ => None,
        }
    }

    fn fails_at(witness: f64) -> Self {
        Verdict::Fails {
            witness: Some(witness),
            note: None,
        }
    }

    fn fails_with(note: impl Into<String>) -> Self {
        Verdict::Fails {
            witness: None,
            note: Some(note.into()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartialSum {
    pub t: f64,
    pub value: f64,
}

/// Finiteness of an improper integral over `[t0, ∞)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Integrability {
    Finite,
    Infinite,
    /// Undecidable from finite data; partial sums over the table attached.
    Unknown { partial_sums: Vec<PartialSum> },
}

impl Integrability {
    pub fn is_finite(&self) -> bool {
        matches!(self, Integrability::Finite)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Integrability::Infinite)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralClassification {
    pub int_eps_over_t: Integrability,
    pub int_t_eps: Integrability,
    pub int_eps: Integrability,
}

/// Check an inequality on the geometric grid `t_start · 1.05^k` up to
/// `t_end`. Holds from the first grid point after the last violation;
/// fails if the last grid point itself violates.
pub fn grid_certify<P: Fn(f64) -> bool>(pred: P, t_start: f64, t_end: f64) -> Verdict {
    let mut grid = Vec::new();
    let mut t = t_start;
    while t < t_end {
        grid.push(t);
        t *= GRID_RATIO;
    }
    grid.push(t_end.max(t_start));
    let last_violation = grid.iter().rposition(|&t| !pred(t));
    match last_violation {
        None => Verdict::Holds { t1: t_start },
        Some(i) if i + 1 == grid.len() => Verdict::fails_at(grid[i]),
        Some(i) => Verdict::Holds { t1: grid[i + 1] },
    }
}

/// Grid covering a table: every node inside `[t0, t_last]` plus midpoints.
fn table_grid(times: &[f64], t0: f64) -> Vec<f64> {
    let mut grid = vec![t0];
    for w in times.windows(2) {
        for t in [0.5 * (w[0] + w[1]), w[1]] {
            if t > t0 {
                grid.push(t);
            }
        }
    }
    grid
}

fn table_check<P: Fn(f64) -> bool>(times: &[f64], t0: f64, pred: P, what: &str) -> Verdict {
    let grid = table_grid(times, t0);
    match grid.iter().rposition(|&t| !pred(t)) {
        Some(i) if i + 1 == grid.len() => Verdict::fails_at(grid[i]),
        last => {
            let t1 = last.map_or(grid[0], |i| grid[i + 1]);
            Verdict::Unknown {
                note: format!(
                    "{what} holds on the table from t = {t1} to {}; undetermined beyond the table",
                    grid[grid.len() - 1]
                ),
            }
        }
    }
}

/// Certify a closed-form threshold `t1` on the grid; a disagreement is
/// reported rather than trusted.
fn certified<P: Fn(f64) -> bool>(pred: P, t1: f64) -> Verdict {
    let end = if t1 < T_CHECK { T_CHECK } else { 10.0 * t1 };
    match grid_certify(pred, t1, end) {
        Verdict::Holds { t1: got } if got == t1 => Verdict::Holds { t1 },
        other => Verdict::Unknown {
            note: format!("closed-form threshold {t1} not confirmed on the grid: {other:?}"),
        },
    }
}

fn with_slack(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + SLACK * (lhs.abs() + rhs.abs())
}

fn condition_a_predicate(s: &TikhonovSchedule, beta: f64, a: f64) -> impl Fn(f64) -> bool + '_ {
    move |t| {
        let e = s.value_at(t);
        with_slack(s.derivative_at(t), -0.5 * a * beta * e * e)
    }
}

fn condition_b_predicate(s: &TikhonovSchedule, a: f64) -> impl Fn(f64) -> bool + '_ {
    move |t| with_slack(s.value_at(t), a / t)
}

/// `ε̇(t) <= -(aβ/2) ε²(t)` for all large `t`.
pub fn check_condition_a(s: &TikhonovSchedule, beta: f64, a: f64) -> Result<Verdict> {
    if !(a > 1.0) {
        return Err(Error::InvalidParameter(format!("condition (a) requires a > 1, got {a}")));
    }
    if !(beta >= 0.0) {
        return Err(Error::InvalidParameter(format!("beta must be >= 0, got {beta}")));
    }
    let t0 = s.t0;
    if s.is_zero() || beta == 0.0 {
        // ε is nonincreasing by construction, and the right side is 0.
        return Ok(Verdict::Holds { t1: t0 });
    }
    let pred = condition_a_predicate(s, beta, a);
    Ok(match s.kind() {
        ScheduleKind::Zero => unreachable!(),
        &ScheduleKind::Power { gamma, scale } => {
            // γ t^{γ-1} >= aβ·scale/2
            let k = 0.5 * a * beta * scale;
            if gamma > 1.0 {
                let threshold = (k / gamma).powf(1.0 / (gamma - 1.0));
                certified(pred, t0.max(threshold))
            } else if gamma == 1.0 {
                if gamma >= k {
                    certified(pred, t0)
                } else {
                    Verdict::fails_at(t0)
                }
            } else {
                let last_ok = (gamma / k).powf(1.0 / (1.0 - gamma));
                Verdict::fails_at(2.0 * t0.max(last_ok))
            }
        }
        &ScheduleKind::Logarithmic { offset } => {
            // 1/(offset+t) >= aβ/2, i.e. offset + t <= 2/(aβ).
            Verdict::fails_at(t0.max(2.0 / (a * beta) - offset + 1.0))
        }
        ScheduleKind::Tabulated { times, .. } => table_check(times, t0, pred, "condition (a)"),
    })
}

/// `ε(t) <= a/t` for all large `t`.
pub fn check_condition_b(s: &TikhonovSchedule, a: f64) -> Result<Verdict> {
    if !(a > 0.0) {
        return Err(Error::InvalidParameter(format!("condition (b) requires a > 0, got {a}")));
    }
    let t0 = s.t0;
    if s.is_zero() {
        return Ok(Verdict::Holds { t1: t0 });
    }
    let pred = condition_b_predicate(s, a);
    Ok(match s.kind() {
        ScheduleKind::Zero => unreachable!(),
        &ScheduleKind::Power { gamma, scale } => {
            // scale · t^{1-γ} <= a
            if gamma > 1.0 {
                let threshold = (scale / a).powf(1.0 / (gamma - 1.0));
                certified(pred, t0.max(threshold))
            } else if gamma == 1.0 {
                if scale <= a {
                    certified(pred, t0)
                } else {
                    Verdict::fails_at(t0)
                }
            } else {
                let crossing = (a / scale).powf(1.0 / (1.0 - gamma));
                Verdict::fails_at(2.0 * t0.max(crossing))
            }
        }
        &ScheduleKind::Logarithmic { offset } => {
            // t - a ln(offset + t) is increasing once offset + t > a and
            // eventually positive.
            let mut w = t0.max(a - offset).max(1.0);
            while w <= a * (offset + w).ln() {
                w *= 2.0;
            }
            Verdict::fails_at(w)
        }
        ScheduleKind::Tabulated { times, .. } => table_check(times, t0, pred, "condition (b)"),
    })
}

/// Finiteness of `∫ε/t`, `∫tε` and `∫ε` over `[t0, ∞)`.
pub fn classify_integrals(s: &TikhonovSchedule) -> IntegralClassification {
    use Integrability::*;
    let by_exponent = |exponent: f64| if exponent < -1.0 { Finite } else { Infinite };
    match s.kind() {
        _ if s.is_zero() => IntegralClassification {
            int_eps_over_t: Finite,
            int_t_eps: Finite,
            int_eps: Finite,
        },
        &ScheduleKind::Power { gamma, .. } => IntegralClassification {
            int_eps_over_t: by_exponent(-gamma - 1.0),
            int_t_eps: by_exponent(1.0 - gamma),
            int_eps: by_exponent(-gamma),
        },
        // 1/(t ln t) already diverges; the other two dominate it.
        ScheduleKind::Logarithmic { .. } => IntegralClassification {
            int_eps_over_t: Infinite,
            int_t_eps: Infinite,
            int_eps: Infinite,
        },
        ScheduleKind::Tabulated { times, .. } => {
            let partial = |weight: fn(f64) -> f64| {
                let mut acc = 0.0;
                let mut lo = s.t0;
                let mut sums = Vec::new();
                for &t in times.iter().filter(|&&t| t > s.t0) {
                    acc += quadrature::integrate(|u| weight(u) * s.value_at(u), lo, t, 1e-13);
                    sums.push(PartialSum { t, value: acc });
                    lo = t;
                }
                Unknown { partial_sums: sums }
            };
            IntegralClassification {
                int_eps_over_t: partial(|u| 1.0 / u),
                int_t_eps: partial(|u| u),
                int_eps: partial(|_| 1.0),
            }
        }
        ScheduleKind::Zero => unreachable!(),
    }
}

/// `(2/3) α (α/3 − 1 + β c²)`, the lower bound on `t²ε(t)` for `α > 3`.
pub fn strong_convergence_threshold(alpha: f64, beta: f64, c: f64) -> f64 {
    2.0 / 3.0 * alpha * (alpha / 3.0 - 1.0 + beta * c * c)
}

/// Closed-form first time with `t²ε(t) >= threshold` for power schedules.
pub fn threshold_crossing_closed_form(s: &TikhonovSchedule, threshold: f64) -> Option<f64> {
    match *s.kind() {
        ScheduleKind::Power { gamma, scale } if gamma < 2.0 && scale > 0.0 => {
            Some(s.t0.max((threshold / scale).powf(1.0 / (2.0 - gamma))))
        }
        ScheduleKind::Power { gamma, scale } if gamma == 2.0 && scale >= threshold => Some(s.t0),
        _ => None,
    }
}

/// `t²ε(t) → ∞` when `α = 3`; `t²ε(t) >= (2/3)α(α/3 − 1 + βc²)` eventually
/// when `α > 3`.
pub fn check_t2eps_growth(s: &TikhonovSchedule, alpha: f64, beta: f64, c: f64) -> Result<Verdict> {
    if !(alpha >= 3.0) {
        return Err(Error::InvalidParameter(format!("t²ε growth check needs alpha >= 3, got {alpha}")));
    }
    if !(c > 0.0) {
        return Err(Error::InvalidParameter(format!("c must be > 0, got {c}")));
    }
    let t0 = s.t0;
    let to_infinity = alpha == 3.0;
    let k = strong_convergence_threshold(alpha, beta, c);
    let pred = |t: f64| with_slack(k, t * t * s.value_at(t));
    Ok(match s.kind() {
        _ if s.is_zero() => Verdict::fails_with("t²ε(t) ≡ 0"),
        &ScheduleKind::Power { gamma, scale } => {
            if gamma < 2.0 {
                if to_infinity {
                    Verdict::Holds { t1: t0 }
                } else {
                    let t1 = threshold_crossing_closed_form(s, k).expect("gamma < 2");
                    certified(pred, t1)
                }
            } else if gamma == 2.0 {
                if !to_infinity && scale >= k {
                    Verdict::Holds { t1: t0 }
                } else {
                    Verdict::fails_with(format!("t²ε(t) ≡ {scale} is constant"))
                }
            } else {
                Verdict::Fails {
                    witness: Some(t0.max((k / scale).powf(1.0 / (2.0 - gamma)))),
                    note: Some("t²ε(t) → 0".into()),
                }
            }
        }
        &ScheduleKind::Logarithmic { offset } => {
            if to_infinity {
                Verdict::Holds { t1: t0 }
            } else {
                // t²/ln(offset+t) is increasing on t >= t0 because
                // offset + t0 > 1; bracket the crossing and bisect.
                let f = |t: f64| t * t / (offset + t).ln();
                if f(t0) >= k {
                    certified(pred, t0)
                } else {
                    let mut hi = t0;
                    while f(hi) < k {
                        hi *= 2.0;
                    }
                    let mut lo = t0.max(0.5 * hi);
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi);
                        if f(mid) >= k {
                            hi = mid;
                        } else {
                            lo = mid;
                        }
                    }
                    certified(pred, hi)
                }
            }
        }
        ScheduleKind::Tabulated { times, .. } => {
            if to_infinity {
                Verdict::Unknown {
                    note: "t²ε(t) → ∞ is undecidable on a finite table".into(),
                }
            } else {
                table_check(times, t0, pred, "t²ε lower bound")
            }
        }
        ScheduleKind::Zero => unreachable!(),
    })
}

/// The averaged limit `β/(ε(t) t^q) ∫_{t0}^t ε²(s) s^q ds → 0`, `q = α/3 + 1`.
pub fn check_limit_condition(s: &TikhonovSchedule, alpha: f64, beta: f64) -> Verdict {
    let t0 = s.t0;
    let q = alpha / 3.0 + 1.0;
    if s.is_zero() {
        return Verdict::Unknown {
            note: "ratio undefined for ε ≡ 0".into(),
        };
    }
    if beta == 0.0 {
        return Verdict::Holds { t1: t0 };
    }
    match s.kind() {
        &ScheduleKind::Power { gamma, .. } => {
            // ε² s^q ~ s^{q-2γ}; compare the integral's growth with ε t^q.
            let e = q - 2.0 * gamma;
            let tol = 1e-12 * (1.0 + q.abs());
            if e > -1.0 + tol {
                // ratio ~ t^{1-γ}/(e+1)
                if gamma > 1.0 {
                    Verdict::Holds { t1: t0 }
                } else if gamma == 1.0 {
                    Verdict::fails_with("ratio tends to a positive constant")
                } else {
                    Verdict::fails_with("ratio grows like t^{1-γ}")
                }
            } else if e >= -1.0 - tol {
                // ratio ~ ln t · t^{1-γ} with γ = (q+1)/2 > 1
                Verdict::Holds { t1: t0 }
            } else if gamma < q - tol {
                // integral converges; ratio ~ t^{γ-q}
                Verdict::Holds { t1: t0 }
            } else if gamma <= q + tol {
                Verdict::fails_with("integral converges and ε t^q is constant; ratio tends to a positive constant")
            } else {
                Verdict::fails_with("integral converges while ε t^q → 0; ratio diverges")
            }
        }
        // ratio ~ β t / ((q+1) ln t) → ∞
        ScheduleKind::Logarithmic { .. } => Verdict::fails_with("ratio grows like t / ln t"),
        ScheduleKind::Tabulated { times, .. } => {
            let t_end = *times.last().unwrap();
            let ratio = |t: f64| {
                let integral = quadrature::integrate(|u| s.value_at(u).powi(2) * u.powf(q), t0, t, 1e-13);
                beta * integral / (s.value_at(t) * t.powf(q))
            };
            Verdict::Unknown {
                note: if t_end > t0 {
                    format!(
                        "numeric ratio {:e} at t = {}, {:e} at the table end t = {t_end}",
                        ratio(0.5 * (t0 + t_end)),
                        0.5 * (t0 + t_end),
                        ratio(t_end)
                    )
                } else {
                    "table has no support beyond t0".into()
                },
            }
        }
        ScheduleKind::Zero => unreachable!(),
    }
}

/// Sufficient pair for the averaged limit: `∫ε < ∞` and `t^{α/3+1} ε(t)`
/// eventually nondecreasing (with `t^{α/3+1} ε(t) → ∞`).
pub fn check_integrable_monotone_pair(s: &TikhonovSchedule, alpha: f64) -> Verdict {
    let q = alpha / 3.0 + 1.0;
    match s.kind() {
        _ if s.is_zero() => Verdict::fails_with("t^q ε(t) ≡ 0 does not diverge"),
        &ScheduleKind::Power { gamma, .. } => {
            if gamma <= 1.0 {
                Verdict::fails_with("∫ε diverges")
            } else if gamma < q {
                Verdict::Holds { t1: s.t0 }
            } else {
                Verdict::fails_with("t^q ε(t) does not diverge")
            }
        }
        ScheduleKind::Logarithmic { .. } => Verdict::fails_with("∫ε diverges"),
        ScheduleKind::Tabulated { .. } => Verdict::Unknown {
            note: "tail behaviour of a table is undetermined".into(),
        },
        ScheduleKind::Zero => unreachable!(),
    }
}

// ---------------------------------------------------------------------------
// Hypothesis report
// ---------------------------------------------------------------------------

/// Result identifiers. Each one is applicable when its full hypothesis set
/// holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    /// `g(x(t)) → min g`
    Conv,
    /// `O(1/t²)` values
    Rates,
    /// `o(1/t²)` values and the companion limits
    Limits,
    /// convergence of the trajectory to some minimizer
    Convergencetraj,
    /// ergodic strong convergence to the minimum-norm solution
    Ergconvergence,
    /// strong convergence to the minimum-norm solution
    Strongconvergence,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypothesisParams {
    pub alpha: f64,
    pub beta: f64,
    /// `a` in condition (a), `> 1`
    pub a: f64,
    /// `a` in condition (b), `> 0`
    pub a_cond_b: f64,
    pub c: f64,
}

impl HypothesisParams {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self {
            alpha,
            beta,
            a: DEFAULT_A,
            a_cond_b: DEFAULT_A_COND_B,
            c: DEFAULT_C,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub params: HypothesisParams,
    pub cond_a: Verdict,
    pub cond_b: Verdict,
    pub int_eps_over_t: Integrability,
    pub int_t_eps: Integrability,
    pub int_eps: Integrability,
    pub t2eps_growth: Verdict,
    pub limit_condition: Verdict,
    pub integrable_monotone_pair: Verdict,
    pub applicable_theorems: Vec<Theorem>,
    pub notes: Vec<String>,
}

impl HypothesisReport {
    /// The applicable set implied by the individual verdicts.
    pub fn derive_applicable(&self) -> Vec<Theorem> {
        applicable_theorems(
            self.params.alpha,
            &self.cond_a,
            &self.cond_b,
            &IntegralClassification {
                int_eps_over_t: self.int_eps_over_t.clone(),
                int_t_eps: self.int_t_eps.clone(),
                int_eps: self.int_eps.clone(),
            },
            &self.t2eps_growth,
            &self.limit_condition,
        )
    }

    pub fn applies(&self, theorem: Theorem) -> bool {
        self.applicable_theorems.contains(&theorem)
    }
}

pub fn applicable_theorems(
    alpha: f64,
    cond_a: &Verdict,
    cond_b: &Verdict,
    ints: &IntegralClassification,
    t2eps_growth: &Verdict,
    limit_condition: &Verdict,
) -> Vec<Theorem> {
    let mut out = Vec::new();
    let a_or_b = cond_a.holds() || cond_b.holds();
    if alpha >= 3.0 {
        if (ints.int_eps_over_t.is_finite() && cond_a.holds()) || cond_b.holds() {
            out.push(Theorem::Conv);
        }
        if ints.int_t_eps.is_finite() && a_or_b {
            out.push(Theorem::Rates);
            if alpha > 3.0 {
                out.push(Theorem::Limits);
                out.push(Theorem::Convergencetraj);
            }
        }
    }
    if alpha > 0.0 && ints.int_eps_over_t.is_infinite() {
        out.push(Theorem::Ergconvergence);
    }
    if alpha >= 3.0
        && ints.int_eps_over_t.is_finite()
        && limit_condition.holds()
        && cond_a.holds()
        && t2eps_growth.holds()
    {
        out.push(Theorem::Strongconvergence);
    }
    out
}

/// Full hypothesis report for a schedule.
pub fn hypothesis_report(s: &TikhonovSchedule, params: &HypothesisParams) -> Result<HypothesisReport> {
    let HypothesisParams { alpha, beta, a, a_cond_b, c } = *params;
    if !(alpha >= 3.0) {
        return Err(Error::InvalidParameter(format!("hypothesis report needs alpha >= 3, got {alpha}")));
    }
    let cond_a = check_condition_a(s, beta, a)?;
    let cond_b = check_condition_b(s, a_cond_b)?;
    let ints = classify_integrals(s);
    let t2eps_growth = check_t2eps_growth(s, alpha, beta, c)?;
    let limit_condition = check_limit_condition(s, alpha, beta);
    let integrable_monotone_pair = check_integrable_monotone_pair(s, alpha);
    let applicable = applicable_theorems(alpha, &cond_a, &cond_b, &ints, &t2eps_growth, &limit_condition);

    let mut notes = Vec::new();
    if let ScheduleKind::Power { gamma, .. } = *s.kind() {
        if gamma > 1.0 && gamma < 2.0 {
            notes.push(format!(
                "γ = {gamma} in (1, 2): ∫tε diverges, so the O(1/t²) rate hypotheses fail even though \
                 the strong-convergence conditions can hold"
            ));
        }
    }
    if beta > 0.0 && cond_a.holds() && !ints.int_eps_over_t.is_finite() {
        notes.push("condition (a) holds for β > 0 but ∫ε/t is not certified finite".into());
    }
    Ok(HypothesisReport {
        params: *params,
        cond_a,
        cond_b,
        int_eps_over_t: ints.int_eps_over_t,
        int_t_eps: ints.int_t_eps,
        int_eps: ints.int_eps,
        t2eps_growth,
        limit_condition,
        integrable_monotone_pair,
        applicable_theorems: applicable,
        notes,
    })
}

/// Hypotheses of the strong-convergence result with default `a` for
/// condition (b).
pub fn check_strong_convergence_hypotheses(
    s: &TikhonovSchedule,
    alpha: f64,
    beta: f64,
    a: f64,
    c: f64,
) -> Result<HypothesisReport> {
    hypothesis_report(
        s,
        &HypothesisParams {
            alpha,
            beta,
            a,
            a_cond_b: DEFAULT_A_COND_B,
            c,
        },
    )
}
