//! Dormand–Prince 5(4) with proportional-integral step-size control.
//!
//! Steps are clipped so that every requested output time is hit exactly;
//! no dense output is involved. The step proposed before a clip is restored
//! afterwards so output density does not throttle the controller.

use serde::{Deserialize, Serialize};

use crate::error::IntegrationFailure;

/// First-order system `y' = f(t, y)`.
pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]);
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    /// Failure is declared when `h < min_step_factor * |t|`.
    pub min_step_factor: f64,
    pub safety: f64,
    pub fac_min: f64,
    pub fac_max: f64,
    /// PI stabilisation exponent.
    pub beta_pi: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_steps: 50_000_000,
            min_step_factor: 1e-14,
            safety: 0.9,
            fac_min: 0.2,
            fac_max: 10.0,
            beta_pi: 0.04,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegratorStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

// Butcher tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
// Difference between the 5th- and embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrate from `times[0]` through every entry of `times` (strictly
/// increasing), calling `observe(t, y)` at each of them, including the
/// initial time. On failure the last accepted state has already been
/// observed only if it coincided with an output time; the failure carries
/// the time reached.
pub fn integrate_observed<S, F>(
    sys: &S,
    y0: &[f64],
    times: &[f64],
    ctl: &StepControl,
    mut observe: F,
) -> Result<IntegratorStats, (IntegrationFailure, IntegratorStats, Vec<f64>, f64)>
where
    S: OdeSystem,
    F: FnMut(f64, &[f64]),
{
    let n = sys.dim();
    assert_eq!(y0.len(), n, "initial state has wrong dimension");
    let mut stats = IntegratorStats::default();
    let Some(&t_start) = times.first() else {
        return Ok(stats);
    };
    let mut t = t_start;
    let mut y = y0.to_vec();
    observe(t, &y);
    if times.len() == 1 {
        return Ok(stats);
    }

    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut ytmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];

    sys.rhs(t, &y, &mut k1);
    stats.rhs_evals += 1;
    if k1.iter().any(|v| !v.is_finite()) || y.iter().any(|v| !v.is_finite()) {
        return Err((IntegrationFailure::NonFiniteState { t }, stats, y, t));
    }

    let t_end = *times.last().unwrap();
    let mut h = initial_step(sys, t, &y, &k1, t_end - t, ctl, &mut stats);
    let mut err_old: f64 = 1e-4;
    let mut last_reject = false;
    let mut saw_non_finite = false;
    let exponent = 0.2 - 0.75 * ctl.beta_pi;

    for &t_out in &times[1..] {
        while t < t_out {
            if stats.accepted + stats.rejected >= ctl.max_steps {
                return Err((IntegrationFailure::MaxSteps { t, steps: ctl.max_steps }, stats, y, t));
            }
            if h < ctl.min_step_factor * t.abs() {
                let failure = if saw_non_finite {
                    IntegrationFailure::NonFiniteState { t }
                } else {
                    IntegrationFailure::StepSizeUnderflow { t, step: h }
                };
                return Err((failure, stats, y, t));
            }
            let clipped = t + h >= t_out;
            let h_step = if clipped { t_out - t } else { h };

            for i in 0..n {
                ytmp[i] = y[i] + h_step * A21 * k1[i];
            }
            sys.rhs(t + C2 * h_step, &ytmp, &mut k2);
            for i in 0..n {
                ytmp[i] = y[i] + h_step * (A31 * k1[i] + A32 * k2[i]);
            }
            sys.rhs(t + C3 * h_step, &ytmp, &mut k3);
            for i in 0..n {
                ytmp[i] = y[i] + h_step * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
            }
            sys.rhs(t + C4 * h_step, &ytmp, &mut k4);
            for i in 0..n {
                ytmp[i] = y[i] + h_step * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
            }
            sys.rhs(t + C5 * h_step, &ytmp, &mut k5);
            for i in 0..n {
                ytmp[i] = y[i]
                    + h_step * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
            }
            let t_new = if clipped { t_out } else { t + h_step };
            sys.rhs(t_new, &ytmp, &mut k6);
            for i in 0..n {
                ynew[i] = y[i]
                    + h_step * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
            }
            sys.rhs(t_new, &ynew, &mut k7);
            stats.rhs_evals += 6;

            let mut acc = 0.0;
            for i in 0..n {
                let e = h_step
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = ctl.abs_tol + ctl.rel_tol * y[i].abs().max(ynew[i].abs());
                acc += (e / sc).powi(2);
            }
            let err = (acc / n as f64).sqrt();
            let finite = err.is_finite() && k7.iter().all(|v| v.is_finite());

            if finite && err <= 1.0 {
                stats.accepted += 1;
                let err_c = err.max(1e-10);
                let mut fac = err_c.powf(exponent) / err_old.powf(ctl.beta_pi) / ctl.safety;
                fac = fac.clamp(1.0 / ctl.fac_max, 1.0 / ctl.fac_min);
                let mut h_next = h_step / fac;
                if last_reject {
                    h_next = h_next.min(h_step);
                }
                err_old = err_c;
                last_reject = false;
                saw_non_finite = false;
                t = t_new;
                std::mem::swap(&mut y, &mut ynew);
                std::mem::swap(&mut k1, &mut k7);
                // Restore the unclipped proposal after landing on an output.
                h = if clipped { h_next.max(h) } else { h_next };
            } else {
                stats.rejected += 1;
                if !finite {
                    saw_non_finite = true;
                    h = h_step * ctl.fac_min;
                } else {
                    let fac = (err.powf(exponent) / ctl.safety).min(1.0 / ctl.fac_min);
                    h = h_step / fac;
                }
                last_reject = true;
            }
        }
        observe(t, &y);
    }
    Ok(stats)
}

fn initial_step<S: OdeSystem>(
    sys: &S,
    t: f64,
    y: &[f64],
    f0: &[f64],
    span: f64,
    ctl: &StepControl,
    stats: &mut IntegratorStats,
) -> f64 {
    let n = y.len();
    let sc: Vec<f64> = y.iter().map(|v| ctl.abs_tol + ctl.rel_tol * v.abs()).collect();
    let rms = |v: &[f64]| (v.iter().zip(&sc).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / n as f64).sqrt();
    let d0 = rms(y);
    let d1 = rms(f0);
    let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h0 = h0.min(span);
    let y1: Vec<f64> = y.iter().zip(f0).map(|(a, b)| a + h0 * b).collect();
    let mut f1 = vec![0.0; n];
    sys.rhs(t + h0, &y1, &mut f1);
    stats.rhs_evals += 1;
    let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = rms(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    let h = (100.0 * h0).min(h1).min(span);
    if h.is_finite() && h > 0.0 {
        h
    } else {
        span.min(1e-6)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Decay;
    impl OdeSystem for Decay {
        fn dim(&self) -> usize {
            1
        }
        fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
            dy[0] = -y[0];
        }
    }

    struct Oscillator;
    impl OdeSystem for Oscillator {
        fn dim(&self) -> usize {
            2
        }
        fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
            dy[0] = y[1];
            dy[1] = -y[0];
        }
    }

    struct Blowup;
    impl OdeSystem for Blowup {
        fn dim(&self) -> usize {
            1
        }
        fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
            dy[0] = y[0] * y[0];
        }
    }

    #[test]
    fn exponential_decay_hits_outputs() {
        let times: Vec<f64> = (0..=10).map(|i| i as f64).collect();
        let mut seen = Vec::new();
        let ctl = StepControl { rel_tol: 1e-12, abs_tol: 1e-14, ..Default::default() };
        integrate_observed(&Decay, &[1.0], &times, &ctl, |t, y| seen.push((t, y[0]))).unwrap();
        assert_eq!(seen.len(), times.len());
        for (t, y) in seen {
            assert!(times.contains(&t));
            assert!((y - (-t).exp()).abs() < 1e-11);
        }
    }

    #[test]
    fn oscillator_tolerance_scaling() {
        let times = [0.0, 20.0];
        for tol in [1e-6, 1e-9, 1e-12] {
            let ctl = StepControl { rel_tol: tol, abs_tol: tol * 1e-2, ..Default::default() };
            let mut last = vec![];
            integrate_observed(&Oscillator, &[1.0, 0.0], &times, &ctl, |_, y| last = y.to_vec()).unwrap();
            let err = ((last[0] - 20f64.cos()).powi(2) + (last[1] + 20f64.sin()).powi(2)).sqrt();
            assert!(err < 1e3 * tol, "tol {tol}: err {err}");
        }
    }

    #[test]
    fn finite_time_blowup_is_diagnosed() {
        let (failure, _, _, t) =
            integrate_observed(&Blowup, &[1.0], &[0.0, 2.0], &StepControl::default(), |_, _| {}).unwrap_err();
        assert!(t < 1.0 + 1e-6, "{t}");
        assert!(matches!(
            failure,
            IntegrationFailure::StepSizeUnderflow { .. } | IntegrationFailure::NonFiniteState { .. }
        ));
    }

    #[test]
    fn single_output_is_initial_state() {
        let mut seen = Vec::new();
        let stats = integrate_observed(&Decay, &[3.0], &[5.0], &StepControl::default(), |t, y| seen.push((t, y[0]))).unwrap();
        assert_eq!(seen, vec![(5.0, 3.0)]);
        assert_eq!(stats.accepted, 0);
    }
}
