//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use tikhonov_core::diagnostics::{
    eb_difference, eb_drift_bound_check, energy_eb, energy_eb_expanded, ergodic_deviation, rate_report,
    threshold_crossing_time, tikhonov_point, DriftCase, EnergyParams,
};
use tikhonov_core::dynamics::{integrate, integrate_direct, DynamicsConfig, Trajectory};
use tikhonov_core::problems::{least_squares, min_norm_solution, paper1d, psd_quadratic, shifted_quadratic, ObjectiveSpec};
use tikhonov_core::schedules::{
    check_condition_a, check_condition_b, check_limit_condition, check_t2eps_growth, classify_integrals,
    Integrability, TikhonovSchedule,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn dv(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}

fn power(gamma: f64) -> TikhonovSchedule {
    TikhonovSchedule::power(gamma, 1.0, 1.0).unwrap()
}

fn start_for(obj: &ObjectiveSpec) -> (Vec<f64>, Vec<f64>) {
    let d = obj.dimension();
    let u0 = if d == 1 { vec![2.0] } else { (0..d).map(|i| 2.0 - i as f64).collect() };
    (u0, vec![0.0; d])
}

fn cfg(obj: &ObjectiveSpec, alpha: f64, beta: f64, horizon: f64) -> DynamicsConfig {
    let (u0, v0) = start_for(obj);
    DynamicsConfig::new(alpha, beta, 1.0, u0, v0, horizon)
}

fn run(obj: &ObjectiveSpec, s: &TikhonovSchedule, c: &DynamicsConfig) -> Trajectory {
    integrate(obj, s, c).unwrap_or_else(|e| panic!("{} run failed: {e}", obj.name))
}

fn matrix_problems() -> Vec<ObjectiveSpec> {
    vec![
        paper1d(),
        shifted_quadratic(dv(&[1.0, -0.5])).unwrap(),
        least_squares(DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]), dv(&[1.0, 1.0])).unwrap(),
    ]
}

/// 1. W is nonincreasing with violation <= 1e-8 (1 + W(t0)).
fn energy_dissipation() -> Outcome {
    let schedules = [TikhonovSchedule::zero(1.0), power(1.5), power(2.5)];
    let mut runs = 0;
    let mut worst = 0.0_f64;
    let mut failures = Vec::new();
    for obj in matrix_problems() {
        for alpha in [3.0, 4.0, 10.0] {
            for beta in [0.0, 1.0] {
                for s in &schedules {
                    let traj = run(&obj, s, &cfg(&obj, alpha, beta, 1e3));
                    let w0 = traj.samples[0].energy;
                    let rise = traj
                        .samples
                        .windows(2)
                        .map(|w| w[1].energy - w[0].energy)
                        .fold(f64::NEG_INFINITY, f64::max);
                    let ratio = rise / (1e-8 * (1.0 + w0));
                    worst = worst.max(ratio);
                    if ratio > 1.0 {
                        failures.push(format!("{} α={alpha} β={beta} {:?}", obj.name, s.kind()));
                    }
                    runs += 1;
                }
            }
        }
    }
    outcome(
        failures.is_empty() && runs == 54,
        format!("{runs} runs, worst rise / tolerance = {worst:.3e}, failures: {failures:?}"),
    )
}

/// 2. Lifted and direct forms agree to 1e-6 over [t0, 50] at rel_tol 1e-12.
fn reformulation_equivalence() -> Outcome {
    let mut worst = 0.0_f64;
    for center in [vec![1.0], vec![1.0, -2.0, 0.5]] {
        let obj = shifted_quadratic(dv(&center)).unwrap();
        for beta in [0.0, 1.0] {
            let s = power(1.5);
            let c = cfg(&obj, 3.0, beta, 50.0).with_tolerances(1e-12, 1e-14);
            let a = run(&obj, &s, &c);
            let b = integrate_direct(&obj, &s, &c).unwrap();
            for (p, q) in a.samples.iter().zip(&b.samples) {
                assert_eq!(p.t, q.t);
                worst = worst.max((&p.x - &q.x).amax()).max((&p.velocity - &q.velocity).amax());
            }
        }
    }
    outcome(worst <= 1e-6, format!("max-norm difference {worst:.3e}"))
}

fn t2_gap_at(traj: &Trajectory, t: f64) -> f64 {
    let p = traj.nearest(t).unwrap();
    p.t * p.t * p.gap
}

fn sup_t2_gap(traj: &Trajectory, lo: f64, hi: f64) -> f64 {
    traj.samples
        .iter()
        .filter(|p| p.t >= lo && p.t <= hi)
        .map(|p| p.t * p.t * p.gap)
        .fold(0.0, f64::max)
}

/// 3. α = 3, ε = t^{-2.5}: t²·gap bounded on [100, 1e4] and not growing.
fn big_o_rate() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for obj in [paper1d(), shifted_quadratic(dv(&[1.0])).unwrap()] {
        for beta in [0.0, 1.0] {
            let s = power(2.5);
            let c = cfg(&obj, 3.0, beta, 1e4);
            let traj = run(&obj, &s, &c);
            let reference = run(&obj, &s, &c.clone().with_tolerances(1e-12, 1e-15));
            let sup = sup_t2_gap(&traj, 100.0, 1e4);
            let sup_ref = sup_t2_gap(&reference, 100.0, 1e4);
            let (v3, v4) = (t2_gap_at(&traj, 1e3), t2_gap_at(&traj, 1e4));
            let plateau = (sup - sup_ref).abs() <= 0.01 * sup.abs().max(sup_ref.abs());
            let this = sup.is_finite() && v4 <= 2.0 * v3 && plateau;
            ok &= this;
            notes.push(format!("{} β={beta}: sup={sup:.3e} (ref {sup_ref:.3e}) t=1e3:{v3:.3e} t=1e4:{v4:.3e}", obj.name));
        }
    }
    outcome(ok, notes.join("; "))
}

/// 4. α = 4: decade decrease of t²·gap, t‖ẋ+β∇g‖ and t²ε‖x‖².
fn little_o_rate() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for obj in [paper1d(), shifted_quadratic(dv(&[1.0])).unwrap()] {
        for beta in [0.0, 1.0] {
            let s = power(2.5);
            let c = cfg(&obj, 4.0, beta, 1e4);
            let traj = run(&obj, &s, &c);
            let r = rate_report(&traj, &obj, &s, &c).unwrap();
            let this = r.tail_decay_t2_gap.consistent && r.t_momentum.verdict.consistent && r.t2_eps_x2.verdict.consistent;
            ok &= this;
            let ratio = |v: &tikhonov_core::diagnostics::DecadeVerdict| {
                if v.previous_decade_max == 0.0 {
                    0.0
                } else {
                    v.last_decade_max / v.previous_decade_max
                }
            };
            notes.push(format!(
                "{} β={beta}: ratios {:.3} {:.3} {:.3}",
                obj.name,
                ratio(&r.tail_decay_t2_gap),
                ratio(&r.t_momentum.verdict),
                ratio(&r.t2_eps_x2.verdict)
            ));
        }
    }
    outcome(ok, notes.join("; "))
}

/// 5. Zero schedule ends in the argmin box; Tikhonov runs approach 0.
fn figure_one() -> Outcome {
    let obj = paper1d();
    let mut ok = true;
    let mut notes = Vec::new();
    for alpha in [3.0, 4.0] {
        let c = cfg(&obj, alpha, 1.0, 1e4).with_tolerances(1e-12, 1e-14);
        let zero = run(&obj, &TikhonovSchedule::zero(1.0), &c);
        let last = zero.last().unwrap();
        let inside = last.x[0].abs() <= 1.05 && last.gap <= 1e-6;
        ok &= inside;
        notes.push(format!("α={alpha} zero: x={:.4} gap={:.1e}", last.x[0], last.gap));
        for gamma in [1.1, 1.5, 1.9] {
            let traj = run(&obj, &power(gamma), &c);
            let min_abs = traj.samples.iter().map(|p| p.x[0].abs()).fold(f64::INFINITY, f64::min);
            ok &= min_abs <= 0.05;
            notes.push(format!("γ={gamma}: min|x|={min_abs:.2e}"));
        }
    }
    outcome(ok, notes.join("; "))
}

/// 6. Crossing times of t²ε past (2/3)α(α/3 − 1 + βc²) at α = 200.
fn figure_two() -> Outcome {
    let (alpha, beta, c_lb) = (200.0, 1.0, 1.0);
    let k = 2.0 / 3.0 * alpha * (alpha / 3.0 - 1.0 + beta * c_lb * c_lb);
    let obj = paper1d();
    let mut crossings = Vec::new();
    let mut ok = true;
    let mut notes = Vec::new();
    // The regularized oscillation needs about t^{1-γ/2} steps per decade, so
    // each γ gets the smallest power-of-ten horizon past its crossing.
    for (gamma, horizon) in [(1.1, 1e5), (1.5, 1e9), (1.9, 1e40)] {
        let s = power(gamma);
        let c = cfg(&obj, alpha, beta, horizon);
        let traj = run(&obj, &s, &c);
        let closed = k.powf(1.0 / (2.0 - gamma));
        let Some(t_cross) = threshold_crossing_time(&traj, &s, k) else {
            ok = false;
            notes.push(format!("γ={gamma}: no crossing"));
            continue;
        };
        let idx = traj.samples.iter().position(|p| p.t == t_cross).unwrap();
        let prev = if idx == 0 { 0.0 } else { traj.samples[idx - 1].t };
        ok &= prev < closed && closed <= t_cross * (1.0 + 1e-12);
        crossings.push(t_cross);
        notes.push(format!("γ={gamma}: sampled {t_cross:.3e}, closed form {closed:.3e}"));
    }
    ok &= crossings.len() == 3 && crossings[0] < crossings[1] && crossings[1] < crossings[2];
    outcome(ok, notes.join("; "))
}

/// 7. Ergodic deviation halves between the first-quartile sample and the horizon.
fn ergodic() -> Outcome {
    let obj = paper1d();
    let s = TikhonovSchedule::logarithmic(std::f64::consts::E, 1.0).unwrap();
    let c = cfg(&obj, 3.0, 1.0, ERGODIC_HORIZON);
    let traj = run(&obj, &s, &c);
    let series = ergodic_deviation(&traj).unwrap();
    let quartile_t = traj.samples[(traj.samples.len() - 1) / 4].t;
    let at_q = series.iter().find(|p| p.0 >= quartile_t).unwrap().1;
    let at_end = series.last().unwrap().1;
    outcome(
        at_end <= 0.5 * at_q,
        format!("horizon {ERGODIC_HORIZON:e}: deviation {at_end:.4e} at end vs {at_q:.4e} at t={quartile_t:.3e} (ratio {:.3})", at_end / at_q),
    )
}

const ERGODIC_HORIZON: f64 = 1e4;

/// 8. Tikhonov curve on every builtin.
fn tikhonov_curve() -> Outcome {
    let problems = vec![
        paper1d(),
        shifted_quadratic(dv(&[1.0, -2.0, 0.5])).unwrap(),
        psd_quadratic(DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.0]), dv(&[2.0, 0.0])).unwrap(),
        least_squares(DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 1.0, 0.0, 1.0, 1.0]), dv(&[1.0, 2.0])).unwrap(),
        least_squares(DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]), dv(&[1.0, 1.0])).unwrap(),
    ];
    let mut ok = true;
    let mut worst_res = 0.0_f64;
    let mut notes = Vec::new();
    for obj in &problems {
        let xstar = min_norm_solution(obj).unwrap();
        let mut last = f64::INFINITY;
        for eps in [1.0, 0.1, 0.01, 1e-3] {
            let x = tikhonov_point(obj, eps).unwrap();
            let res = (obj.gradient(&x) + &x * eps).norm();
            worst_res = worst_res.max(res);
            let dist = (&x - &xstar).norm();
            let this = x.norm() <= xstar.norm() + 1e-10 && dist <= last && res <= 1e-10;
            if !this {
                notes.push(format!("{} ε={eps}: ‖x‖={:.3e} ‖x*‖={:.3e} dist={dist:.3e}", obj.name, x.norm(), xstar.norm()));
            }
            ok &= this;
            last = dist;
        }
    }
    outcome(ok, format!("{} problems, worst residual {worst_res:.2e} {notes:?}", problems.len()))
}

/// 9. Hypothesis verdicts against the exponent-arithmetic table.
fn truth_table() -> Outcome {
    // γ, ∫ε/t, ∫tε, ∫ε, (a), (b), growth α=3, growth α=6, limit α=3, limit α=6
    #[rustfmt::skip]
    let table: [(f64, [bool; 9]); 8] = [
        (0.5, [true, false, false, false, false, true,  true,  false, false]),
        (1.0, [true, false, false, true,  true,  true,  true,  false, false]),
        (1.1, [true, false, true,  true,  true,  true,  true,  true,  true ]),
        (1.5, [true, false, true,  true,  true,  true,  true,  true,  true ]),
        (1.9, [true, false, true,  true,  true,  true,  true,  true,  true ]),
        (2.0, [true, false, true,  true,  true,  false, false, false, true ]),
        (2.5, [true, true,  true,  true,  true,  false, false, false, true ]),
        (3.0, [true, true,  true,  true,  true,  false, false, false, false]),
    ];
    let mut mismatches = Vec::new();
    for (gamma, expected) in table {
        let s = power(gamma);
        let ints = classify_integrals(&s);
        let finite = |i: &Integrability| match i {
            Integrability::Finite => Some(true),
            Integrability::Infinite => Some(false),
            Integrability::Unknown { .. } => None,
        };
        let got = [
            finite(&ints.int_eps_over_t),
            finite(&ints.int_t_eps),
            finite(&ints.int_eps),
            Some(check_condition_a(&s, 1.0, 2.0).unwrap().holds()),
            Some(check_condition_b(&s, 1.0).unwrap().holds()),
            Some(check_t2eps_growth(&s, 3.0, 1.0, 1.0).unwrap().holds()),
            Some(check_t2eps_growth(&s, 6.0, 1.0, 1.0).unwrap().holds()),
            Some(check_limit_condition(&s, 3.0, 1.0).holds()),
            Some(check_limit_condition(&s, 6.0, 1.0).holds()),
        ];
        for (k, (g, e)) in got.iter().zip(expected).enumerate() {
            if *g != Some(e) {
                mismatches.push(format!("γ={gamma} column {k}: got {g:?}, expected {e}"));
            }
        }
    }
    outcome(mismatches.is_empty(), format!("8 × 9 verdicts, mismatches: {mismatches:?}"))
}

/// 10. Drift-corrected E_b is nonincreasing in both cases.
fn drift_bound() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;

    let obj = paper1d();
    let s = power(1.5);
    let c = cfg(&obj, 4.0, 1.0, 1e4);
    let traj = run(&obj, &s, &c);
    let params = EnergyParams::new(2.5, 0.0, min_norm_solution(&obj).unwrap()).unwrap();
    let r = eb_drift_bound_check(&traj, &obj, &s, &c, &params, 2.0, DriftCase::A).unwrap();
    ok &= r.passed();
    notes.push(format!("paper1d case (a): t2={} samples={} {:?}", r.t_start, r.checked_samples, r.verdict));

    let obj = shifted_quadratic(dv(&[1.0])).unwrap();
    let s = power(2.5);
    let c = cfg(&obj, 3.0, 0.0, 1e4);
    let traj = run(&obj, &s, &c);
    let params = EnergyParams::new(2.0, 0.0, min_norm_solution(&obj).unwrap()).unwrap();
    let r = eb_drift_bound_check(&traj, &obj, &s, &c, &params, 1.0, DriftCase::B).unwrap();
    ok &= r.passed();
    notes.push(format!("shifted_quadratic case (b): t3={} samples={} {:?}", r.t_start, r.checked_samples, r.verdict));
    outcome(ok, notes.join("; "))
}

/// 11. Both forms of E_b and the difference identity agree to 1e-10 relative.
fn identities() -> Outcome {
    let mut worst_forms = 0.0_f64;
    let mut worst_diff = 0.0_f64;
    let cases: Vec<(ObjectiveSpec, f64, f64, [f64; 2])> = vec![
        (paper1d(), 4.0, 1.0, [2.5, 2.2]),
        (shifted_quadratic(dv(&[1.0, -0.5])).unwrap(), 10.0, 1.0, [5.5, 8.0]),
        (shifted_quadratic(dv(&[1.0])).unwrap(), 3.0, 0.0, [2.0, 2.0]),
        (least_squares(DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]), dv(&[1.0, 1.0])).unwrap(), 6.0, 0.0, [2.5, 4.5]),
    ];
    let mut count = 0;
    for (obj, alpha, beta, [b1, b2]) in cases {
        let s = power(1.5);
        let c = cfg(&obj, alpha, beta, 1e3);
        let traj = run(&obj, &s, &c);
        let xs = min_norm_solution(&obj).unwrap();
        let p1 = EnergyParams::new(b1, 0.0, xs.clone()).unwrap();
        let p2 = EnergyParams::new(b2, 0.0, xs.clone()).unwrap();
        for sample in &traj.samples {
            let e0 = energy_eb(&obj, &s, &c, &p1, sample).unwrap();
            let e1 = energy_eb_expanded(&obj, &s, &c, &p1, sample).unwrap();
            let e2 = energy_eb(&obj, &s, &c, &p2, sample).unwrap();
            let d = eb_difference(&obj, &s, &c, b1, b2, &xs, sample).unwrap();
            let scale = e0.abs().max(e2.abs()).max(f64::MIN_POSITIVE);
            worst_forms = worst_forms.max((e0 - e1).abs() / scale);
            worst_diff = worst_diff.max(((e0 - e2) - d).abs() / scale);
            count += 1;
        }
    }
    outcome(
        worst_forms <= 1e-10 && worst_diff <= 1e-10,
        format!("{count} samples, forms {worst_forms:.2e}, difference {worst_diff:.2e}"),
    )
}

/// 12. (1/T²)∫ sε(s) ds at T = 1e5 is at most 1e-3 of its value at T = 10 t0.
fn averaged_limit() -> Outcome {
    let s = power(1.5);
    let phi = |t: f64| t * t;
    let early = s.weighted_average(phi, 10.0);
    let late = s.weighted_average(phi, 1e5);
    outcome(late <= 1e-3 * early, format!("{late:.4e} vs {early:.4e} (ratio {:.3e})", late / early))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("energy dissipation", energy_dissipation),
        ("reformulation equivalence", reformulation_equivalence),
        ("O(1/t^2) rate", big_o_rate),
        ("o(1/t^2) rate", little_o_rate),
        ("trajectories with and without regularization", figure_one),
        ("threshold crossing times", figure_two),
        ("ergodic convergence", ergodic),
        ("Tikhonov curve", tikhonov_curve),
        ("hypothesis truth table", truth_table),
        ("E_b drift bound", drift_bound),
        ("algebraic identities", identities),
        ("averaged limit sanity", averaged_limit),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|k| name.contains(k.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = f();
        let status = if result.pass { "PASS" } else { "FAIL" };
        if !result.pass {
            failed += 1;
        }
        println!(
            "[{status}] {:>2}. {name}: {} ({:.1}s)",
            i + 1,
            result.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
