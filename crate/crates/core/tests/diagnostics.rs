use nalgebra::{DMatrix, DVector};
use tikhonov_core::diagnostics::{
    eb_drift_bound_check, ergodic_deviation, rate_report, tikhonov_curve, tikhonov_point, DriftCase, EnergyParams,
};
use tikhonov_core::dynamics::{integrate, DynamicsConfig};
use tikhonov_core::error::Error;
use tikhonov_core::problems::{least_squares, min_norm_solution, paper1d, psd_quadratic, shifted_quadratic, ObjectiveSpec};
use tikhonov_core::schedules::TikhonovSchedule;

fn dv(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}

fn power(gamma: f64) -> TikhonovSchedule {
    TikhonovSchedule::power(gamma, 1.0, 1.0).unwrap()
}

#[test]
fn little_o_verdict_on_shifted_quadratic() {
    let obj = shifted_quadratic(dv(&[1.0])).unwrap();
    let s = power(2.5);
    let cfg = DynamicsConfig::new(4.0, 0.0, 1.0, vec![2.0], vec![0.0], 1e4);
    let traj = integrate(&obj, &s, &cfg).unwrap();
    let r = rate_report(&traj, &obj, &s, &cfg).unwrap();
    assert!(r.tail_decay_t2_gap.consistent);
    assert!(r.ergodic_deviation.is_some());
}

#[test]
fn big_o_plateau_at_alpha_three() {
    let obj = shifted_quadratic(dv(&[1.0])).unwrap();
    let s = power(2.5);
    let cfg = DynamicsConfig::new(3.0, 0.0, 1.0, vec![2.0], vec![0.0], 1e4);
    let traj = integrate(&obj, &s, &cfg).unwrap();
    let r = rate_report(&traj, &obj, &s, &cfg).unwrap();
    assert!(r.sup_t2_gap.is_finite() && r.sup_t2_gap > 0.0);
}

#[test]
fn ergodic_deviation_decays_with_logarithmic_schedule() {
    let obj = paper1d();
    let s = TikhonovSchedule::logarithmic(std::f64::consts::E, 1.0).unwrap();
    let cfg = DynamicsConfig::new(3.0, 1.0, 1.0, vec![2.0], vec![0.0], 1e4);
    let traj = integrate(&obj, &s, &cfg).unwrap();
    let series = ergodic_deviation(&traj).unwrap();
    let q = traj.samples[(traj.samples.len() - 1) / 4].t;
    let at_q = series.iter().find(|p| p.0 >= q).unwrap().1;
    assert!(series.last().unwrap().1 <= 0.5 * at_q);
}

#[test]
fn ergodic_deviation_refuses_zero_schedule() {
    let obj = paper1d();
    let s = TikhonovSchedule::zero(1.0);
    let cfg = DynamicsConfig::new(3.0, 1.0, 1.0, vec![2.0], vec![0.0], 100.0);
    let traj = integrate(&obj, &s, &cfg).unwrap();
    assert!(matches!(ergodic_deviation(&traj), Err(Error::ZeroDenominator(_))));
    let r = rate_report(&traj, &obj, &s, &cfg).unwrap();
    assert!(r.ergodic_deviation.is_none());
}

fn all_builtins() -> Vec<ObjectiveSpec> {
    vec![
        paper1d(),
        shifted_quadratic(dv(&[3.0, -1.0])).unwrap(),
        psd_quadratic(DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 0.0]), dv(&[1.0, 1.0, 0.0])).unwrap(),
        least_squares(DMatrix::from_row_slice(1, 2, &[3.0, 4.0]), dv(&[5.0])).unwrap(),
    ]
}

#[test]
fn tikhonov_points_stay_inside_the_min_norm_ball() {
    for obj in all_builtins() {
        let xstar = min_norm_solution(&obj).unwrap();
        let curve = tikhonov_curve(&obj, &[1.0, 0.5, 0.1, 0.01, 1e-3, 1e-4]).unwrap();
        let mut last = f64::INFINITY;
        for p in &curve {
            assert!(p.norm <= xstar.norm() + 1e-10, "{}", obj.name);
            assert!(p.residual <= 1e-10);
            let dist = p.distance_to_xstar.unwrap();
            assert!(dist <= last + 1e-14);
            last = dist;
        }
    }
}

#[test]
fn tikhonov_point_closed_form_for_least_squares() {
    // x_ε = Aᵀ(AAᵀ + ε)⁻¹ b for a single row.
    let obj = least_squares(DMatrix::from_row_slice(1, 2, &[3.0, 4.0]), dv(&[5.0])).unwrap();
    let eps = 0.5;
    let x = tikhonov_point(&obj, eps).unwrap();
    let lambda = 5.0 / (25.0 + eps);
    assert!((x[0] - 3.0 * lambda).abs() < 1e-12 && (x[1] - 4.0 * lambda).abs() < 1e-12);
}

#[test]
fn drift_bound_reduces_to_monotone_eb_without_regularization() {
    let obj = shifted_quadratic(dv(&[1.0])).unwrap();
    let s = TikhonovSchedule::zero(1.0);
    let cfg = DynamicsConfig::new(5.0, 1.0, 1.0, vec![2.0], vec![0.0], 1e3);
    let traj = integrate(&obj, &s, &cfg).unwrap();
    let params = EnergyParams::default_for(5.0, dv(&[1.0])).unwrap();
    for case in [DriftCase::A, DriftCase::B] {
        let r = eb_drift_bound_check(&traj, &obj, &s, &cfg, &params, 2.0, case).unwrap();
        assert!(r.passed(), "{case:?}: {:?}", r.verdict);
    }
}

#[test]
fn drift_bound_with_nonzero_min_norm_solution() {
    let obj = shifted_quadratic(dv(&[1.0, 2.0])).unwrap();
    let s = power(1.5);
    let cfg = DynamicsConfig::new(6.0, 1.0, 1.0, vec![0.0, 0.0], vec![0.0, 0.0], 1e3);
    let traj = integrate(&obj, &s, &cfg).unwrap();
    let params = EnergyParams::default_for(6.0, dv(&[1.0, 2.0])).unwrap();
    let r = eb_drift_bound_check(&traj, &obj, &s, &cfg, &params, 2.0, DriftCase::A).unwrap();
    assert!(r.passed(), "{:?}", r.verdict);
    assert_eq!(r.l, params.b);
}

#[test]
fn drift_bound_rejects_uncertified_hypotheses_and_bad_b() {
    let obj = paper1d();
    let s = power(0.5);
    let cfg = DynamicsConfig::new(4.0, 1.0, 1.0, vec![2.0], vec![0.0], 100.0);
    let traj = integrate(&obj, &s, &cfg).unwrap();
    let params = EnergyParams::new(2.5, 0.0, dv(&[0.0])).unwrap();
    assert!(matches!(
        eb_drift_bound_check(&traj, &obj, &s, &cfg, &params, 2.0, DriftCase::A),
        Err(Error::HypothesisNotCertified(_))
    ));
    let edge = EnergyParams::new(3.0, 0.0, dv(&[0.0])).unwrap();
    assert!(eb_drift_bound_check(&traj, &obj, &power(1.5), &cfg, &edge, 2.0, DriftCase::A).is_err());
}
