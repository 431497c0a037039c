//! Adaptive Simpson quadrature for smooth scalar integrands.

/// `∫_a^b f` by adaptive Simpson with Richardson correction.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, a, b, fa, fm, fb, whole, tol, 48)
}

/// `∫_a^b f` for `0 < a <= b` after substituting `s = e^u`, which keeps
/// integrands spread over many decades well resolved.
pub fn integrate_log<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    debug_assert!(a > 0.0 && b >= a);
    integrate(|u| {
        let s = u.exp();
        f(s) * s
    }, a.ln(), b.ln(), tol)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol.max(f64::EPSILON * (left + right).abs()) {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_power_laws() {
        assert!((integrate(|x| x * x, 0.0, 3.0, 1e-12) - 9.0).abs() < 1e-12);
        let exact = 2.0 * (1e5f64.sqrt() - 1.0);
        let got = integrate_log(|s| s.powf(-0.5), 1.0, 1e5, 1e-12);
        assert!((got - exact).abs() < 1e-9 * exact);
        assert_eq!(integrate(|x| x, 2.0, 2.0, 1e-9), 0.0);
    }
}
