//! Shared test support: an adaptive Runge-Kutta oracle independent of the
//! solver under test.

/// Dormand-Prince 5(4) with step-doubling error control. Integrates
/// y' = f(t, y) from t0 to t1 and returns y(t1). The tolerance governs the
/// local error per unit step.
pub fn rk45(
    f: impl Fn(f64, &[f64]) -> Vec<f64>,
    t0: f64,
    y0: &[f64],
    t1: f64,
    tol: f64,
) -> Vec<f64> {
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
    const B1: f64 = 35.0 / 384.0;
    const B3: f64 = 500.0 / 1113.0;
    const B4: f64 = 125.0 / 192.0;
    const B5: f64 = -2187.0 / 6784.0;
    const B6: f64 = 11.0 / 84.0;
    const E1: f64 = 71.0 / 57600.0;
    const E3: f64 = -71.0 / 16695.0;
    const E4: f64 = 71.0 / 1920.0;
    const E5: f64 = -17253.0 / 339200.0;
    const E6: f64 = 22.0 / 525.0;
    const E7: f64 = -1.0 / 40.0;

    let n = y0.len();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut h = (t1 - t0) / 16.0;
    let combine = |y: &[f64], parts: &[(f64, &Vec<f64>)], h: f64| -> Vec<f64> {
        let mut out = y.to_vec();
        for (c, k) in parts {
            for i in 0..n {
                out[i] += h * c * k[i];
            }
        }
        out
    };
    let mut steps = 0usize;
    while t < t1 - 1e-14 {
        if t + h > t1 {
            h = t1 - t;
        }
        let k1 = f(t, &y);
        let k2 = f(t + h / 5.0, &combine(&y, &[(A21, &k1)], h));
        let k3 = f(
            t + 3.0 * h / 10.0,
            &combine(&y, &[(A31, &k1), (A32, &k2)], h),
        );
        let k4 = f(
            t + 4.0 * h / 5.0,
            &combine(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h),
        );
        let k5 = f(
            t + 8.0 * h / 9.0,
            &combine(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h),
        );
        let k6 = f(
            t + h,
            &combine(
                &y,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                h,
            ),
        );
        let y5 = combine(
            &y,
            &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
            h,
        );
        let k7 = f(t + h, &y5);
        let mut err: f64 = 0.0;
        for i in 0..n {
            let e =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            err = err.max((e / (1.0 + y[i].abs())).abs());
        }
        if err <= tol * h.abs().max(1e-16) {
            t += h;
            y = y5;
        }
        let scale = if err > 0.0 {
            0.9 * (tol * h.abs() / err).powf(0.2)
        } else {
            2.0
        };
        h *= scale.clamp(0.2, 2.0);
        steps += 1;
        assert!(
            steps < 2_000_000,
            "oracle integrator failed to make progress"
        );
    }
    y
}

#[allow(dead_code)]
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
