//! Decay of the integrated-projection error across shrinking intervals:
//! ‖∂_t(u - Π^q u)‖_{L²} over a partition of (-1, 1) into intervals of
//! length k behaves like O(k^q).

use dgwave::legendre::{eval_legendre, gauss_rule};
use dgwave::projection::{project_pi, LegendreSeries};

/// Legendre coefficients of sin(√2 π (t+1)) on (-1, 1), truncated at m = 40
/// (truncation error far below measurement scale).
fn smooth_series() -> LegendreSeries {
    let sq2pi = std::f64::consts::SQRT_2 * std::f64::consts::PI;
    let rule = gauss_rule(64).unwrap();
    let coeffs: Vec<f64> = (0..=40)
        .map(|i| {
            let integral = rule.integrate(|t| (sq2pi * (t + 1.0)).sin() * eval_legendre(i, t));
            (2 * i + 1) as f64 / 2.0 * integral
        })
        .collect();
    LegendreSeries::from_scalars(&coeffs, (-1.0, 1.0)).unwrap()
}

#[test]
fn derivative_error_decays_at_rate_q() {
    let series = smooth_series();
    let quad = gauss_rule(30).unwrap();
    for q in 2..=5usize {
        let mut errors = Vec::new();
        for intervals in [4usize, 8, 16, 32] {
            let k = 2.0 / intervals as f64;
            let mut total = 0.0;
            for j in 0..intervals {
                let sub = (-1.0 + j as f64 * k, -1.0 + (j + 1) as f64 * k);
                let local = series.restricted_to(sub).unwrap();
                let proj = project_pi(&local, q).unwrap();
                total += quad
                    .mapped(sub.0, sub.1)
                    .map(|(t, w)| {
                        let d = local.eval_deriv(t)[0] - proj.eval_deriv(t)[0];
                        w * d * d
                    })
                    .sum::<f64>();
            }
            errors.push(total.sqrt());
        }
        for w in errors.windows(2) {
            let slope = (w[0] / w[1]).log2();
            assert!(
                (slope - q as f64).abs() < 0.2,
                "q={q}: slope {slope} (errors {errors:?})"
            );
        }
    }
}

#[test]
fn projection_is_stable_under_interval_transplant() {
    // the scaled operator inherits the reference-interval coefficients, so
    // projecting before or after transplanting is identical
    let series = smooth_series();
    let sub = series.restricted_to((0.25, 0.75)).unwrap();
    let direct = project_pi(&sub, 3).unwrap();
    let reference = LegendreSeries::new(sub.coeffs().to_vec(), (-1.0, 1.0)).unwrap();
    let via_reference =
        dgwave::projection::rescale(&project_pi(&reference, 3).unwrap(), (0.25, 0.75)).unwrap();
    for (a, b) in direct.coeffs().iter().zip(via_reference.coeffs()) {
        assert!((a[0] - b[0]).abs() < 1e-14);
    }
}
