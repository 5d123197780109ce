//! The boundary-value-preserving projector and its integrated companion on a
//! truncated Legendre series.
//!
//!     cargo run --release --example projection_demo

use dgwave::legendre::{eval_legendre, gauss_rule};
use dgwave::projection::{project_p, project_pi, rescale, LegendreSeries};

fn main() {
    // expand sin(√2 π (t+1)) on (-1, 1)
    let sq2pi = std::f64::consts::SQRT_2 * std::f64::consts::PI;
    let rule = gauss_rule(48).unwrap();
    let coeffs: Vec<f64> = (0..=24)
        .map(|i| {
            (2 * i + 1) as f64 / 2.0
                * rule.integrate(|t| (sq2pi * (t + 1.0)).sin() * eval_legendre(i, t))
        })
        .collect();
    let series = LegendreSeries::from_scalars(&coeffs, (-1.0, 1.0)).unwrap();

    for q in [2usize, 3, 5] {
        let proj = project_pi(&series, q).unwrap();
        println!("Π^{q} u:");
        println!(
            "  left endpoint   {:+.12e} vs u(-1) {:+.12e}",
            proj.eval(-1.0)[0],
            series.eval(-1.0)[0]
        );
        println!(
            "  right endpoint  {:+.12e} vs u(1)  {:+.12e}",
            proj.eval(1.0)[0],
            series.eval(1.0)[0]
        );
        println!(
            "  ∂t at right     {:+.12e} vs u̇(1)  {:+.12e}",
            proj.eval_deriv(1.0)[0],
            series.eval_deriv(1.0)[0]
        );
        // defect orthogonality against P^{q-2}
        let mut worst: f64 = 0.0;
        for deg in 0..=q - 2 {
            let integral = rule.integrate(|t| {
                (series.eval_deriv(t)[0] - proj.eval_deriv(t)[0]) * eval_legendre(deg, t)
            });
            worst = worst.max(integral.abs());
        }
        println!("  max |⟨∂t defect, L_k⟩| for k ≤ q-2: {worst:.3e}");
    }

    // the plain projector moves tail mass onto L_q
    let w = LegendreSeries::from_scalars(&[0.0, 0.0, 0.0, 1.0], (-1.0, 1.0)).unwrap();
    let p = project_p(&w, 2);
    println!(
        "\nP^2 L_3 coefficients: [{:.1}, {:.1}, {:.1}] (tail mass lands on L_2)",
        p.coeffs()[0][0],
        p.coeffs()[1][0],
        p.coeffs()[2][0]
    );

    // transplanting keeps coefficients, moves the interval
    let moved = rescale(&p, (0.0, 0.5)).unwrap();
    println!(
        "rescaled to (0, 0.5): value at right endpoint {:+.6} = value at 1 before {:+.6}",
        moved.eval(0.5)[0],
        p.eval(1.0)[0]
    );
}
