//! Temporal basis tour: Legendre recurrence, slab basis values and
//! Gauss-Legendre quadrature.
//!
//!     cargo run --release --example legendre_basis

use dgwave::legendre::{eval_legendre, gauss_rule, SlabBasis};

fn main() {
    println!("Legendre endpoint values L_i(±1):");
    for i in 0..=6 {
        println!(
            "  L_{i}(-1) = {:+.1}, L_{i}(1) = {:+.1}",
            eval_legendre(i, -1.0),
            eval_legendre(i, 1.0)
        );
    }

    let basis = SlabBasis::new(4, 0.25, 0.125).unwrap();
    println!("\nslab basis on (0.25, 0.375], q = {}:", basis.q);
    println!("  t        φ1      φ2      φ3      φ4      φ5");
    for step in 0..=4 {
        let t = 0.25 + 0.125 * step as f64 / 4.0;
        let vals = basis.eval_all(t, 0);
        print!("  {t:.4}");
        for v in vals {
            print!("  {v:+.3}");
        }
        println!();
    }
    println!("(every φ^j equals 1 at the slab's right endpoint)");

    println!("\nGauss rules: weight sums and polynomial exactness");
    for n in [1usize, 2, 5, 12] {
        let rule = gauss_rule(n).unwrap();
        let weight_sum: f64 = rule.weights.iter().sum();
        let degree = 2 * n - 1;
        let moment = rule.integrate(|t| t.powi(degree as i32 - 1));
        let exact = 2.0 / degree as f64;
        println!(
            "  n = {n:2}: Σw = {weight_sum:.15}, ∫t^{} = {moment:.15} (exact {exact:.15})",
            degree - 1
        );
    }
}
