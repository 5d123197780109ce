//! One DG-in-time solve of the damped wave benchmark with the full error
//! breakdown.
//!
//!     cargo run --release --example single_solve

use dgwave::problems::Problem;
use dgwave::slab::AdvanceOptions;
use dgwave::study::run_single;

fn main() {
    let problem = Problem::wave1d();
    let (q, r, k) = (3usize, 2usize, 0.125f64);
    let run = run_single(&problem, q, r, k, None, &AdvanceOptions::default()).unwrap();

    println!("wave1d, q = {q}, r = {r}, k = h = {k}");
    println!("energy-norm error       {:.5e}", run.row.energy_error);
    let b = &run.breakdown;
    println!("  ½‖ė(0+)‖²_M          {:.5e}", b.velocity_initial);
    println!("  ½Σ‖[ė]‖²_M           {:.5e}", b.velocity_jumps);
    println!("  ½‖ė(T-)‖²_M          {:.5e}", b.velocity_final);
    println!("  2γ∫‖ė‖²_M            {:.5e}", b.velocity_bulk);
    println!("  ½‖e(0+)‖²_W          {:.5e}", b.displacement_initial);
    println!("  ½Σ‖[e]‖²_W           {:.5e}", b.displacement_jumps);
    println!("  ½‖e(T-)‖²_W          {:.5e}", b.displacement_final);
    println!("endpoint L² (velocity)  {:.5e}", run.l2_velocity);
    println!("endpoint L² (displ.)    {:.5e}", run.l2_displacement);
    println!(
        "stability               |||u_DG||| = {:.4e} ≤ {:.4e}",
        run.stability_lhs, run.stability_rhs
    );
    println!("condition estimate      {:.3e}", run.condition_estimate);
}
