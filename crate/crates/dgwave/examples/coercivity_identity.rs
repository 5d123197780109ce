//! The unconditional-stability identity A(v, v) = |||v|||²: the global
//! bilinear form evaluated through the slab matrices agrees with the energy
//! norm accumulated by quadrature, for arbitrary DG trajectories.
//!
//!     cargo run --release --example coercivity_identity

use nalgebra::{DMatrix, DVector};

use dgwave::energy::energy_norm;
use dgwave::fem::assemble_1d;
use dgwave::slab::{bilinear_form, SlabSolution, Trajectory, TrajectoryState};

fn main() {
    let system = assemble_1d(6, 1, 1.0).unwrap();
    let d = system.dof_count();
    // deterministic pseudo-random coefficients
    let mut state = 0x2545f4914f6cdd1du64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };

    println!("trial   q    A(v,v)            |||v|||^2         rel diff");
    for trial in 0..8 {
        let q = 2 + trial % 4;
        let slabs: Vec<SlabSolution> = (0..3)
            .map(|n| SlabSolution {
                coeffs: DMatrix::from_fn(d, q + 1, |_, _| next()),
                q,
                k: 0.2,
                t_start: 0.2 * n as f64,
            })
            .collect();
        let traj = Trajectory {
            initial: TrajectoryState {
                displacement: DVector::zeros(d),
                velocity: DVector::zeros(d),
            },
            slabs,
            condition_estimate: 1.0,
        };
        let form = bilinear_form(&system, &traj, &traj).unwrap();
        let norm_sq = energy_norm(&traj, &system).total();
        println!(
            "{trial:>5}   {q}    {form:.10e}   {norm_sq:.10e}   {:.2e}",
            (form - norm_sq).abs() / norm_sq
        );
    }
}
