//! Per-slab temporal degrees: the slab march accepts a different q on every
//! slab, so accuracy can be spent where it is needed.
//!
//!     cargo run --release --example hp_flexibility

use dgwave::energy::energy_error;
use dgwave::problems::Problem;
use dgwave::slab::{advance, AdvanceOptions, TimeMesh};

fn main() {
    let problem = Problem::wave1d();
    let system = problem.build_system(8, 2).unwrap();

    let uniform_low = TimeMesh::uniform(1.0, 8, 2).unwrap();
    let uniform_high = TimeMesh::uniform(1.0, 8, 4).unwrap();
    // raise the degree only on the second half of the interval
    let breaks: Vec<f64> = (0..=8).map(|n| n as f64 / 8.0).collect();
    let mixed = TimeMesh::new(breaks, vec![2, 2, 2, 2, 4, 4, 4, 4]).unwrap();

    for (name, mesh) in [
        ("q = 2 everywhere", uniform_low),
        ("q = 2 then q = 4 ", mixed),
        ("q = 4 everywhere", uniform_high),
    ] {
        let traj = advance(&problem, &system, &mesh, &AdvanceOptions::default()).unwrap();
        let err = energy_error(&traj, &problem, &system).norm();
        let dofs: usize = (0..mesh.n_slabs())
            .map(|n| system.dof_count() * (mesh.q(n) + 1))
            .sum();
        println!("{name}  energy error {err:.4e}  (time-space unknowns {dofs})");
    }
}
