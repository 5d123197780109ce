//! End-to-end solver behavior on the benchmark problems.

use dgwave::energy::{energy_error, l2_endpoint_error_nodal};
use dgwave::problems::{Problem, ProblemId};
use dgwave::slab::{advance, initial_state, AdvanceOptions, TimeMesh};
use dgwave::study::{csv_string, run_single, run_study, RRule, StudyConfig};

#[test]
fn forcing_at_t0_is_cosine_part_only() {
    // at t = 0 the sine factor vanishes, so F(0) = 2√2 γ π · load(sin πx)
    let problem = Problem::wave1d();
    let system = problem.build_system(8, 2).unwrap();
    let f0 = system.assemble_load(|x| problem.forcing(x, 0.0));
    let sin_load = system.assemble_load(|x| [(std::f64::consts::PI * x[0]).sin(), 0.0]);
    let factor = 2.0 * std::f64::consts::SQRT_2 * problem.gamma * std::f64::consts::PI;
    assert!((f0 - sin_load * factor).amax() < 1e-13);
}

#[test]
fn continuity_defect_shrinks_with_k() {
    // the velocity jump at slab boundaries is part of the controlled energy,
    // so halving k must shrink the largest jump
    let problem = Problem::wave1d();
    let mut defects = Vec::new();
    for n in [2usize, 4, 8] {
        let system = problem.build_system(n, 1).unwrap();
        let mesh = TimeMesh::uniform(1.0, n, 2).unwrap();
        let traj = advance(&problem, &system, &mesh, &AdvanceOptions::default()).unwrap();
        let mut worst: f64 = 0.0;
        for w in traj.slabs.windows(2) {
            let t = w[1].t_start;
            let jump = w[1].eval(t, 1) - w[0].eval(t, 1);
            worst = worst.max(jump.norm());
        }
        defects.push(worst);
    }
    assert!(
        defects[0] > defects[1] && defects[1] > defects[2],
        "{defects:?}"
    );
}

#[test]
fn l2_error_vanishes_on_the_fe_function_itself() {
    // feed the FE field back as the "exact" function: the continuous error
    // must vanish to quadrature precision
    let problem = Problem::wave1d();
    let system = problem.build_system(5, 1).unwrap();
    let mesh = TimeMesh::uniform(1.0, 5, 2).unwrap();
    let traj = advance(&problem, &system, &mesh, &AdvanceOptions::default()).unwrap();
    let state = traj.final_state();
    let h = 0.2;
    let nodal = state.velocity.clone();
    let fe_function = move |x: [f64; 2]| {
        // piecewise-linear interpolant with zero boundary values
        let cell = ((x[0] / h).floor() as usize).min(4);
        let xi = (x[0] - cell as f64 * h) / h;
        let left = if cell == 0 { 0.0 } else { nodal[cell - 1] };
        let right = if cell == 4 { 0.0 } else { nodal[cell] };
        [left * (1.0 - xi) + right * xi, 0.0]
    };
    let err = system.space().l2_error(&state.velocity, fe_function);
    assert!(err < 1e-13, "self error {err}");
    // the nodal endpoint variant is positive for the manufactured problem
    let (nv, nd) = l2_endpoint_error_nodal(&traj, &problem, &system);
    assert!(nv > 0.0 && nd > 0.0);
}

#[test]
fn ritz_initial_data_is_close_to_nodal() {
    // the two initial-data choices differ at the spatial approximation order
    let problem = Problem::wave1d();
    let system = problem.build_system(16, 2).unwrap();
    let nodal = initial_state(&problem, &system, false).unwrap();
    let ritz = initial_state(&problem, &system, true).unwrap();
    let diff = (&nodal.velocity - &ritz.velocity).amax();
    assert!(diff > 0.0, "the two paths should not coincide exactly");
    assert!(
        diff < 1e-3,
        "difference should be at interpolation order: {diff}"
    );
    // and the resulting error measurements agree within the scheme error
    let mesh = TimeMesh::uniform(1.0, 8, 2).unwrap();
    let t_nodal = advance(&problem, &system, &mesh, &AdvanceOptions::default()).unwrap();
    let t_ritz = advance(
        &problem,
        &system,
        &mesh,
        &AdvanceOptions {
            ritz_initial_data: true,
            dump_dir: None,
        },
    )
    .unwrap();
    let e_nodal = energy_error(&t_nodal, &problem, &system).norm();
    let e_ritz = energy_error(&t_ritz, &problem, &system).norm();
    assert!(
        (e_nodal - e_ritz).abs() / e_nodal < 0.02,
        "{e_nodal} vs {e_ritz}"
    );
}

#[test]
fn breakdown_total_is_component_sum() {
    let problem = Problem::wave1d();
    let system = problem.build_system(4, 1).unwrap();
    let mesh = TimeMesh::uniform(1.0, 4, 2).unwrap();
    let traj = advance(&problem, &system, &mesh, &AdvanceOptions::default()).unwrap();
    let b = energy_error(&traj, &problem, &system);
    let manual = b.velocity_initial
        + b.velocity_jumps
        + b.velocity_final
        + b.velocity_bulk
        + b.displacement_initial
        + b.displacement_jumps
        + b.displacement_final;
    assert_eq!(b.total(), manual);
}

#[test]
fn endpoint_metrics_positive_and_consistent() {
    let problem = Problem::wave1d();
    let run = run_single(&problem, 2, 1, 0.25, None, &AdvanceOptions::default()).unwrap();
    assert!(run.l2_velocity > 0.0 && run.l2_displacement > 0.0);
    // the report's l2 column for the scalar problem is the velocity error
    assert_eq!(run.row.l2_error, run.l2_velocity);
    // for the vector problem it is the velocity + displacement sum
    let p2 = Problem::elasto2d();
    let run2 = run_single(&p2, 2, 2, 0.5, None, &AdvanceOptions::default()).unwrap();
    assert_eq!(run2.row.l2_error, run2.l2_velocity + run2.l2_displacement);
}

#[test]
fn elasticity_endpoint_error_matches_reference_value() {
    // q = 2, r = 2, k = h = 0.25: combined endpoint error 9.5802e-2
    let problem = Problem::elasto2d();
    let run = run_single(&problem, 2, 2, 0.25, None, &AdvanceOptions::default()).unwrap();
    let rel = (run.row.l2_error - 9.5802e-2).abs() / 9.5802e-2;
    assert!(rel < 0.05, "l2 {} (rel {rel:.2e})", run.row.l2_error);
}

#[test]
fn studies_are_deterministic() {
    let config = StudyConfig::new(
        ProblemId::Wave1d,
        vec![2, 3],
        RRule::QMinusOne,
        vec![0.5, 0.25],
    );
    let a = run_study(&config).unwrap();
    let b = run_study(&config).unwrap();
    assert!(a.failures.is_empty());
    assert_eq!(csv_string(&a.report), csv_string(&b.report));
}

#[test]
fn mismatched_k_and_horizon_is_a_config_error() {
    let problem = Problem::wave1d();
    let err = run_single(&problem, 2, 1, 0.3, None, &AdvanceOptions::default());
    assert!(err.is_err());
}
