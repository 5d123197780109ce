//! Full 1D convergence study with r = q - 1 elements, checked against the
//! bundled reference table. Grid: q ∈ {2..5}, k = 2^{-l}, l = 1..5.
//!
//!     cargo run --release --example wave_convergence

use dgwave::problems::ProblemId;
use dgwave::study::{csv_string, run_study_with_golden, RRule, StudyConfig};

fn main() {
    let config = StudyConfig::new(
        ProblemId::Wave1d,
        vec![2, 3, 4, 5],
        RRule::QMinusOne,
        vec![0.5, 0.25, 0.125, 0.0625, 0.03125],
    );
    let golden = format!("{}/data/table1.csv", env!("CARGO_MANIFEST_DIR"));
    let start = std::time::Instant::now();
    let (outcome, checks) =
        run_study_with_golden(&config, Some(golden.as_ref()), 0.05, 0.1).unwrap();
    print!("{}", csv_string(&outcome.report));
    let checks = checks.unwrap();
    let passed = checks.iter().filter(|c| c.pass).count();
    for c in checks.iter().filter(|c| !c.pass) {
        println!("FAIL q={} k={}: {}", c.q, c.k, c.detail);
    }
    println!(
        "golden comparison: {passed}/{} rows within 5% error / 0.1 rate, {:.2?} total",
        checks.len(),
        start.elapsed()
    );
}
