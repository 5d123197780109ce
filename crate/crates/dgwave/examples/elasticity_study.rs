//! 2D linear elastodynamics study at q = 2 with P2 triangles on the
//! structured crossed-diagonal triangulation of the unit square.
//!
//!     cargo run --release --example elasticity_study
//!
//! The finest published level (k = 0.1) is opt-in:
//!
//!     cargo run --release --example elasticity_study -- --full

use dgwave::problems::ProblemId;
use dgwave::study::{run_study, RRule, StudyConfig};

fn main() {
    let full = std::env::args().any(|a| a == "--full");
    let mut levels = vec![0.5, 0.25, 0.125];
    if full {
        levels.push(0.1);
    }
    let config = StudyConfig::new(ProblemId::Elasto2d, vec![2], RRule::EqualQ, levels);
    let start = std::time::Instant::now();
    let outcome = run_study(&config).unwrap();
    println!("q    k         energy      rate     l2(v)+l2(u)  rate");
    for row in &outcome.report.rows {
        println!(
            "{}    {:<8}  {:.4e}  {:<7}  {:.4e}   {}",
            row.q,
            row.k,
            row.energy_error,
            row.energy_rate
                .map(|r| format!("{r:.4}"))
                .unwrap_or_else(|| "--".into()),
            row.l2_error,
            row.l2_rate
                .map(|r| format!("{r:.4}"))
                .unwrap_or_else(|| "--".into()),
        );
    }
    println!(
        "\nenergy rates trend to q - 1/2 = 1.5, endpoint L² rates to q + 1 = 3 \
         ({:.2?} total)",
        start.elapsed()
    );
}
