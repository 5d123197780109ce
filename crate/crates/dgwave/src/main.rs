//! Thin CLI over the library: single solves and convergence studies.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dgwave::energy::ConvergenceReport;
use dgwave::problems::{Problem, ProblemId};
use dgwave::slab::AdvanceOptions;
use dgwave::study::{self, csv_string, run_single, RRule, RowCheck, StudyConfig};
use dgwave::DgError;

#[derive(Parser)]
#[command(
    name = "dgwave",
    about = "DG-in-time solver for second-order hyperbolic systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one (q, r, k) configuration and print its errors
    Run(RunArgs),
    /// Sweep a (q, k) grid, write a CSV report, optionally compare against a
    /// golden table
    Study(StudyArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Problem id: wave1d | elasto2d
    #[arg(long)]
    problem: ProblemId,
    /// Temporal polynomial degree (>= 2)
    #[arg(long)]
    q: usize,
    /// Spatial element degree
    #[arg(long)]
    r: usize,
    /// Slab length (h = k)
    #[arg(long)]
    k: f64,
    /// Final time
    #[arg(long = "T", default_value_t = 1.0)]
    t: f64,
    /// Damping coefficient
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Dump mass/stiffness and per-slab A, b in MatrixMarket format
    /// (into ./matrix-dump)
    #[arg(long)]
    dump_matrices: bool,
    /// Write the single-row CSV report here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StudyArgs {
    /// Problem id: wave1d | elasto2d
    #[arg(long)]
    problem: ProblemId,
    /// Comma-separated temporal degrees, e.g. 2,3,4,5
    #[arg(long, value_delimiter = ',')]
    q_list: Vec<usize>,
    /// Spatial-degree rule: qm1 | q | fixed:N
    #[arg(long)]
    r_rule: RRule,
    /// Comma-separated k values, strictly decreasing, e.g. 0.5,0.25,0.125
    #[arg(long, value_delimiter = ',')]
    levels: Vec<f64>,
    /// Golden table CSV to compare against
    #[arg(long)]
    golden: Option<PathBuf>,
    /// Relative tolerance on errors for the golden comparison
    #[arg(long, default_value_t = 0.05)]
    tol_error: f64,
    /// Absolute tolerance on rates for the golden comparison
    #[arg(long, default_value_t = 0.1)]
    tol_rate: f64,
    /// Write the CSV report here
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(args: &RunArgs) -> Result<ExitCode, DgError> {
    let problem = Problem::from_id(args.problem)
        .with_gamma(args.gamma)
        .with_t_final(args.t);
    let options = AdvanceOptions {
        ritz_initial_data: false,
        dump_dir: args.dump_matrices.then(|| PathBuf::from("matrix-dump")),
    };
    let run = run_single(&problem, args.q, args.r, args.k, None, &options)?;
    println!(
        "{} q={} r={} k={} gamma={} T={}",
        args.problem, args.q, args.r, args.k, args.gamma, args.t
    );
    println!("energy error        {:.5e}", run.row.energy_error);
    println!("  velocity initial  {:.5e}", run.breakdown.velocity_initial);
    println!("  velocity jumps    {:.5e}", run.breakdown.velocity_jumps);
    println!("  velocity final    {:.5e}", run.breakdown.velocity_final);
    println!("  velocity bulk     {:.5e}", run.breakdown.velocity_bulk);
    println!(
        "  displacement init {:.5e}",
        run.breakdown.displacement_initial
    );
    println!(
        "  displacement jump {:.5e}",
        run.breakdown.displacement_jumps
    );
    println!(
        "  displacement final{:.5e}",
        run.breakdown.displacement_final
    );
    println!("L2 endpoint (vel)   {:.5e}", run.l2_velocity);
    println!("L2 endpoint (disp)  {:.5e}", run.l2_displacement);
    println!(
        "stability           {:.5e} <= {:.5e}",
        run.stability_lhs, run.stability_rhs
    );
    println!("condition estimate  {:.3e}", run.condition_estimate);
    if let Some(path) = &args.out {
        let report = ConvergenceReport {
            rows: vec![run.row.clone()],
        };
        study::write_csv(&report, path)?;
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn print_checks(checks: &[RowCheck]) -> bool {
    let mut all_pass = true;
    for c in checks {
        println!(
            "golden q={} k={}: {} ({})",
            c.q,
            c.k,
            if c.pass { "pass" } else { "FAIL" },
            c.detail
        );
        all_pass &= c.pass;
    }
    all_pass
}

fn study_cmd(args: &StudyArgs) -> Result<ExitCode, DgError> {
    let mut config = StudyConfig::new(
        args.problem,
        args.q_list.clone(),
        args.r_rule,
        args.levels.clone(),
    );
    config.out = args.out.clone();
    let (outcome, checks) = study::run_study_with_golden(
        &config,
        args.golden.as_deref(),
        args.tol_error,
        args.tol_rate,
    )?;
    print!("{}", csv_string(&outcome.report));
    for failure in &outcome.failures {
        eprintln!("run failed: {failure}");
    }
    if let Some(path) = &args.out {
        println!("wrote {}", path.display());
    }
    let mut ok = outcome.failures.is_empty();
    if let Some(checks) = checks {
        ok &= print_checks(&checks);
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => run(args),
        Command::Study(args) => study_cmd(args),
    };
    match result {
        Ok(code) => code,
        Err(
            err @ (DgError::Config(_)
            | DgError::InvalidArgument(_)
            | DgError::DegreeTooLow { .. }
            | DgError::UnsupportedElementDegree { .. }),
        ) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
