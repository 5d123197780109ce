//! Convergence-study driver: sweeps (q, k = h) grids over the registered
//! problems, emits CSV reports and compares against golden tables.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::energy::{
    energy_error, energy_norm, l2_endpoint_error, ConvergenceReport, EnergyErrorBreakdown,
    ReportRow,
};
use crate::error::DgError;
use crate::mm;
use crate::problems::{Problem, ProblemId};
use crate::slab::{advance, AdvanceOptions, TimeMesh};

/// How the spatial degree follows the temporal degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RRule {
    /// r = q - 1 (the 1D study of the reference tables)
    QMinusOne,
    /// r = q (the 2D study)
    EqualQ,
    /// fixed r independent of q
    Fixed(usize),
}

impl RRule {
    pub fn spatial_degree(&self, q: usize) -> usize {
        match self {
            RRule::QMinusOne => q - 1,
            RRule::EqualQ => q,
            RRule::Fixed(r) => *r,
        }
    }
}

impl FromStr for RRule {
    type Err = DgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "qm1" => Ok(RRule::QMinusOne),
            "q" => Ok(RRule::EqualQ),
            other => {
                if let Some(n) = other.strip_prefix("fixed:") {
                    let r = n.parse::<usize>().map_err(|_| {
                        DgError::Config(format!("bad fixed degree in r-rule '{other}'"))
                    })?;
                    Ok(RRule::Fixed(r))
                } else {
                    Err(DgError::Config(format!(
                        "unknown r-rule '{other}' (expected qm1, q or fixed:N)"
                    )))
                }
            }
        }
    }
}

impl fmt::Display for RRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RRule::QMinusOne => write!(f, "qm1"),
            RRule::EqualQ => write!(f, "q"),
            RRule::Fixed(r) => write!(f, "fixed:{r}"),
        }
    }
}

/// Configuration of one study sweep.
#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub problem: ProblemId,
    pub qs: Vec<usize>,
    pub r_rule: RRule,
    /// k values, strictly decreasing; h = k unless `h_override` is set.
    pub levels: Vec<f64>,
    pub h_override: Option<f64>,
    pub t_final: f64,
    /// None keeps the problem registry's damping value.
    pub gamma: Option<f64>,
    pub out: Option<PathBuf>,
}

impl StudyConfig {
    pub fn new(problem: ProblemId, qs: Vec<usize>, r_rule: RRule, levels: Vec<f64>) -> Self {
        Self {
            problem,
            qs,
            r_rule,
            levels,
            h_override: None,
            t_final: 1.0,
            gamma: None,
            out: None,
        }
    }

    fn validate(&self) -> Result<(), DgError> {
        if self.qs.is_empty() {
            return Err(DgError::Config("empty q list".into()));
        }
        if let Some(&q) = self.qs.iter().find(|&&q| q < 2) {
            return Err(DgError::Config(format!("temporal degree {q} below 2")));
        }
        if self.levels.is_empty() {
            return Err(DgError::Config("empty level list".into()));
        }
        if self.levels.windows(2).any(|w| w[1] >= w[0]) {
            return Err(DgError::Config("levels must strictly decrease".into()));
        }
        if self.t_final <= 0.0 {
            return Err(DgError::Config("final time must be positive".into()));
        }
        Ok(())
    }

    fn problem_instance(&self) -> Problem {
        let mut p = Problem::from_id(self.problem).with_t_final(self.t_final);
        if let Some(g) = self.gamma {
            p = p.with_gamma(g);
        }
        p
    }
}

/// Everything measured on a single (q, r, k) solve.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub row: ReportRow,
    pub breakdown: EnergyErrorBreakdown,
    pub l2_velocity: f64,
    pub l2_displacement: f64,
    /// |||u_DG||| and the stability-theorem bound it must not exceed.
    pub stability_lhs: f64,
    pub stability_rhs: f64,
    pub condition_estimate: f64,
}

fn integer_divisions(total: f64, step: f64, what: &str) -> Result<usize, DgError> {
    let ratio = total / step;
    let n = ratio.round();
    if n < 1.0 || (ratio - n).abs() > 1e-9 * ratio.max(1.0) {
        return Err(DgError::Config(format!(
            "{what} = {step} does not divide {total} into whole steps"
        )));
    }
    Ok(n as usize)
}

/// One solve of the full pipeline at (q, r, k), h defaulting to k.
pub fn run_single(
    problem: &Problem,
    q: usize,
    r: usize,
    k: f64,
    h: Option<f64>,
    options: &AdvanceOptions,
) -> Result<RunOutput, DgError> {
    let h = h.unwrap_or(k);
    let n_slabs = integer_divisions(problem.t_final, k, "k")?;
    let n_cells = integer_divisions(1.0, h, "h")?;
    let system = problem.build_system(n_cells, r)?;
    let mesh = TimeMesh::uniform(problem.t_final, n_slabs, q)?;
    if let Some(dir) = &options.dump_dir {
        mm::write_matrix(system.mass(), dir.join("mass.mtx"))?;
        mm::write_matrix(system.stiffness(), dir.join("stiffness.mtx"))?;
    }
    let trajectory = advance(problem, &system, &mesh, options)?;
    let breakdown = energy_error(&trajectory, problem, &system);
    let (l2_velocity, l2_displacement) = l2_endpoint_error(&trajectory, problem, &system);
    let stability_lhs = energy_norm(&trajectory, &system).norm();
    let stability_rhs = crate::energy::stability_bound(problem, &system, &mesh)?;
    let l2_error = match problem.id {
        ProblemId::Wave1d => l2_velocity,
        ProblemId::Elasto2d => l2_velocity + l2_displacement,
    };
    Ok(RunOutput {
        row: ReportRow {
            problem: problem.id,
            q,
            r,
            k,
            h,
            energy_error: breakdown.norm(),
            energy_rate: None,
            l2_error,
            l2_rate: None,
        },
        breakdown,
        l2_velocity,
        l2_displacement,
        stability_lhs,
        stability_rhs,
        condition_estimate: trajectory.condition_estimate,
    })
}

/// Study outcome: the report plus any per-run failures (the sweep continues
/// past failed cells; their rows carry NaN errors).
#[derive(Debug, Clone, Default)]
pub struct StudyOutcome {
    pub report: ConvergenceReport,
    pub failures: Vec<String>,
}

pub fn run_study(config: &StudyConfig) -> Result<StudyOutcome, DgError> {
    config.validate()?;
    let problem = config.problem_instance();
    let mut outcome = StudyOutcome::default();
    for &q in &config.qs {
        let r = config.r_rule.spatial_degree(q);
        for &k in &config.levels {
            match run_single(
                &problem,
                q,
                r,
                k,
                config.h_override,
                &AdvanceOptions::default(),
            ) {
                Ok(run) => outcome.report.rows.push(run.row),
                Err(err) => {
                    outcome.failures.push(format!("q={q} r={r} k={k}: {err}"));
                    outcome.report.rows.push(ReportRow {
                        problem: problem.id,
                        q,
                        r,
                        k,
                        h: config.h_override.unwrap_or(k),
                        energy_error: f64::NAN,
                        energy_rate: None,
                        l2_error: f64::NAN,
                        l2_rate: None,
                    });
                }
            }
        }
    }
    outcome.report.compute_rates()?;
    if let Some(path) = &config.out {
        write_csv(&outcome.report, path)?;
    }
    Ok(outcome)
}

fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.5e}")
    }
}

fn fmt_rate(r: Option<f64>) -> String {
    r.map(fmt_num).unwrap_or_default()
}

/// Serialize a report (6 significant digits, scientific notation; rate cells
/// empty on the first level of each q-group).
pub fn csv_string(report: &ConvergenceReport) -> String {
    let mut out = String::from("problem,q,r,k,h,energy_error,energy_rate,l2_error,l2_rate\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            row.problem,
            row.q,
            row.r,
            fmt_num(row.k),
            fmt_num(row.h),
            fmt_num(row.energy_error),
            fmt_rate(row.energy_rate),
            fmt_num(row.l2_error),
            fmt_rate(row.l2_rate),
        ));
    }
    out
}

pub fn write_csv(report: &ConvergenceReport, path: impl AsRef<Path>) -> Result<(), DgError> {
    if let Some(parent) = path.as_ref().parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, csv_string(report))?;
    Ok(())
}

fn parse_field<T: FromStr>(field: &str, what: &str) -> Result<T, DgError> {
    field
        .trim()
        .parse::<T>()
        .map_err(|_| DgError::Config(format!("bad {what} field '{field}' in CSV")))
}

fn parse_opt(field: &str, what: &str) -> Result<Option<f64>, DgError> {
    let t = field.trim();
    if t.is_empty() {
        Ok(None)
    } else {
        parse_field::<f64>(t, what).map(Some)
    }
}

/// Parse a CSV produced by [`csv_string`].
pub fn parse_csv(text: &str) -> Result<ConvergenceReport, DgError> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if idx == 0 || line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(DgError::Config(format!(
                "expected 9 CSV fields, got {} on line {}",
                fields.len(),
                idx + 1
            )));
        }
        rows.push(ReportRow {
            problem: fields[0].trim().parse()?,
            q: parse_field(fields[1], "q")?,
            r: parse_field(fields[2], "r")?,
            k: parse_field(fields[3], "k")?,
            h: parse_field(fields[4], "h")?,
            energy_error: parse_field(fields[5], "energy_error")?,
            energy_rate: parse_opt(fields[6], "energy_rate")?,
            l2_error: parse_field(fields[7], "l2_error")?,
            l2_rate: parse_opt(fields[8], "l2_rate")?,
        });
    }
    Ok(ConvergenceReport { rows })
}

/// How much of a golden row is trusted for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Trust {
    /// error and rate columns both hold
    #[default]
    Both,
    /// the printed error is suspect; check it only to order of magnitude and
    /// trust the rate column
    RateOnly,
}

/// A transcribed reference-table row.
#[derive(Debug, Clone)]
pub struct GoldenRow {
    pub q: usize,
    pub k: f64,
    pub energy_error: f64,
    pub energy_rate: Option<f64>,
    pub l2_error: f64,
    pub l2_rate: Option<f64>,
    pub trust: Trust,
}

/// Load a golden table (CSV with header
/// `q,k,energy_error,energy_rate,l2_error,l2_rate,trust`; `#` comments).
pub fn load_golden(path: impl AsRef<Path>) -> Result<Vec<GoldenRow>, DgError> {
    parse_golden(&fs::read_to_string(path)?)
}

pub fn parse_golden(text: &str) -> Result<Vec<GoldenRow>, DgError> {
    let mut rows = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("q,") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(DgError::Config(format!(
                "expected 7 golden fields, got {} in '{line}'",
                fields.len()
            )));
        }
        let trust = match fields[6].trim() {
            "both" => Trust::Both,
            "rate" => Trust::RateOnly,
            other => {
                return Err(DgError::Config(format!("unknown trust marker '{other}'")));
            }
        };
        rows.push(GoldenRow {
            q: parse_field(fields[0], "q")?,
            k: parse_field(fields[1], "k")?,
            energy_error: parse_field(fields[2], "energy_error")?,
            energy_rate: parse_opt(fields[3], "energy_rate")?,
            l2_error: parse_field(fields[4], "l2_error")?,
            l2_rate: parse_opt(fields[5], "l2_rate")?,
            trust,
        });
    }
    Ok(rows)
}

/// Result of checking one report row against its golden partner.
#[derive(Debug, Clone)]
pub struct RowCheck {
    pub q: usize,
    pub k: f64,
    pub pass: bool,
    pub detail: String,
}

fn check_error(name: &str, got: f64, want: f64, tol: f64, trust: Trust) -> Option<String> {
    let rel = (got - want).abs() / want.abs();
    match trust {
        Trust::Both if rel > tol => Some(format!(
            "{name} {got:.4e} vs {want:.4e} (rel {rel:.2e} > {tol:.2e})"
        )),
        Trust::RateOnly if !(want.abs() / 10.0..=want.abs() * 10.0).contains(&got.abs()) => Some(
            format!("{name} {got:.4e} not within 10x of suspect value {want:.4e}"),
        ),
        _ => None,
    }
}

fn check_rate(name: &str, got: Option<f64>, want: Option<f64>, tol: f64) -> Option<String> {
    match (got, want) {
        (Some(g), Some(w)) if (g - w).abs() > tol => {
            Some(format!("{name} {g:.4} vs {w:.4} (|diff| > {tol})"))
        }
        _ => None,
    }
}

/// Compare every report row against the golden table. Rows are matched by
/// (q, k); a report row without a golden partner is a key-mismatch error.
pub fn compare_golden(
    report: &ConvergenceReport,
    golden: &[GoldenRow],
    tol_error: f64,
    tol_rate: f64,
) -> Result<Vec<RowCheck>, DgError> {
    let mut checks = Vec::new();
    for row in &report.rows {
        let g = golden
            .iter()
            .find(|g| g.q == row.q && (g.k - row.k).abs() <= 1e-9 * g.k)
            .ok_or_else(|| {
                DgError::Config(format!(
                    "no golden row for q={} k={} — key mismatch",
                    row.q, row.k
                ))
            })?;
        let mut problems: Vec<String> = Vec::new();
        problems.extend(check_error(
            "energy",
            row.energy_error,
            g.energy_error,
            tol_error,
            g.trust,
        ));
        problems.extend(check_error(
            "l2",
            row.l2_error,
            g.l2_error,
            tol_error,
            g.trust,
        ));
        problems.extend(check_rate(
            "energy_rate",
            row.energy_rate,
            g.energy_rate,
            tol_rate,
        ));
        problems.extend(check_rate("l2_rate", row.l2_rate, g.l2_rate, tol_rate));
        checks.push(RowCheck {
            q: row.q,
            k: row.k,
            pass: problems.is_empty(),
            detail: if problems.is_empty() {
                "ok".to_string()
            } else {
                problems.join("; ")
            },
        });
    }
    Ok(checks)
}

/// Convenience: study plus golden comparison, as the CLI drives it.
pub fn run_study_with_golden(
    config: &StudyConfig,
    golden_path: Option<&Path>,
    tol_error: f64,
    tol_rate: f64,
) -> Result<(StudyOutcome, Option<Vec<RowCheck>>), DgError> {
    let outcome = run_study(config)?;
    let checks = match golden_path {
        Some(path) => {
            let golden = load_golden(path)?;
            Some(compare_golden(
                &outcome.report,
                &golden,
                tol_error,
                tol_rate,
            )?)
        }
        None => None,
    };
    Ok((outcome, checks))
}
