//! Per-slab implicit solves for the DG-in-time discretization of
//! M̃ü + 2γM̃u̇ + (γ²M̃+K̃)u = F.
//!
//! On each slab the trial/test space is spanned by the shifted Legendre basis
//! φ^1..φ^{q+1}; testing the slab weak form with Φ_m^j = e_m φ^j yields the
//! D×D system A z = b with D = d̂(q+1),
//!
//!   A = M̃ ⊗ (M¹ + M⁴ + 2γ M²) + (γ²M̃+K̃) ⊗ (M³ + M⁵),
//!
//! where M¹..M⁵ are the temporal matrices built from (φ̈,φ̇), (φ̇,φ̇), (φ,φ̇)
//! inner products and the start-of-slab endpoint outer products. The slab
//! consumes the previous slab's exit values (displacement and velocity at
//! t_{n-1}^-) through the right-hand side; slabs are otherwise independent,
//! which is what makes arbitrary per-slab degrees possible.
//!
//! The system is solved with dense LU and partial pivoting. The scheme is
//! written in nodal variables: conjugating by M̃^{1/2} recovers the
//! mass-orthonormal form, so the discrete solution is identical while no
//! matrix square root is ever formed.

use std::path::PathBuf;

use nalgebra::{DMatrix, DVector};

use crate::error::DgError;
use crate::fem::SemiDiscreteSystem;
use crate::legendre::{gauss_rule, SlabBasis};
use crate::linalg::{condition_estimate, kron};
use crate::mm;
use crate::problems::Problem;

/// Relative residual bound checked after every slab solve.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Condition estimate beyond which a slab system is rejected.
pub const CONDITION_LIMIT: f64 = 1e14;

/// Partition of (0, T] into slabs with a temporal degree per slab.
#[derive(Debug, Clone)]
pub struct TimeMesh {
    breakpoints: Vec<f64>,
    degrees: Vec<usize>,
}

impl TimeMesh {
    pub fn new(breakpoints: Vec<f64>, degrees: Vec<usize>) -> Result<Self, DgError> {
        if breakpoints.len() < 2 || breakpoints[0] != 0.0 {
            return Err(DgError::InvalidArgument(
                "time mesh needs breakpoints 0 = t_0 < ... < t_N".into(),
            ));
        }
        if degrees.len() + 1 != breakpoints.len() {
            return Err(DgError::DimensionMismatch {
                expected: breakpoints.len() - 1,
                got: degrees.len(),
                context: "per-slab degrees",
            });
        }
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(DgError::InvalidArgument(
                "time breakpoints must be strictly increasing".into(),
            ));
        }
        if let Some(&q) = degrees.iter().find(|&&q| q < 2) {
            return Err(DgError::DegreeTooLow { q });
        }
        Ok(Self {
            breakpoints,
            degrees,
        })
    }

    /// Uniform mesh with N slabs of length T/N, constant degree q.
    pub fn uniform(t_final: f64, n_slabs: usize, q: usize) -> Result<Self, DgError> {
        if n_slabs == 0 || t_final <= 0.0 {
            return Err(DgError::InvalidArgument(
                "need a positive final time and at least one slab".into(),
            ));
        }
        let breakpoints = (0..=n_slabs)
            .map(|n| t_final * n as f64 / n_slabs as f64)
            .collect();
        Self::new(breakpoints, vec![q; n_slabs])
    }

    pub fn n_slabs(&self) -> usize {
        self.degrees.len()
    }

    pub fn t_final(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    pub fn slab(&self, n: usize) -> (f64, f64) {
        (self.breakpoints[n], self.breakpoints[n + 1])
    }

    pub fn k(&self, n: usize) -> f64 {
        self.breakpoints[n + 1] - self.breakpoints[n]
    }

    pub fn q(&self, n: usize) -> usize {
        self.degrees[n]
    }
}

/// The five (q+1)×(q+1) temporal matrices of one slab.
#[derive(Debug, Clone)]
pub struct TimeMatrices {
    pub m1: DMatrix<f64>,
    pub m2: DMatrix<f64>,
    pub m3: DMatrix<f64>,
    pub m4: DMatrix<f64>,
    pub m5: DMatrix<f64>,
}

/// M¹_{lj} = (φ̈^j, φ̇^l), M²_{lj} = (φ̇^j, φ̇^l), M³_{lj} = (φ^j, φ̇^l) over
/// the slab; M⁴, M⁵ are the outer products of φ̇ resp. φ at t_{n-1}^+.
/// Quadrature uses q+2 Gauss points, exact for the ≤ 2q-degree integrands.
pub fn build_time_matrices(q: usize, k: f64) -> Result<TimeMatrices, DgError> {
    let basis = SlabBasis::new(q, 0.0, k)?;
    let d = q + 1;
    let rule = gauss_rule(q + 2)?;
    let mut m1 = DMatrix::zeros(d, d);
    let mut m2 = DMatrix::zeros(d, d);
    let mut m3 = DMatrix::zeros(d, d);
    for (t, w) in rule.mapped(0.0, k) {
        let vals = basis.eval_all(t, 0);
        let ders = basis.eval_all(t, 1);
        let dders = basis.eval_all(t, 2);
        for l in 0..d {
            for j in 0..d {
                m1[(l, j)] += w * dders[j] * ders[l];
                m2[(l, j)] += w * ders[j] * ders[l];
                m3[(l, j)] += w * vals[j] * ders[l];
            }
        }
    }
    let dplus = DVector::from_vec(basis.eval_all(0.0, 1));
    let vplus = DVector::from_vec(basis.eval_all(0.0, 0));
    let m4 = &dplus * dplus.transpose();
    let m5 = &vplus * vplus.transpose();
    Ok(TimeMatrices { m1, m2, m3, m4, m5 })
}

/// Exit values of a slab, consumed by the next slab as initial data.
#[derive(Debug, Clone)]
pub struct TrajectoryState {
    pub displacement: DVector<f64>,
    pub velocity: DVector<f64>,
}

/// Assembled local system A z = b for one slab.
#[derive(Debug, Clone)]
pub struct SlabSystem {
    pub matrix: DMatrix<f64>,
    pub rhs: DVector<f64>,
    pub q: usize,
    pub k: f64,
    pub t_start: f64,
    dof_count: usize,
}

/// Assemble the block operator for one slab (see module docs for the Kronecker
/// layout; z is grouped by spatial DOF, q+1 temporal coefficients each).
pub fn assemble_slab(
    system: &SemiDiscreteSystem,
    q: usize,
    k: f64,
    t_start: f64,
    state: &TrajectoryState,
    forcing: impl Fn(f64) -> DVector<f64>,
) -> Result<SlabSystem, DgError> {
    let tm = build_time_matrices(q, k)?;
    let matrix = slab_operator(system, &tm);
    let rhs = slab_rhs(system, q, k, t_start, state, forcing)?;
    Ok(SlabSystem {
        matrix,
        rhs,
        q,
        k,
        t_start,
        dof_count: system.dof_count(),
    })
}

fn slab_operator(system: &SemiDiscreteSystem, tm: &TimeMatrices) -> DMatrix<f64> {
    let gamma = system.gamma();
    let temporal_mass = &tm.m1 + &tm.m4 + &tm.m2 * (2.0 * gamma);
    let temporal_elliptic = &tm.m3 + &tm.m5;
    kron(system.mass(), &temporal_mass) + kron(system.elliptic(), &temporal_elliptic)
}

fn slab_rhs(
    system: &SemiDiscreteSystem,
    q: usize,
    k: f64,
    t_start: f64,
    state: &TrajectoryState,
    forcing: impl Fn(f64) -> DVector<f64>,
) -> Result<DVector<f64>, DgError> {
    let d = system.dof_count();
    if state.displacement.len() != d || state.velocity.len() != d {
        return Err(DgError::DimensionMismatch {
            expected: d,
            got: state.displacement.len(),
            context: "trajectory state",
        });
    }
    let basis = SlabBasis::new(q, t_start, k)?;
    let qn = q + 1;
    // b_m^j = ∫ F·Φ̇_m^j + (M̃ V⁻)_m φ̇^j(t⁺) + (W U⁻)_m φ^j(t⁺)
    let rule = gauss_rule(q + 4)?;
    let mut forcing_part = DMatrix::zeros(d, qn);
    for (t, w) in rule.mapped(t_start, t_start + k) {
        let load = forcing(t);
        if load.len() != d {
            return Err(DgError::DimensionMismatch {
                expected: d,
                got: load.len(),
                context: "forcing load vector",
            });
        }
        let ders = basis.eval_all(t, 1);
        for j in 0..qn {
            let scale = w * ders[j];
            let mut col = forcing_part.column_mut(j);
            col.axpy(scale, &load, 1.0);
        }
    }
    let mv = system.mass() * &state.velocity;
    let wu = system.elliptic() * &state.displacement;
    let dplus = basis.eval_all(t_start, 1);
    let vplus = basis.eval_all(t_start, 0);
    let mut rhs = DVector::zeros(d * qn);
    for m in 0..d {
        for j in 0..qn {
            rhs[m * qn + j] = forcing_part[(m, j)] + mv[m] * dplus[j] + wu[m] * vplus[j];
        }
    }
    Ok(rhs)
}

/// Coefficients α_m^j of the slab polynomial, one row per spatial DOF.
#[derive(Debug, Clone)]
pub struct SlabSolution {
    pub coeffs: DMatrix<f64>,
    pub q: usize,
    pub k: f64,
    pub t_start: f64,
}

impl SlabSolution {
    fn basis(&self) -> SlabBasis {
        SlabBasis {
            q: self.q,
            t_start: self.t_start,
            k: self.k,
        }
    }

    /// Evaluate the solution (order 0) or its time derivatives on the slab.
    pub fn eval(&self, t: f64, order: usize) -> DVector<f64> {
        let vals = DVector::from_vec(self.basis().eval_all(t, order));
        &self.coeffs * vals
    }

    /// Exit values at the right endpoint of the slab.
    pub fn end_state(&self) -> TrajectoryState {
        let t_end = self.t_start + self.k;
        TrajectoryState {
            displacement: self.eval(t_end, 0),
            velocity: self.eval(t_end, 1),
        }
    }
}

/// Outcome of factorizing one slab operator.
struct FactoredOperator {
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    matrix: DMatrix<f64>,
    condition: f64,
    q: usize,
    k: f64,
}

impl FactoredOperator {
    fn factor(system: &SemiDiscreteSystem, q: usize, k: f64) -> Result<Self, DgError> {
        let tm = build_time_matrices(q, k)?;
        let matrix = slab_operator(system, &tm);
        let lu = matrix.clone().lu();
        let condition = condition_estimate(&matrix, |b| lu.solve(b));
        if !condition.is_finite() || condition > CONDITION_LIMIT {
            return Err(DgError::IllConditioned { cond: condition });
        }
        Ok(Self {
            lu,
            matrix,
            condition,
            q,
            k,
        })
    }

    fn solve(&self, rhs: &DVector<f64>, t_start: f64, d: usize) -> Result<SlabSolution, DgError> {
        let z = self
            .lu
            .solve(rhs)
            .ok_or_else(|| DgError::SingularSystem("slab operator".into()))?;
        let residual = (&self.matrix * &z - rhs).norm();
        let scale = rhs.norm().max(f64::MIN_POSITIVE);
        if residual / scale > RESIDUAL_TOL {
            return Err(DgError::ResidualTooLarge {
                residual: residual / scale,
                tol: RESIDUAL_TOL,
            });
        }
        let qn = self.q + 1;
        let coeffs = DMatrix::from_fn(d, qn, |m, j| z[m * qn + j]);
        Ok(SlabSolution {
            coeffs,
            q: self.q,
            k: self.k,
            t_start,
        })
    }
}

/// Solve one assembled slab system by dense LU with partial pivoting, with a
/// backward-residual check and a condition estimate.
pub fn solve_slab(slab: &SlabSystem) -> Result<SlabSolution, DgError> {
    let lu = slab.matrix.clone().lu();
    let condition = condition_estimate(&slab.matrix, |b| lu.solve(b));
    if !condition.is_finite() || condition > CONDITION_LIMIT {
        return Err(DgError::IllConditioned { cond: condition });
    }
    let op = FactoredOperator {
        lu,
        matrix: slab.matrix.clone(),
        condition,
        q: slab.q,
        k: slab.k,
    };
    op.solve(&slab.rhs, slab.t_start, slab.dof_count)
}

/// A complete DG trajectory: initial data plus one polynomial per slab.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub initial: TrajectoryState,
    pub slabs: Vec<SlabSolution>,
    /// Largest condition estimate seen across the slab operators.
    pub condition_estimate: f64,
}

impl Trajectory {
    pub fn n_slabs(&self) -> usize {
        self.slabs.len()
    }

    pub fn t_final(&self) -> f64 {
        let last = self.slabs.last().expect("nonempty trajectory");
        last.t_start + last.k
    }

    /// Exit state at the final time t_N^-.
    pub fn final_state(&self) -> TrajectoryState {
        self.slabs.last().expect("nonempty trajectory").end_state()
    }
}

#[derive(Debug, Clone, Default)]
pub struct AdvanceOptions {
    /// Use Ritz-projected initial data instead of nodal interpolation
    /// (1D problem only).
    pub ritz_initial_data: bool,
    /// Dump per-slab A and b in MatrixMarket format into this directory.
    pub dump_dir: Option<PathBuf>,
}

/// Initial data vectors for a problem, nodal by default.
pub fn initial_state(
    problem: &Problem,
    system: &SemiDiscreteSystem,
    ritz: bool,
) -> Result<TrajectoryState, DgError> {
    if !ritz {
        return Ok(TrajectoryState {
            displacement: system.interpolate(|x| problem.initial_u(x)),
            velocity: system.interpolate(|x| problem.initial_v(x)),
        });
    }
    match system.space() {
        crate::fem::Space::Line(line) => {
            // u_0 ≡ 0 for the registered problems; project the velocity
            let grad_load = line.gradient_load(|x| [problem.initial_v_gradient(x)[0][0], 0.0]);
            Ok(TrajectoryState {
                displacement: system.interpolate(|x| problem.initial_u(x)),
                velocity: system.ritz_project(&grad_load)?,
            })
        }
        _ => Err(DgError::Config(
            "Ritz-projected initial data is only wired up for the 1D problem".into(),
        )),
    }
}

/// March the DG scheme over the time mesh. The factorization is reused while
/// consecutive slabs share (q, k); the slab loop itself is sequential because
/// each slab consumes the previous exit state.
pub fn advance(
    problem: &Problem,
    system: &SemiDiscreteSystem,
    mesh: &TimeMesh,
    options: &AdvanceOptions,
) -> Result<Trajectory, DgError> {
    let d = system.dof_count();
    let initial = initial_state(problem, system, options.ritz_initial_data)?;
    let mut state = initial.clone();
    let mut slabs = Vec::with_capacity(mesh.n_slabs());
    let mut op: Option<FactoredOperator> = None;
    let mut worst_condition: f64 = 0.0;
    for n in 0..mesh.n_slabs() {
        let (t0, _) = mesh.slab(n);
        let (q, k) = (mesh.q(n), mesh.k(n));
        let needs_refactor = match &op {
            Some(f) => f.q != q || f.k != k,
            None => true,
        };
        if needs_refactor {
            op = Some(FactoredOperator::factor(system, q, k)?);
        }
        let factored = op.as_ref().unwrap();
        worst_condition = worst_condition.max(factored.condition);
        let rhs = slab_rhs(system, q, k, t0, &state, |t| {
            system.assemble_load(|x| problem.forcing(x, t))
        })?;
        if let Some(dir) = &options.dump_dir {
            mm::write_matrix(&factored.matrix, dir.join(format!("slab_{n:03}_a.mtx")))?;
            mm::write_vector(&rhs, dir.join(format!("slab_{n:03}_b.mtx")))?;
        }
        let sol = factored.solve(&rhs, t0, d)?;
        state = sol.end_state();
        slabs.push(sol);
    }
    Ok(Trajectory {
        initial,
        slabs,
        condition_estimate: worst_condition,
    })
}

/// The global DG bilinear form 𝒜(u, v) evaluated on trajectories: slab bulk
/// integrals via the temporal matrices, jump coupling at interior breakpoints
/// and the weighted initial-value terms.
pub fn bilinear_form(
    system: &SemiDiscreteSystem,
    u: &Trajectory,
    v: &Trajectory,
) -> Result<f64, DgError> {
    if u.n_slabs() != v.n_slabs() {
        return Err(DgError::DimensionMismatch {
            expected: u.n_slabs(),
            got: v.n_slabs(),
            context: "trajectory slab counts",
        });
    }
    let gamma = system.gamma();
    let mut acc = 0.0;
    for (su, sv) in u.slabs.iter().zip(&v.slabs) {
        let tm = build_time_matrices(su.q, su.k)?;
        let temporal_mass = &tm.m1 + &tm.m2 * (2.0 * gamma);
        let mu = system.mass() * &su.coeffs;
        let wu = system.elliptic() * &su.coeffs;
        for l in 0..sv.q + 1 {
            let vcol = sv.coeffs.column(l);
            for j in 0..su.q + 1 {
                acc += temporal_mass[(l, j)] * vcol.dot(&mu.column(j));
                acc += tm.m3[(l, j)] * vcol.dot(&wu.column(j));
            }
        }
    }
    for n in 1..u.n_slabs() {
        let t_n = u.slabs[n].t_start;
        let ju_vel = u.slabs[n].eval(t_n, 1) - u.slabs[n - 1].eval(t_n, 1);
        let ju_disp = u.slabs[n].eval(t_n, 0) - u.slabs[n - 1].eval(t_n, 0);
        let vv = v.slabs[n].eval(t_n, 1);
        let vd = v.slabs[n].eval(t_n, 0);
        acc += (system.mass() * ju_vel).dot(&vv);
        acc += (system.elliptic() * ju_disp).dot(&vd);
    }
    let t0 = u.slabs[0].t_start;
    acc += (system.mass() * u.slabs[0].eval(t0, 1)).dot(&v.slabs[0].eval(t0, 1));
    acc += (system.elliptic() * u.slabs[0].eval(t0, 0)).dot(&v.slabs[0].eval(t0, 0));
    Ok(acc)
}
