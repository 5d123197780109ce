//! Spatial discretization: conforming FEM producing the semi-discrete system
//!
//!   M̃ ü + 2γ M̃ u̇ + (γ² M̃ + K̃) u = F(t)
//!
//! on interior DOFs (homogeneous Dirichlet rows and columns eliminated).

pub mod line;
pub mod tri;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::DgError;
pub use line::LineSpace;
pub use tri::TriSpace;

/// Spatial point; 1D problems use the first component.
pub type Point = [f64; 2];
/// Field value; scalar problems use the first component.
pub type Value = [f64; 2];

/// The concrete spatial discretization behind a semi-discrete system.
#[derive(Debug, Clone)]
pub enum Space {
    Line(LineSpace),
    Tri(TriSpace),
}

impl Space {
    pub fn components(&self) -> usize {
        match self {
            Space::Line(_) => 1,
            Space::Tri(_) => 2,
        }
    }

    pub fn h(&self) -> f64 {
        match self {
            Space::Line(s) => s.h(),
            Space::Tri(s) => s.h(),
        }
    }

    pub fn interpolate(&self, f: impl Fn(Point) -> Value) -> DVector<f64> {
        match self {
            Space::Line(s) => s.interpolate(f),
            Space::Tri(s) => s.interpolate(f),
        }
    }

    pub fn load(&self, f: impl Fn(Point) -> Value) -> DVector<f64> {
        match self {
            Space::Line(s) => s.load(f),
            Space::Tri(s) => s.load(f),
        }
    }

    pub fn l2_error(&self, coeffs: &DVector<f64>, exact: impl Fn(Point) -> Value) -> f64 {
        match self {
            Space::Line(s) => s.l2_error(coeffs, exact),
            Space::Tri(s) => s.l2_error(coeffs, exact),
        }
    }
}

/// Mass/stiffness pair with damping parameter for the second-order system.
/// Matrices live on interior DOFs only; M̃ is symmetric positive definite.
#[derive(Debug, Clone)]
pub struct SemiDiscreteSystem {
    mass: DMatrix<f64>,
    stiffness: DMatrix<f64>,
    elliptic: DMatrix<f64>,
    gamma: f64,
    space: Space,
}

impl SemiDiscreteSystem {
    pub fn new(
        space: Space,
        mass: DMatrix<f64>,
        stiffness: DMatrix<f64>,
        gamma: f64,
    ) -> Result<Self, DgError> {
        if mass.nrows() != stiffness.nrows() || mass.ncols() != stiffness.ncols() {
            return Err(DgError::DimensionMismatch {
                expected: mass.nrows(),
                got: stiffness.nrows(),
                context: "mass vs stiffness",
            });
        }
        if gamma < 0.0 {
            return Err(DgError::InvalidArgument(
                "damping must be nonnegative".into(),
            ));
        }
        let elliptic = &stiffness + &mass * (gamma * gamma);
        Ok(Self {
            mass,
            stiffness,
            elliptic,
            gamma,
            space,
        })
    }

    pub fn dof_count(&self) -> usize {
        self.mass.nrows()
    }

    pub fn mass(&self) -> &DMatrix<f64> {
        &self.mass
    }

    pub fn stiffness(&self) -> &DMatrix<f64> {
        &self.stiffness
    }

    /// The displacement weight γ²M̃ + K̃ (the elliptic operator of the damped
    /// system written in nodal variables).
    pub fn elliptic(&self) -> &DMatrix<f64> {
        &self.elliptic
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn interpolate(&self, f: impl Fn(Point) -> Value) -> DVector<f64> {
        self.space.interpolate(f)
    }

    pub fn assemble_load(&self, f: impl Fn(Point) -> Value) -> DVector<f64> {
        self.space.load(f)
    }

    /// Solve K̃ x = load (Ritz projection given the gradient load vector).
    pub fn ritz_project(&self, load: &DVector<f64>) -> Result<DVector<f64>, DgError> {
        if load.len() != self.dof_count() {
            return Err(DgError::DimensionMismatch {
                expected: self.dof_count(),
                got: load.len(),
                context: "ritz load vector",
            });
        }
        self.stiffness
            .clone()
            .cholesky()
            .map(|ch| ch.solve(load))
            .or_else(|| self.stiffness.clone().lu().solve(load))
            .ok_or_else(|| DgError::SingularSystem("stiffness matrix".into()))
    }

    /// Cholesky factor of M̃ (fails only if assembly produced a non-SPD mass,
    /// which signals a bug).
    pub fn mass_cholesky(&self) -> Result<Cholesky<f64, Dyn>, DgError> {
        self.mass
            .clone()
            .cholesky()
            .ok_or_else(|| DgError::SingularSystem("mass matrix is not SPD".into()))
    }

    /// x ↦ xᵀ M̃ x.
    pub fn mass_sq(&self, x: &DVector<f64>) -> f64 {
        x.dot(&(&self.mass * x))
    }

    /// x ↦ xᵀ (γ²M̃+K̃) x.
    pub fn elliptic_sq(&self, x: &DVector<f64>) -> f64 {
        x.dot(&(&self.elliptic * x))
    }
}

/// Degree-r Lagrange discretization of the 1D damped wave system on (0, 1).
pub fn assemble_1d(n_cells: usize, r: usize, gamma: f64) -> Result<SemiDiscreteSystem, DgError> {
    let space = LineSpace::new(n_cells, r)?;
    let (m, k) = space.assemble_unconstrained();
    let mass = space.restrict(&m);
    let stiff = space.restrict(&k);
    SemiDiscreteSystem::new(Space::Line(space), mass, stiff, gamma)
}

/// P1/P2 discretization of linear elastodynamics on the structured
/// triangulation of the unit square.
pub fn assemble_2d_elasticity(
    n: usize,
    r: usize,
    lambda: f64,
    mu: f64,
    rho: f64,
    gamma: f64,
) -> Result<SemiDiscreteSystem, DgError> {
    let space = TriSpace::new(n, r)?;
    let (m, k) = space.assemble_unconstrained(lambda, mu, rho);
    let mass = space.restrict(&m);
    let stiff = space.restrict(&k);
    SemiDiscreteSystem::new(Space::Tri(space), mass, stiff, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_is_spd_and_stiffness_symmetric() {
        for (n, r) in [(2usize, 1usize), (4, 2), (3, 4)] {
            let sys = assemble_1d(n, r, 1.0).unwrap();
            assert!(sys.mass_cholesky().is_ok(), "n={n} r={r}");
            let asym = (sys.stiffness() - sys.stiffness().transpose()).amax();
            assert!(asym < 1e-12);
        }
        let sys = assemble_2d_elasticity(3, 2, 1.0, 1.0, 1.0, 0.1).unwrap();
        assert!(sys.mass_cholesky().is_ok());
        let asym = (sys.stiffness() - sys.stiffness().transpose()).amax();
        assert!(asym < 1e-12);
    }

    #[test]
    fn laplacian_eigenvalues_match_dirichlet_modes() {
        // eigenvalues of M̃⁻¹K̃ approximate (jπ)² for the lowest modes;
        // computed from the symmetrized pencil L⁻¹ K̃ L⁻ᵀ with M̃ = LLᵀ
        let sys = assemble_1d(4, 2, 0.0).unwrap();
        let chol = sys.mass_cholesky().unwrap();
        let lmat = chol.l();
        let half = lmat
            .clone()
            .solve_lower_triangular(sys.stiffness())
            .unwrap();
        let sym = lmat
            .solve_lower_triangular(&half.transpose())
            .unwrap()
            .transpose();
        let mut eig: Vec<f64> = sym.symmetric_eigen().eigenvalues.iter().copied().collect();
        eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for j in 1..=2usize {
            let exact = (j as f64 * std::f64::consts::PI).powi(2);
            let rel = (eig[j - 1] - exact).abs() / exact;
            assert!(rel < 0.02, "mode {j}: {} vs {exact}", eig[j - 1]);
        }
    }

    #[test]
    fn ritz_projection_reproduces_fe_functions() {
        let sys = assemble_1d(6, 2, 1.0).unwrap();
        // a function already in the FE space: its stiffness action is the load
        let coeffs = sys.interpolate(|x| [x[0] * (1.0 - x[0]), 0.0]);
        let load = sys.stiffness() * &coeffs;
        let proj = sys.ritz_project(&load).unwrap();
        assert!((proj - &coeffs).amax() < 1e-11);
        // zero load gives the zero vector
        let zero = sys.ritz_project(&DVector::zeros(sys.dof_count())).unwrap();
        assert!(zero.amax() < 1e-14);
    }

    #[test]
    fn ritz_projection_rate_for_sine() {
        // ‖𝒫_h u - u‖_{L²} = O(h²) for r = 1
        let pi = std::f64::consts::PI;
        let mut errors = Vec::new();
        for n in [8usize, 16, 32, 64] {
            let sys = assemble_1d(n, 1, 1.0).unwrap();
            let space = match sys.space() {
                Space::Line(s) => s.clone(),
                _ => unreachable!(),
            };
            // gradient load ∫ u' ψ' with u = sin(πx)
            let load = space.gradient_load(|x| [pi * (pi * x[0]).cos(), 0.0]);
            let proj = sys.ritz_project(&load).unwrap();
            errors.push(sys.space().l2_error(&proj, |x| [(pi * x[0]).sin(), 0.0]));
        }
        for w in errors.windows(2) {
            let rate = (w[0] / w[1]).log2();
            assert!((rate - 2.0).abs() < 0.1, "rate {rate}");
        }
    }

    #[test]
    fn interpolation_rates_1d() {
        // L² interpolation error of sin(πx) decays as h^{r+1}
        let pi = std::f64::consts::PI;
        for r in 1..=4usize {
            let mut errors = Vec::new();
            for n in [4usize, 8, 16] {
                let sys = assemble_1d(n, r, 1.0).unwrap();
                let v = sys.interpolate(|x| [(pi * x[0]).sin(), 0.0]);
                errors.push(sys.space().l2_error(&v, |x| [(pi * x[0]).sin(), 0.0]));
            }
            for w in errors.windows(2) {
                let rate = (w[0] / w[1]).log2();
                assert!((rate - (r as f64 + 1.0)).abs() < 0.15, "r={r}: rate {rate}");
            }
        }
    }
}
