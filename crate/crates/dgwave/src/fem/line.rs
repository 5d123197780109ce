//! Conforming Lagrange elements of degree r on a uniform mesh of (0, 1).
//!
//! Element nodes are equispaced, so the global node set is the uniform grid
//! with spacing h/r. Homogeneous Dirichlet conditions are applied by dropping
//! the two boundary nodes from the DOF set.

use nalgebra::{DMatrix, DVector};

use crate::error::DgError;
use crate::fem::{Point, Value};
use crate::legendre::gauss_rule;

#[derive(Debug, Clone)]
pub struct LineSpace {
    n_cells: usize,
    degree: usize,
}

impl LineSpace {
    pub fn new(n_cells: usize, degree: usize) -> Result<Self, DgError> {
        if n_cells < 2 {
            return Err(DgError::InvalidArgument(
                "1D mesh needs at least 2 cells".into(),
            ));
        }
        if !(1..=5).contains(&degree) {
            return Err(DgError::UnsupportedElementDegree {
                r: degree,
                supported: "1..=5 in 1D",
            });
        }
        Ok(Self { n_cells, degree })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n_cells as f64
    }

    /// Total node count including boundary nodes.
    pub fn node_count(&self) -> usize {
        self.n_cells * self.degree + 1
    }

    pub fn interior_count(&self) -> usize {
        self.node_count() - 2
    }

    pub fn node_coord(&self, node: usize) -> f64 {
        node as f64 / (self.n_cells * self.degree) as f64
    }

    /// Reference Lagrange basis value at ξ ∈ [0, 1] for local node `a`.
    fn shape(&self, a: usize, xi: f64) -> f64 {
        let r = self.degree;
        let mut v = 1.0;
        let xa = a as f64 / r as f64;
        for b in 0..=r {
            if b != a {
                let xb = b as f64 / r as f64;
                v *= (xi - xb) / (xa - xb);
            }
        }
        v
    }

    fn shape_deriv(&self, a: usize, xi: f64) -> f64 {
        let r = self.degree;
        let xa = a as f64 / r as f64;
        let mut sum = 0.0;
        for c in 0..=r {
            if c == a {
                continue;
            }
            let xc = c as f64 / r as f64;
            let mut term = 1.0 / (xa - xc);
            for b in 0..=r {
                if b != a && b != c {
                    let xb = b as f64 / r as f64;
                    term *= (xi - xb) / (xa - xb);
                }
            }
            sum += term;
        }
        sum
    }

    /// Mass and stiffness over all nodes (no boundary elimination).
    pub fn assemble_unconstrained(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let r = self.degree;
        let h = self.h();
        let rule = gauss_rule(r + 2).expect("positive point count");
        let nl = r + 1;
        let mut mass_loc = DMatrix::<f64>::zeros(nl, nl);
        let mut stiff_loc = DMatrix::<f64>::zeros(nl, nl);
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let xi = 0.5 * (x + 1.0);
            let wr = 0.5 * w;
            let vals: Vec<f64> = (0..nl).map(|a| self.shape(a, xi)).collect();
            let ders: Vec<f64> = (0..nl).map(|a| self.shape_deriv(a, xi)).collect();
            for a in 0..nl {
                for b in 0..nl {
                    mass_loc[(a, b)] += wr * vals[a] * vals[b] * h;
                    stiff_loc[(a, b)] += wr * ders[a] * ders[b] / h;
                }
            }
        }
        let nn = self.node_count();
        let mut mass = DMatrix::zeros(nn, nn);
        let mut stiff = DMatrix::zeros(nn, nn);
        for c in 0..self.n_cells {
            let g0 = c * r;
            for a in 0..nl {
                for b in 0..nl {
                    mass[(g0 + a, g0 + b)] += mass_loc[(a, b)];
                    stiff[(g0 + a, g0 + b)] += stiff_loc[(a, b)];
                }
            }
        }
        (mass, stiff)
    }

    /// Restrict a full-node matrix to the interior DOF block.
    pub fn restrict(&self, full: &DMatrix<f64>) -> DMatrix<f64> {
        let nn = self.node_count();
        full.view((1, 1), (nn - 2, nn - 2)).into_owned()
    }

    pub fn interpolate(&self, f: impl Fn(Point) -> Value) -> DVector<f64> {
        DVector::from_fn(self.interior_count(), |i, _| {
            f([self.node_coord(i + 1), 0.0])[0]
        })
    }

    /// Load vector F_i = ∫ f ψ_i dx on interior DOFs, element-wise Gauss
    /// quadrature with r+3 points.
    pub fn load(&self, f: impl Fn(Point) -> Value) -> DVector<f64> {
        self.weighted_load(|x, a, xi| f(x)[0] * self.shape(a, xi))
    }

    /// Gradient load ∫ g ψ_i' dx (g is the derivative of the projected
    /// function), used to set up Ritz projections.
    pub fn gradient_load(&self, g: impl Fn(Point) -> Value) -> DVector<f64> {
        let h = self.h();
        self.weighted_load(|x, a, xi| g(x)[0] * self.shape_deriv(a, xi) / h)
    }

    fn weighted_load(&self, integrand: impl Fn(Point, usize, f64) -> f64) -> DVector<f64> {
        let r = self.degree;
        let h = self.h();
        let rule = gauss_rule(r + 3).expect("positive point count");
        let nn = self.node_count();
        let mut full = DVector::zeros(nn);
        for c in 0..self.n_cells {
            let x0 = c as f64 * h;
            for (&xq, &wq) in rule.nodes.iter().zip(&rule.weights) {
                let xi = 0.5 * (xq + 1.0);
                let w = 0.5 * wq * h;
                let x = [x0 + xi * h, 0.0];
                for a in 0..=r {
                    full[c * r + a] += w * integrand(x, a, xi);
                }
            }
        }
        full.rows(1, nn - 2).into_owned()
    }

    /// Continuous L²(0,1) norm of (exact - FE function); `coeffs` are interior
    /// DOF values, boundary values are zero.
    pub fn l2_error(&self, coeffs: &DVector<f64>, exact: impl Fn(Point) -> Value) -> f64 {
        let r = self.degree;
        let h = self.h();
        let rule = gauss_rule(r + 8).expect("positive point count");
        let nn = self.node_count();
        let mut full = DVector::zeros(nn);
        full.rows_mut(1, nn - 2).copy_from(coeffs);
        let mut acc = 0.0;
        for c in 0..self.n_cells {
            let x0 = c as f64 * h;
            for (&xq, &wq) in rule.nodes.iter().zip(&rule.weights) {
                let xi = 0.5 * (xq + 1.0);
                let w = 0.5 * wq * h;
                let x = [x0 + xi * h, 0.0];
                let mut fe = 0.0;
                for a in 0..=r {
                    fe += full[c * r + a] * self.shape(a, xi);
                }
                let e = exact(x)[0] - fe;
                acc += w * e * e;
            }
        }
        acc.sqrt()
    }
}
