//! Vector-valued P1/P2 triangles on a structured triangulation of the unit
//! square for linear elastodynamics.
//!
//! The square is cut into an n×n grid and every cell is split by the diagonal
//! from its lower-left to its upper-right corner. P2 nodes (vertices plus edge
//! midpoints) land exactly on the half-step lattice, so node bookkeeping is a
//! single uniform lattice of spacing 1/(n·r). Each node carries two DOFs.

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};

use crate::error::DgError;
use crate::fem::{Point, Value};
use crate::legendre::gauss_rule;

#[derive(Debug, Clone)]
pub struct TriSpace {
    n: usize,
    degree: usize,
}

/// Quadrature points (ξ, η, w) on the reference triangle (0,0)-(1,0)-(0,1),
/// exact for total degree `exact`, built by collapsing a Gauss tensor rule.
fn triangle_rule(exact: usize) -> Vec<(f64, f64, f64)> {
    let n1 = exact / 2 + 2;
    let gu = gauss_rule(n1).expect("positive point count");
    let gv = gauss_rule(n1).expect("positive point count");
    let mut pts = Vec::with_capacity(n1 * n1);
    for (&xu, &wu) in gu.nodes.iter().zip(&gu.weights) {
        let u = 0.5 * (xu + 1.0);
        for (&xv, &wv) in gv.nodes.iter().zip(&gv.weights) {
            let v = 0.5 * (xv + 1.0);
            pts.push((u, v * (1.0 - u), 0.25 * wu * wv * (1.0 - u)));
        }
    }
    pts
}

impl TriSpace {
    pub fn new(n: usize, degree: usize) -> Result<Self, DgError> {
        if n < 2 {
            return Err(DgError::InvalidArgument(
                "2D mesh needs at least a 2x2 grid".into(),
            ));
        }
        if !(1..=2).contains(&degree) {
            return Err(DgError::UnsupportedElementDegree {
                r: degree,
                supported: "1..=2 in 2D",
            });
        }
        Ok(Self { n, degree })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Lattice points per side (node grid is (m+1)×(m+1)).
    fn m(&self) -> usize {
        self.n * self.degree
    }

    pub fn node_count(&self) -> usize {
        (self.m() + 1) * (self.m() + 1)
    }

    fn node_index(&self, i: usize, j: usize) -> usize {
        j * (self.m() + 1) + i
    }

    fn is_boundary(&self, i: usize, j: usize) -> bool {
        let m = self.m();
        i == 0 || j == 0 || i == m || j == m
    }

    pub fn node_coord(&self, node: usize) -> Point {
        let m = self.m();
        let i = node % (m + 1);
        let j = node / (m + 1);
        [i as f64 / m as f64, j as f64 / m as f64]
    }

    /// Interior nodes in lattice order.
    pub fn interior_nodes(&self) -> Vec<usize> {
        let m = self.m();
        let mut out = Vec::new();
        for j in 0..=m {
            for i in 0..=m {
                if !self.is_boundary(i, j) {
                    out.push(self.node_index(i, j));
                }
            }
        }
        out
    }

    pub fn interior_count(&self) -> usize {
        (self.m() - 1) * (self.m() - 1)
    }

    /// Two DOFs per interior node.
    pub fn dof_count(&self) -> usize {
        2 * self.interior_count()
    }

    fn nodes_per_element(&self) -> usize {
        if self.degree == 1 {
            3
        } else {
            6
        }
    }

    /// Global lattice nodes of each triangle, plus the vertex coordinates.
    /// Triangles: lower (v00, v10, v11) and upper (v00, v11, v01) per cell.
    fn elements(&self) -> Vec<([usize; 6], [Point; 3])> {
        let r = self.degree;
        let mut out = Vec::with_capacity(2 * self.n * self.n);
        for cy in 0..self.n {
            for cx in 0..self.n {
                let corners = [(cx, cy), (cx + 1, cy), (cx + 1, cy + 1), (cx, cy + 1)];
                for tri in [[0usize, 1, 2], [0, 2, 3]] {
                    let vs = [corners[tri[0]], corners[tri[1]], corners[tri[2]]];
                    let mut nodes = [0usize; 6];
                    let mut coords = [[0.0; 2]; 3];
                    for (a, &(vx, vy)) in vs.iter().enumerate() {
                        nodes[a] = self.node_index(vx * r, vy * r);
                        coords[a] = [vx as f64 / self.n as f64, vy as f64 / self.n as f64];
                    }
                    if r == 2 {
                        // edge midpoints opposite the standard ordering:
                        // node 3 on edge (0,1), node 4 on (1,2), node 5 on (0,2)
                        let mids = [(0usize, 1usize), (1, 2), (0, 2)];
                        for (s, &(a, b)) in mids.iter().enumerate() {
                            let (ax, ay) = vs[a];
                            let (bx, by) = vs[b];
                            nodes[3 + s] = self.node_index(ax + bx, ay + by);
                        }
                    }
                    out.push((nodes, coords));
                }
            }
        }
        out
    }

    /// Shape values and reference gradients at (ξ, η).
    fn shapes(&self, xi: f64, eta: f64) -> (Vec<f64>, Vec<Vector2<f64>>) {
        let l0 = 1.0 - xi - eta;
        let l1 = xi;
        let l2 = eta;
        let g0 = Vector2::new(-1.0, -1.0);
        let g1 = Vector2::new(1.0, 0.0);
        let g2 = Vector2::new(0.0, 1.0);
        if self.degree == 1 {
            (vec![l0, l1, l2], vec![g0, g1, g2])
        } else {
            let vals = vec![
                l0 * (2.0 * l0 - 1.0),
                l1 * (2.0 * l1 - 1.0),
                l2 * (2.0 * l2 - 1.0),
                4.0 * l0 * l1,
                4.0 * l1 * l2,
                4.0 * l0 * l2,
            ];
            let grads = vec![
                g0 * (4.0 * l0 - 1.0),
                g1 * (4.0 * l1 - 1.0),
                g2 * (4.0 * l2 - 1.0),
                4.0 * (g0 * l1 + g1 * l0),
                4.0 * (g1 * l2 + g2 * l1),
                4.0 * (g0 * l2 + g2 * l0),
            ];
            (vals, grads)
        }
    }

    /// ρ-weighted vector mass and elastic stiffness over all nodes
    /// (no boundary elimination); DOF layout is 2·node + component.
    pub fn assemble_unconstrained(
        &self,
        lambda: f64,
        mu: f64,
        rho: f64,
    ) -> (DMatrix<f64>, DMatrix<f64>) {
        let nn = self.node_count();
        let nl = self.nodes_per_element();
        let mut mass = DMatrix::zeros(2 * nn, 2 * nn);
        let mut stiff = DMatrix::zeros(2 * nn, 2 * nn);
        let rule = triangle_rule(2 * self.degree);
        for (nodes, verts) in self.elements() {
            let jmat = Matrix2::from_columns(&[
                Vector2::new(verts[1][0] - verts[0][0], verts[1][1] - verts[0][1]),
                Vector2::new(verts[2][0] - verts[0][0], verts[2][1] - verts[0][1]),
            ]);
            let det = jmat.determinant();
            let inv_t = jmat
                .try_inverse()
                .expect("nondegenerate triangle")
                .transpose();
            for &(xi, eta, w) in &rule {
                let (vals, ref_grads) = self.shapes(xi, eta);
                let grads: Vec<Vector2<f64>> = ref_grads.iter().map(|g| inv_t * g).collect();
                let wj = w * det.abs();
                for a in 0..nl {
                    for b in 0..nl {
                        let ga = grads[a];
                        let gb = grads[b];
                        let gdot = ga.dot(&gb);
                        let mab = wj * rho * vals[a] * vals[b];
                        for ca in 0..2 {
                            let ia = 2 * nodes[a] + ca;
                            mass[(ia, 2 * nodes[b] + ca)] += mab;
                            for cb in 0..2 {
                                let ib = 2 * nodes[b] + cb;
                                // ε(ψ_a e_ca) : ε(ψ_b e_cb) and div·div terms
                                let eps =
                                    0.5 * (ga[cb] * gb[ca] + if ca == cb { gdot } else { 0.0 });
                                let div = ga[ca] * gb[cb];
                                stiff[(ia, ib)] += wj * (2.0 * mu * eps + lambda * div);
                            }
                        }
                    }
                }
            }
        }
        (mass, stiff)
    }

    /// Restrict a full matrix to the interior DOF block.
    pub fn restrict(&self, full: &DMatrix<f64>) -> DMatrix<f64> {
        let interior = self.interior_nodes();
        let nd = 2 * interior.len();
        let mut out = DMatrix::zeros(nd, nd);
        for (bi, &ni) in interior.iter().enumerate() {
            for (bj, &nj) in interior.iter().enumerate() {
                for ca in 0..2 {
                    for cb in 0..2 {
                        out[(2 * bi + ca, 2 * bj + cb)] = full[(2 * ni + ca, 2 * nj + cb)];
                    }
                }
            }
        }
        out
    }

    pub fn interpolate(&self, f: impl Fn(Point) -> Value) -> DVector<f64> {
        let interior = self.interior_nodes();
        let mut out = DVector::zeros(2 * interior.len());
        for (b, &node) in interior.iter().enumerate() {
            let v = f(self.node_coord(node));
            out[2 * b] = v[0];
            out[2 * b + 1] = v[1];
        }
        out
    }

    /// Load vector ∫ f · Ψ_i over interior DOFs.
    pub fn load(&self, f: impl Fn(Point) -> Value) -> DVector<f64> {
        let nn = self.node_count();
        let nl = self.nodes_per_element();
        let mut full = DVector::zeros(2 * nn);
        let rule = triangle_rule(12);
        for (nodes, verts) in self.elements() {
            let jmat = Matrix2::from_columns(&[
                Vector2::new(verts[1][0] - verts[0][0], verts[1][1] - verts[0][1]),
                Vector2::new(verts[2][0] - verts[0][0], verts[2][1] - verts[0][1]),
            ]);
            let det = jmat.determinant().abs();
            for &(xi, eta, w) in &rule {
                let (vals, _) = self.shapes(xi, eta);
                let x = [
                    verts[0][0] + jmat[(0, 0)] * xi + jmat[(0, 1)] * eta,
                    verts[0][1] + jmat[(1, 0)] * xi + jmat[(1, 1)] * eta,
                ];
                let fv = f(x);
                let wj = w * det;
                for a in 0..nl {
                    full[2 * nodes[a]] += wj * fv[0] * vals[a];
                    full[2 * nodes[a] + 1] += wj * fv[1] * vals[a];
                }
            }
        }
        let interior = self.interior_nodes();
        let mut out = DVector::zeros(2 * interior.len());
        for (b, &node) in interior.iter().enumerate() {
            out[2 * b] = full[2 * node];
            out[2 * b + 1] = full[2 * node + 1];
        }
        out
    }

    /// Continuous L²(Ω) norm of (exact - FE field), both components.
    pub fn l2_error(&self, coeffs: &DVector<f64>, exact: impl Fn(Point) -> Value) -> f64 {
        let interior = self.interior_nodes();
        let mut full = DVector::zeros(2 * self.node_count());
        for (b, &node) in interior.iter().enumerate() {
            full[2 * node] = coeffs[2 * b];
            full[2 * node + 1] = coeffs[2 * b + 1];
        }
        let nl = self.nodes_per_element();
        let rule = triangle_rule(16);
        let mut acc = 0.0;
        for (nodes, verts) in self.elements() {
            let jmat = Matrix2::from_columns(&[
                Vector2::new(verts[1][0] - verts[0][0], verts[1][1] - verts[0][1]),
                Vector2::new(verts[2][0] - verts[0][0], verts[2][1] - verts[0][1]),
            ]);
            let det = jmat.determinant().abs();
            for &(xi, eta, w) in &rule {
                let (vals, _) = self.shapes(xi, eta);
                let x = [
                    verts[0][0] + jmat[(0, 0)] * xi + jmat[(0, 1)] * eta,
                    verts[0][1] + jmat[(1, 0)] * xi + jmat[(1, 1)] * eta,
                ];
                let ex = exact(x);
                let mut fe = [0.0, 0.0];
                for a in 0..nl {
                    fe[0] += full[2 * nodes[a]] * vals[a];
                    fe[1] += full[2 * nodes[a] + 1] * vals[a];
                }
                acc += w * det * ((ex[0] - fe[0]).powi(2) + (ex[1] - fe[1]).powi(2));
            }
        }
        acc.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_rule_integrates_area_and_monomials() {
        let rule = triangle_rule(4);
        let area: f64 = rule.iter().map(|&(_, _, w)| w).sum();
        assert!((area - 0.5).abs() < 1e-14);
        // ∫ ξ over the reference triangle = 1/6, ∫ ξη = 1/24
        let ix: f64 = rule.iter().map(|&(x, _, w)| w * x).sum();
        assert!((ix - 1.0 / 6.0).abs() < 1e-14);
        let ixy: f64 = rule.iter().map(|&(x, y, w)| w * x * y).sum();
        assert!((ixy - 1.0 / 24.0).abs() < 1e-14);
    }

    #[test]
    fn rigid_translation_in_stiffness_kernel() {
        for r in 1..=2 {
            let space = TriSpace::new(3, r).unwrap();
            let (_, k) = space.assemble_unconstrained(1.3, 0.7, 1.0);
            let nn = space.node_count();
            // translation (1, 0) and (0, 1)
            for comp in 0..2 {
                let t = DVector::from_fn(2 * nn, |i, _| if i % 2 == comp { 1.0 } else { 0.0 });
                let res = &k * &t;
                assert!(res.amax() < 1e-12, "r={r} comp={comp}: {}", res.amax());
            }
        }
    }

    #[test]
    fn total_mass_is_density_times_area() {
        for r in 1..=2 {
            let space = TriSpace::new(4, r).unwrap();
            let rho = 2.5;
            let (m, _) = space.assemble_unconstrained(1.0, 1.0, rho);
            let nn = space.node_count();
            let ones_x = DVector::from_fn(2 * nn, |i, _| if i % 2 == 0 { 1.0 } else { 0.0 });
            let total = ones_x.dot(&(&m * &ones_x));
            assert!((total - rho).abs() < 1e-12, "r={r}: {total}");
        }
    }

    #[test]
    fn constrained_stiffness_is_positive_definite() {
        let space = TriSpace::new(8, 1).unwrap();
        let (_, k) = space.assemble_unconstrained(1.0, 1.0, 1.0);
        let ki = space.restrict(&k);
        assert!(ki.clone().cholesky().is_some());
    }

    #[test]
    fn interpolation_hits_lattice_values() {
        let space = TriSpace::new(2, 2).unwrap();
        let v = space.interpolate(|x| [x[0] * x[1], x[0] - x[1]]);
        let interior = space.interior_nodes();
        for (b, &node) in interior.iter().enumerate() {
            let p = space.node_coord(node);
            assert!((v[2 * b] - p[0] * p[1]).abs() < 1e-15);
            assert!((v[2 * b + 1] - (p[0] - p[1])).abs() < 1e-15);
        }
    }
}
