//! Boundary-value-preserving L² projection and its integrated companion.
//!
//! A function w = Σ b_i L_i on an interval is projected to degree q by
//! keeping b_0..b_{q-1} and collapsing the tail onto L_q:
//!
//!   𝒫^q w = Σ_{i<q} b_i L_i + (Σ_{i≥q} b_i) L_q,
//!
//! which matches w at the right endpoint and leaves the defect orthogonal to
//! polynomials of degree q-1. The integrated projector anchors at the left
//! endpoint and integrates the degree-(q-1) projection of the derivative:
//!
//!   Π^q u(t) = u(a) + ∫_a^t 𝒫^{q-1} u̇.
//!
//! Both operators act on Legendre coefficient series and are exact on the
//! stored truncation; no extrapolation of the tail is attempted.

use nalgebra::DVector;

use crate::error::DgError;
use crate::legendre::{eval_legendre_jet, gauss_rule};

/// A function expanded in Legendre polynomials mapped onto `interval`:
/// Σ coeffs[i] · L̃_i(t). Coefficients are vectors so spatial DOF fields and
/// plain scalars share one representation.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreSeries {
    coeffs: Vec<DVector<f64>>,
    interval: (f64, f64),
}

impl LegendreSeries {
    pub fn new(coeffs: Vec<DVector<f64>>, interval: (f64, f64)) -> Result<Self, DgError> {
        if coeffs.is_empty() {
            return Err(DgError::InvalidArgument(
                "series needs at least one coefficient".into(),
            ));
        }
        if interval.1 <= interval.0 || interval.0.is_nan() || interval.1.is_nan() {
            return Err(DgError::InvalidArgument(
                "series interval must be nondegenerate".into(),
            ));
        }
        let dim = coeffs[0].len();
        if coeffs.iter().any(|c| c.len() != dim) {
            return Err(DgError::DimensionMismatch {
                expected: dim,
                got: coeffs.iter().map(|c| c.len()).find(|&l| l != dim).unwrap(),
                context: "series coefficient dimensions",
            });
        }
        Ok(Self { coeffs, interval })
    }

    pub fn from_scalars(coeffs: &[f64], interval: (f64, f64)) -> Result<Self, DgError> {
        Self::new(
            coeffs
                .iter()
                .map(|&c| DVector::from_element(1, c))
                .collect(),
            interval,
        )
    }

    pub fn coeffs(&self) -> &[DVector<f64>] {
        &self.coeffs
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    /// Truncation degree m.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value_dim(&self) -> usize {
        self.coeffs[0].len()
    }

    fn reference_coord(&self, t: f64) -> f64 {
        let (a, b) = self.interval;
        (2.0 * t - a - b) / (b - a)
    }

    pub fn eval(&self, t: f64) -> DVector<f64> {
        let x = self.reference_coord(t);
        let mut acc = DVector::zeros(self.value_dim());
        for (i, c) in self.coeffs.iter().enumerate() {
            let (v, _, _) = eval_legendre_jet(i, x);
            acc.axpy(v, c, 1.0);
        }
        acc
    }

    pub fn eval_deriv(&self, t: f64) -> DVector<f64> {
        let x = self.reference_coord(t);
        let (a, b) = self.interval;
        let scale = 2.0 / (b - a);
        let mut acc = DVector::zeros(self.value_dim());
        for (i, c) in self.coeffs.iter().enumerate() {
            let (_, d, _) = eval_legendre_jet(i, x);
            acc.axpy(d * scale, c, 1.0);
        }
        acc
    }

    /// Value at the left endpoint, Σ (-1)^i coeffs[i].
    pub fn left_value(&self) -> DVector<f64> {
        let mut acc = DVector::zeros(self.value_dim());
        for (i, c) in self.coeffs.iter().enumerate() {
            acc.axpy(if i % 2 == 0 { 1.0 } else { -1.0 }, c, 1.0);
        }
        acc
    }

    /// Value at the right endpoint, Σ coeffs[i].
    pub fn right_value(&self) -> DVector<f64> {
        let mut acc = DVector::zeros(self.value_dim());
        for c in &self.coeffs {
            acc += c;
        }
        acc
    }

    /// Coefficients of the derivative with respect to the reference variable
    /// ξ ∈ (-1, 1): b_i = (2i+1) (a_{i+1} + a_{i+3} + ...).
    pub(crate) fn reference_derivative_coeffs(&self) -> Vec<DVector<f64>> {
        let m = self.degree();
        if m == 0 {
            return vec![DVector::zeros(self.value_dim())];
        }
        let mut out = Vec::with_capacity(m);
        for i in 0..m {
            let mut sum = DVector::zeros(self.value_dim());
            let mut j = i + 1;
            while j <= m {
                sum += &self.coeffs[j];
                j += 2;
            }
            sum *= (2 * i + 1) as f64;
            out.push(sum);
        }
        out
    }

    /// Derivative as a series on the same interval (exact Legendre relation,
    /// scaled by 2/(b-a)).
    pub fn derivative(&self) -> LegendreSeries {
        let (a, b) = self.interval;
        let scale = 2.0 / (b - a);
        let mut coeffs = self.reference_derivative_coeffs();
        for c in &mut coeffs {
            *c *= scale;
        }
        LegendreSeries {
            coeffs,
            interval: self.interval,
        }
    }

    /// Re-expand on a subinterval by quadrature. Exact when the series is the
    /// polynomial it stores (which is always the case here: the truncation is
    /// the function).
    pub fn restricted_to(&self, target: (f64, f64)) -> Result<LegendreSeries, DgError> {
        if target.1 <= target.0 || target.0.is_nan() || target.1.is_nan() {
            return Err(DgError::InvalidArgument(
                "target interval must be nondegenerate".into(),
            ));
        }
        let m = self.degree();
        let rule = gauss_rule(m + 1).expect("positive point count");
        let mid = 0.5 * (target.0 + target.1);
        let half = 0.5 * (target.1 - target.0);
        let samples: Vec<DVector<f64>> = rule
            .nodes
            .iter()
            .map(|&x| self.eval(mid + half * x))
            .collect();
        let mut coeffs = Vec::with_capacity(m + 1);
        for i in 0..=m {
            let mut acc = DVector::zeros(self.value_dim());
            for ((&x, &w), s) in rule.nodes.iter().zip(&rule.weights).zip(&samples) {
                let (v, _, _) = eval_legendre_jet(i, x);
                acc.axpy(w * v, s, 1.0);
            }
            acc *= (2 * i + 1) as f64 / 2.0;
            coeffs.push(acc);
        }
        LegendreSeries::new(coeffs, target)
    }
}

/// Result of a projection: a polynomial of degree ≤ q in the mapped Legendre
/// basis of `interval`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedPoly {
    coeffs: Vec<DVector<f64>>,
    interval: (f64, f64),
}

impl ProjectedPoly {
    pub fn coeffs(&self) -> &[DVector<f64>] {
        &self.coeffs
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// View as a series (for evaluation or re-projection).
    pub fn as_series(&self) -> LegendreSeries {
        LegendreSeries {
            coeffs: self.coeffs.clone(),
            interval: self.interval,
        }
    }

    pub fn eval(&self, t: f64) -> DVector<f64> {
        self.as_series().eval(t)
    }

    pub fn eval_deriv(&self, t: f64) -> DVector<f64> {
        self.as_series().eval_deriv(t)
    }
}

/// Boundary-value-preserving L² projection to degree q: keeps the leading
/// coefficients and moves the tail mass onto L_q.
pub fn project_p(series: &LegendreSeries, q: usize) -> ProjectedPoly {
    let dim = series.value_dim();
    let mut coeffs = vec![DVector::zeros(dim); q + 1];
    for (i, c) in series.coeffs().iter().enumerate() {
        if i < q {
            coeffs[i] = c.clone();
        } else {
            coeffs[q] += c;
        }
    }
    ProjectedPoly {
        coeffs,
        interval: series.interval(),
    }
}

/// Integrated projection Π^q u = u(a) + ∫_a^t 𝒫^{q-1} u̇, for q ≥ 2.
///
/// The derivative series is computed by the exact Legendre differentiation
/// relation; the antiderivative uses ∫ L_i = (L_{i+1} - L_{i-1})/(2i+1), so
/// the coefficient layout is exact for every q without special-casing the
/// small-q patterns.
pub fn project_pi(series: &LegendreSeries, q: usize) -> Result<ProjectedPoly, DgError> {
    if q < 2 {
        return Err(DgError::DegreeTooLow { q });
    }
    let dim = series.value_dim();
    // derivative with respect to the reference variable: the composition with
    // the affine map keeps coefficients unchanged, so the scaled-interval
    // operator reduces to the reference-interval one.
    let deriv = LegendreSeries {
        coeffs: series.reference_derivative_coeffs(),
        interval: (-1.0, 1.0),
    };
    let p = project_p(&deriv, q - 1);
    let mut coeffs = vec![DVector::zeros(dim); q + 1];
    // ∫_{-1}^t L_0 = L_0 + L_1; ∫_{-1}^t L_i = (L_{i+1} - L_{i-1})/(2i+1)
    coeffs[0] += &p.coeffs[0];
    coeffs[1] += &p.coeffs[0];
    for (i, c) in p.coeffs.iter().enumerate().skip(1) {
        let factor = 1.0 / (2 * i + 1) as f64;
        coeffs[i + 1].axpy(factor, c, 1.0);
        coeffs[i - 1].axpy(-factor, c, 1.0);
    }
    coeffs[0] += series.left_value();
    Ok(ProjectedPoly {
        coeffs,
        interval: series.interval(),
    })
}

/// Transplant a projected polynomial onto another interval. The Legendre
/// coefficients are invariant under the affine map; only the interval
/// metadata changes.
pub fn rescale(poly: &ProjectedPoly, target: (f64, f64)) -> Result<ProjectedPoly, DgError> {
    if target.1 <= target.0 || target.0.is_nan() || target.1.is_nan() {
        return Err(DgError::InvalidArgument(
            "target interval must be nondegenerate".into(),
        ));
    }
    Ok(ProjectedPoly {
        coeffs: poly.coeffs.clone(),
        interval: target,
    })
}
