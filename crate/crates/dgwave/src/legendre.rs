//! Legendre polynomials, shifted slab bases and Gauss-Legendre quadrature.
//!
//! Legendre polynomials L_i on (-1, 1) satisfy the three-term recurrence
//! (i+1) L_{i+1}(t) = (2i+1) t L_i(t) - i L_{i-1}(t) with L_0 = 1, L_1 = t,
//! and are orthogonal with ∫ L_i² dt = 2/(2i+1). The time-stepping scheme
//! works in the basis φ^j(t) = L_{j-1} mapped affinely onto a slab
//! (t_{n-1}, t_{n-1}+k], so everything downstream reduces to evaluating
//! L_i and its first two derivatives.

use crate::error::DgError;

/// Evaluate the Legendre polynomial L_i at `t` by the three-term recurrence.
pub fn eval_legendre(i: usize, t: f64) -> f64 {
    let mut prev = 1.0;
    if i == 0 {
        return prev;
    }
    let mut curr = t;
    for n in 1..i {
        let next = ((2 * n + 1) as f64 * t * curr - n as f64 * prev) / (n + 1) as f64;
        prev = curr;
        curr = next;
    }
    curr
}

/// Evaluate (L_i, L_i', L_i'') at `t`.
///
/// Derivatives come from the differentiated recurrences
/// L'_{n+1} = L'_{n-1} + (2n+1) L_n and L''_{n+1} = L''_{n-1} + (2n+1) L'_n,
/// which are valid on the closed interval including the endpoints.
pub fn eval_legendre_jet(i: usize, t: f64) -> (f64, f64, f64) {
    if i == 0 {
        return (1.0, 0.0, 0.0);
    }
    // (value, first, second) for degrees n-1 and n
    let mut lo = (1.0, 0.0, 0.0);
    let mut hi = (t, 1.0, 0.0);
    for n in 1..i {
        let c = (2 * n + 1) as f64;
        let nf = n as f64;
        let v = (c * t * hi.0 - nf * lo.0) / (nf + 1.0);
        let d = lo.1 + c * hi.0;
        let dd = lo.2 + c * hi.1;
        lo = hi;
        hi = (v, d, dd);
    }
    hi
}

/// ∫_{-1}^{t} L_i(s) ds via the antiderivative identity
/// (L_{i+1}(t) - L_{i-1}(t)) / (2i+1); for i = 0 this is t + 1.
pub fn legendre_antiderivative(i: usize, t: f64) -> f64 {
    if i == 0 {
        t + 1.0
    } else {
        (eval_legendre(i + 1, t) - eval_legendre(i - 1, t)) / (2 * i + 1) as f64
    }
}

/// Gauss-Legendre rule on (-1, 1): n nodes, exact for degree ≤ 2n-1.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// ∫_{-1}^{1} f ≈ Σ w_i f(x_i).
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Nodes and weights mapped to (a, b).
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }
}

/// Gauss-Legendre nodes/weights by Newton iteration on L_n starting from
/// Chebyshev guesses. Nodes are the roots of L_n; weights 2/((1-x²) L'_n(x)²).
pub fn gauss_rule(n: usize) -> Result<QuadratureRule, DgError> {
    if n == 0 {
        return Err(DgError::InvalidArgument(
            "quadrature rule needs at least one point".into(),
        ));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n / 2;
    for i in 0..=half {
        if 2 * i + 1 == n {
            // odd rule: middle node is exactly zero
            nodes[i] = 0.0;
        } else if i < half {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            // the guess above enumerates roots from the right; index from the left
            x = -x;
            let mut converged = false;
            for _ in 0..100 {
                let (v, d, _) = eval_legendre_jet(n, x);
                let step = v / d;
                x -= step;
                if step.abs() <= 1e-15 {
                    // Newton residual = estimated distance to the root;
                    // the raw |L_n| scales with L'_n ~ n² near ±1
                    let (v2, d2, _) = eval_legendre_jet(n, x);
                    if (v2 / d2).abs() <= 1e-14 {
                        converged = true;
                        break;
                    }
                }
            }
            if !converged {
                return Err(DgError::QuadratureFailure { n, index: i });
            }
            nodes[i] = x;
        }
    }
    // mirror the left half onto the right, then compute all weights
    for i in 0..half {
        nodes[n - 1 - i] = -nodes[i];
    }
    for i in 0..n {
        let (_, d, _) = eval_legendre_jet(n, nodes[i]);
        weights[i] = 2.0 / ((1.0 - nodes[i] * nodes[i]) * d * d);
    }
    Ok(QuadratureRule { nodes, weights })
}

/// Temporal basis on one slab (t_start, t_start + k]: φ^j = L_{j-1} under the
/// affine map onto (-1, 1), for j = 1..=q+1.
///
/// φ^j(t_start + k) = 1 and φ^j(t_start) = (-1)^{j-1}; derivatives pick up the
/// chain-rule factor (2/k)^order.
#[derive(Debug, Clone, Copy)]
pub struct SlabBasis {
    pub q: usize,
    pub t_start: f64,
    pub k: f64,
}

impl SlabBasis {
    pub fn new(q: usize, t_start: f64, k: f64) -> Result<Self, DgError> {
        if q < 2 {
            return Err(DgError::DegreeTooLow { q });
        }
        if k <= 0.0 || k.is_nan() {
            return Err(DgError::InvalidArgument(
                "slab length must be positive".into(),
            ));
        }
        Ok(Self { q, t_start, k })
    }

    /// Map t to the reference coordinate in [-1, 1].
    pub fn reference_coord(&self, t: f64) -> f64 {
        2.0 * (t - self.t_start) / self.k - 1.0
    }

    /// Evaluate φ^j, φ̇^j or φ̈^j at `t` (order 0, 1, 2). Endpoint values are
    /// the one-sided limits from inside the slab.
    ///
    /// Panics if `j` is outside 1..=q+1 or `order` exceeds 2.
    pub fn eval(&self, j: usize, t: f64, order: usize) -> f64 {
        assert!(
            (1..=self.q + 1).contains(&j),
            "basis index {j} out of range 1..={}",
            self.q + 1
        );
        assert!(order <= 2, "only derivatives up to order 2 are provided");
        let x = self.reference_coord(t);
        let (v, d, dd) = eval_legendre_jet(j - 1, x);
        let scale = 2.0 / self.k;
        match order {
            0 => v,
            1 => d * scale,
            _ => dd * scale * scale,
        }
    }

    /// All q+1 values (order 0|1|2) at `t`, in basis order.
    pub fn eval_all(&self, t: f64, order: usize) -> Vec<f64> {
        (1..=self.q + 1).map(|j| self.eval(j, t, order)).collect()
    }
}
