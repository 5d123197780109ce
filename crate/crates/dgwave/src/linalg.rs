//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

/// Kronecker product a ⊗ b with row/column blocks indexed by a's entries.
pub fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = DMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == 0.0 {
                continue;
            }
            for p in 0..br {
                for q in 0..bc {
                    out[(i * br + p, j * bc + q)] = aij * b[(p, q)];
                }
            }
        }
    }
    out
}

/// 1-norm (maximum absolute column sum).
pub fn one_norm(a: &DMatrix<f64>) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Lower bound for the 1-norm condition number κ₁(A) = ‖A‖₁‖A⁻¹‖₁, using a
/// fixed set of probe vectors against the supplied solver. Deterministic and
/// cheap; a large value reliably flags ill-conditioning.
pub fn condition_estimate(
    a: &DMatrix<f64>,
    solve: impl Fn(&DVector<f64>) -> Option<DVector<f64>>,
) -> f64 {
    let n = a.nrows();
    let norm_a = one_norm(a);
    let mut probes: Vec<DVector<f64>> = Vec::new();
    probes.push(DVector::from_element(n, 1.0 / n as f64));
    probes.push(DVector::from_fn(n, |i, _| {
        (if i % 2 == 0 { 1.0 } else { -1.0 }) / n as f64
    }));
    // deterministic pseudo-random signs
    let mut state = 0x9e3779b97f4a7c15u64;
    probes.push(DVector::from_fn(n, |_, _| {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (if state >> 63 == 0 { 1.0 } else { -1.0 }) / n as f64
    }));
    let mut inv_norm: f64 = 0.0;
    for p in &probes {
        match solve(p) {
            Some(x) => {
                let num: f64 = x.iter().map(|v| v.abs()).sum();
                let den: f64 = p.iter().map(|v| v.abs()).sum();
                inv_norm = inv_norm.max(num / den);
                // one refinement step in the direction of the largest entry
                // of the solution (Hager-style)
                let jmax = x.iter().enumerate().fold((0usize, 0.0f64), |acc, (i, v)| {
                    if v.abs() > acc.1 {
                        (i, v.abs())
                    } else {
                        acc
                    }
                });
                let mut e = DVector::zeros(n);
                e[jmax.0] = 1.0;
                if let Some(y) = solve(&e) {
                    let ny: f64 = y.iter().map(|v| v.abs()).sum();
                    inv_norm = inv_norm.max(ny);
                }
            }
            None => return f64::INFINITY,
        }
    }
    norm_a * inv_norm
}
