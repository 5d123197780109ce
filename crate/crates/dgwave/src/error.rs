//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DgError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("temporal degree q = {q} is below the minimum of 2")]
    DegreeTooLow { q: usize },

    #[error("unsupported element degree r = {r} (supported: {supported})")]
    UnsupportedElementDegree { r: usize, supported: &'static str },

    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: &'static str,
    },

    #[error("Newton iteration for the {n}-point Gauss rule did not converge at root {index}")]
    QuadratureFailure { n: usize, index: usize },

    #[error("slab system is singular or ill-conditioned (condition estimate {cond:.3e})")]
    IllConditioned { cond: f64 },

    #[error("linear solve failed: {0}")]
    SingularSystem(String),

    #[error("slab solve residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    ResidualTooLarge { residual: f64, tol: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
