//! hp-version discontinuous-Galerkin-in-time discretization of second-order
//! hyperbolic systems.
//!
//! The solution is an independent polynomial of degree q_n ≥ 2 on each time
//! slab (t_{n-1}, t_n], coupled to the previous slab only through weakly
//! enforced jump terms, so the temporal degree is free slab by slab. Space is
//! discretized with conforming Lagrange elements (1D damped wave) or vector
//! P1/P2 triangles (2D linear elastodynamics); each slab then requires one
//! dense implicit solve of dimension d̂(q+1).
//!
//! Module map:
//! * [`legendre`] — polynomials, shifted slab bases, Gauss rules
//! * [`projection`] — boundary-value-preserving L² projector and the
//!   integrated projector on Legendre series
//! * [`fem`] — spatial assembly producing the semi-discrete system
//! * [`problems`] — manufactured-solution benchmark registry
//! * [`slab`] — per-slab algebraic systems, the slab march and the global
//!   bilinear form
//! * [`energy`] — energy-norm breakdown, endpoint L² errors, rates
//! * [`study`] — study sweeps, CSV emission, golden-table comparison
//!
//! The examples directory exercises each capability end to end; `cargo run
//! --release -- study ...` drives full table reproductions from the command
//! line.

pub mod energy;
pub mod error;
pub mod fem;
pub mod legendre;
mod linalg;
pub mod mm;
pub mod problems;
pub mod projection;
pub mod slab;
pub mod study;

pub use error::DgError;
