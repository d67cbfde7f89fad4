//! Numerical laboratory for the Beurling transform, its commutators with
//! multiplication operators, and the two-dimensional Jacobian determinant.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`]: grids, sampled complex fields, spectral calculus, integration,
//!   Lebesgue norms and exponent bookkeeping.
//! * [`operators`]: the Beurling transform (torus multiplier and free-space
//!   quadrature), its adjoint, the commutator `[b,S]`, Jacobians and
//!   polarisation.
//! * [`dyadic`]: dyadic cubes, stopping-time sparse families, dual weights.
//! * [`norms`]: BMO / Hölder / `L^r` quantities of symbols, a Hardy-space
//!   proxy, and operator-norm lower bounds by ascent.
//! * [`lowerbound`]: oscillation witnesses and the random-sign pipeline that
//!   certifies lower bounds for `‖[b,S]‖_{L^p→L^q}`.

pub mod dyadic;
pub mod error;
pub mod field;
pub mod lowerbound;
pub mod norms;
pub mod operators;

pub use error::{LabError, Result};
pub use field::{ComplexField, ExponentTriple, GridSpec, VectorField2};
pub use num_complex::Complex64;
pub use operators::BeurlingBackend;
