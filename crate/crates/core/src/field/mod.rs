//! Sampled fields on uniform square grids and the calculus on them.

mod exponents;
mod fft;
mod grid;
pub mod io;
mod random;
mod sampled;
mod spectral;
mod stencil;

pub use exponents::{conjugate, jacobian_commutator_exponents, ExponentTriple};
pub(crate) use fft::Fft2;
pub use grid::GridSpec;
pub use random::{band_limited, band_limited_map};
pub use sampled::{integrate, lp_norm, ComplexField, VectorField2};
pub(crate) use sampled::lp_norm_slice;
pub use spectral::{
    apply_multiplier, d, d_bar, partial_x1, partial_x2, solve_dbar, Wavevector, MEAN_TOLERANCE,
};
pub(crate) use spectral::{check_mean_zero as spectral_check_mean_zero, require_periodic};
