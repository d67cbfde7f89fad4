//! The Beurling transform, its adjoint and commutators, Jacobians.

mod beurling;
mod jacobian;
mod kernel;
pub(crate) mod quadrature;

pub use beurling::{
    beurling, beurling_adjoint, beurling_symbol, commutator, commutator_adjoint, BeurlingBackend,
    Commutator,
};
pub(crate) use beurling::BlockCommutator;
pub use jacobian::{jacobian, jacobian_complex, polarize};
pub use kernel::{kernel_bounds_check, KernelBoundsReport, KernelSpec};
