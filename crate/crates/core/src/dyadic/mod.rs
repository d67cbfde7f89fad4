//! Dyadic cubes, stopping-time sparse families and their weights.

mod cube;
mod ladder;
mod sparse;
mod weights;

pub use cube::{block, mean_and_oscillation, CellSquare, DyadicCube};
pub(crate) use cube::centered_values;
pub use ladder::{centered_ladder, mean_limit_constant, MeanLimit};
pub use sparse::{sparse_dominate, verify_domination, SparseCube, SparseFamily, SparseInvariants, DOMINATION_CONSTANT};
pub use weights::{dual_weights, sparse_lp_ratio};
