//! The six experiment suites.

pub mod identities;
pub mod jacobian;
pub mod lowerbound;
pub mod regimes;
pub mod scaling;
pub mod sparse;

use jaclab::field::band_limited;
use jaclab::{Complex64, ComplexField, GridSpec};

/// Complex band-limited field with independent real and imaginary parts.
pub(crate) fn complex_band_limited(grid: &GridSpec, kmax: usize, seed: u64) -> jaclab::Result<ComplexField> {
    let re = band_limited(grid, kmax, seed)?;
    let im = band_limited(grid, kmax, seed ^ 0x9e37_79b9_7f4a_7c15)?;
    re.zip_with(&im, |a, b| Complex64::new(a.re, b.re))
}

pub(crate) fn sup_diff(a: &ComplexField, b: &ComplexField) -> f64 {
    a.samples().iter().zip(b.samples()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
