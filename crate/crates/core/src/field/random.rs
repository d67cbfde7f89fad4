use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{ComplexField, GridSpec, VectorField2};
use crate::error::{LabError, Result};

/// Real trigonometric polynomial `Σ a_k cos(k·x) + b_k sin(k·x)` over the
/// wavevectors `2πk/L` with `0 < max(|k₁|, |k₂|) ≤ kmax`, Gaussian coefficients
/// scaled by `1/|k|²`. Mean zero and periodic on the box.
pub fn band_limited(grid: &GridSpec, kmax: usize, seed: u64) -> Result<ComplexField> {
    if kmax == 0 || 2 * kmax >= grid.n() {
        return Err(LabError::InvalidParameter(format!(
            "band limit {kmax} must lie in 1..{} for n = {}",
            grid.n() / 2,
            grid.n()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k0 = 2.0 * PI / grid.length();
    let k = kmax as i64;
    let mut modes = Vec::new();
    for k2 in 0..=k {
        for k1 in -k..=k {
            // one of each ±k pair
            if k2 == 0 && k1 <= 0 {
                continue;
            }
            let weight = 1.0 / (k1 * k1 + k2 * k2) as f64;
            let a: f64 = StandardNormal.sample(&mut rng);
            let b: f64 = StandardNormal.sample(&mut rng);
            modes.push((k0 * k1 as f64, k0 * k2 as f64, weight * a, weight * b));
        }
    }
    let origin = grid.origin();
    Ok(ComplexField::from_fn(*grid, |z| {
        let x = z - origin;
        let value = modes
            .iter()
            .map(|&(w1, w2, a, b)| {
                let phase = w1 * x.re + w2 * x.im;
                a * phase.cos() + b * phase.sin()
            })
            .sum::<f64>();
        Complex64::new(value, 0.0)
    }))
}

/// A map `u = (u₁, u₂)` with independent band-limited components.
pub fn band_limited_map(grid: &GridSpec, kmax: usize, seed: u64) -> Result<VectorField2> {
    let u1 = band_limited(grid, kmax, seed.wrapping_mul(2))?;
    let u2 = band_limited(grid, kmax, seed.wrapping_mul(2).wrapping_add(1))?;
    VectorField2::new(*grid, u1.real_part(), u2.real_part())
}
