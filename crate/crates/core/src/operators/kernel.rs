use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// A kernel `K(x,y) = scale · (−1/(π(x−y)²))` with its claimed size and
/// non-degeneracy constants `c_K`, `c₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub scale: f64,
    pub c_upper: f64,
    pub c_lower: f64,
}

impl KernelSpec {
    pub fn beurling() -> Self {
        Self::scaled_beurling(1.0)
    }

    /// `scale · K` with both constants equal to `|scale|/π`.
    pub fn scaled_beurling(scale: f64) -> Self {
        let c = scale.abs() / PI;
        Self { scale, c_upper: c, c_lower: c }
    }

    pub fn value(&self, x: Complex64, y: Complex64) -> Complex64 {
        let w = x - y;
        -self.scale / (PI * w * w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelBoundsReport {
    pub trials: usize,
    /// min and max of `|K(x,y)|·|x−y|²` over the samples
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub size_bound_holds: bool,
    pub nondegenerate: bool,
}

const SLACK: f64 = 1e-12;

/// Samples random centres `y` and scales `r`, places `x` on the circle of
/// radius `r` about `y`, and records `|K(x,y)|·|x−y|²`.
pub fn kernel_bounds_check(spec: &KernelSpec, trials: usize, seed: u64) -> KernelBoundsReport {
    let trials = trials.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for _ in 0..trials {
        let y = Complex64::new(rng.random_range(-100.0..100.0), rng.random_range(-100.0..100.0));
        let r = 10f64.powf(rng.random_range(-6.0..6.0));
        let theta = rng.random_range(0.0..2.0 * PI);
        let x = y + Complex64::from_polar(r, theta);
        let ratio = spec.value(x, y).norm() * (x - y).norm_sqr();
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    KernelBoundsReport {
        trials,
        min_ratio: lo,
        max_ratio: hi,
        size_bound_holds: hi <= spec.c_upper * (1.0 + SLACK),
        nondegenerate: spec.c_lower > 0.0 && lo >= spec.c_lower * (1.0 - SLACK),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beurling_attains_both_bounds() {
        let rep = kernel_bounds_check(&KernelSpec::beurling(), 10_000, 3);
        assert!((rep.min_ratio - 1.0 / PI).abs() <= 1e-15);
        assert!((rep.max_ratio - 1.0 / PI).abs() <= 1e-15);
        assert!(rep.size_bound_holds && rep.nondegenerate);
    }

    #[test]
    fn scaled_kernel() {
        let rep = kernel_bounds_check(&KernelSpec::scaled_beurling(2.0), 1000, 4);
        assert!((rep.min_ratio - 2.0 / PI).abs() <= 1e-15);
        assert!((rep.max_ratio - 2.0 / PI).abs() <= 1e-15);
    }

    #[test]
    fn zero_kernel_is_degenerate() {
        let spec = KernelSpec { scale: 0.0, c_upper: 1.0 / PI, c_lower: 1.0 / PI };
        let rep = kernel_bounds_check(&spec, 100, 5);
        assert_eq!(rep.max_ratio, 0.0);
        assert!(rep.size_bound_holds);
        assert!(!rep.nondegenerate);
    }
}
