use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dyadic::{centered_ladder, mean_limit_constant};
use crate::error::{LabError, Result};
use crate::field::{lp_norm, ComplexField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LrDistance {
    /// the constant `c = lim ⟨b⟩_Q` along centred squares
    pub c: Complex64,
    /// `‖b − c‖_r`
    pub dist: f64,
}

/// Distance in `L^r` from `b` to the constant it tends to at infinity.
pub fn distance_to_constants_lr(b: &ComplexField, r: f64) -> Result<LrDistance> {
    if b.grid().periodic() {
        return Err(LabError::InvalidGrid("distance to constants needs a bounded grid".into()));
    }
    if !(r > 1.0 && r.is_finite()) {
        return Err(LabError::InvalidExponent(format!("r = {r} must lie in (1, ∞)")));
    }
    let c = mean_limit_constant(b, &centered_ladder(b.grid()))?.value;
    let dist = lp_norm(&b.map(|z| z - c), r)?;
    Ok(LrDistance { c, dist })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GridSpec;
    use std::f64::consts::PI;

    #[test]
    fn constant_symbol() {
        let g = GridSpec::centered(32, 4.0).unwrap();
        let d = distance_to_constants_lr(&ComplexField::constant(g, Complex64::new(5.0, 0.0)), 3.0).unwrap();
        assert_eq!(d.c, Complex64::new(5.0, 0.0));
        assert_eq!(d.dist, 0.0);
    }

    #[test]
    fn bump_plus_three() {
        let g = GridSpec::centered(256, 20.0).unwrap();
        let bump = ComplexField::from_real_fn(g, |x, y| (-(x * x + y * y)).exp());
        let shifted = bump.map(|z| z + 3.0);
        let d = distance_to_constants_lr(&shifted, 4.0).unwrap();
        assert!((d.c - 3.0).norm() < 1e-10);
        let exact = (PI / 4.0).powf(0.25);
        assert!((d.dist - exact).abs() < 1e-8);
        assert!((d.dist - lp_norm(&bump, 4.0).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn extrapolated_constant_beats_other_constants() {
        let g = GridSpec::centered(256, 32.0).unwrap();
        let b = ComplexField::from_real_fn(g, |x, y| 2.0 + (-(x * x + 2.0 * y * y)).exp());
        let d = distance_to_constants_lr(&b, 2.5).unwrap();
        for dc in [0.05, -0.05, 0.2, -0.2, -2.0] {
            let other = lp_norm(&b.map(|z| z - d.c - dc), 2.5).unwrap();
            assert!(d.dist <= other + 1e-12);
        }
    }

    #[test]
    fn rejects_torus_and_bad_exponent() {
        let t = GridSpec::torus(16, 1.0).unwrap();
        assert!(distance_to_constants_lr(&ComplexField::zeros(t), 2.0).is_err());
        let g = GridSpec::centered(16, 1.0).unwrap();
        assert!(distance_to_constants_lr(&ComplexField::zeros(g), 1.0).is_err());
    }
}
