use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Dimension of the underlying plane.
const DIM: f64 = 2.0;

/// Hölder conjugate `p′ = p/(p−1)`; `1′ = ∞` and `∞′ = 1`.
pub fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// Exponent bookkeeping for `[b,S]: L^p → L^q`.
///
/// `r` is finite for `p > q` (`1/r = 1/q − 1/p`), `∞` for `p = q`, and
/// `None` when `p < q`. `alpha` is the Hölder index `2(1/p − 1/q)` for `p < q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentTriple {
    pub p: f64,
    pub q: f64,
    pub p_dual: f64,
    pub q_dual: f64,
    pub r: Option<f64>,
    pub r_dual: Option<f64>,
    pub p_star: f64,
    pub alpha: Option<f64>,
}

impl ExponentTriple {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        for (name, v) in [("p", p), ("q", q)] {
            if !(v > 1.0 && v.is_finite()) {
                return Err(LabError::InvalidExponent(format!("{name} = {v} must lie in (1, ∞)")));
            }
        }
        let inv_r = 1.0 / q - 1.0 / p;
        let (r, r_dual) = if p > q {
            let r = 1.0 / inv_r;
            (Some(r), Some(conjugate(r)))
        } else if p == q {
            (Some(f64::INFINITY), Some(1.0))
        } else {
            (None, None)
        };
        let inv_p_star = (1.0 / p - 1.0 / DIM).max(0.0);
        let p_star = if inv_p_star == 0.0 { f64::INFINITY } else { 1.0 / inv_p_star };
        let alpha = (p < q).then(|| DIM * (1.0 / p - 1.0 / q));
        Ok(Self { p, q, p_dual: conjugate(p), q_dual: conjugate(q), r, r_dual, p_star, alpha })
    }

    /// `p < q ≤ p*`: the Hölder-continuous regime.
    pub fn is_holder_regime(&self) -> bool {
        self.p < self.q && self.q <= self.p_star
    }

    /// `q > p*`: only constants give bounded commutators.
    pub fn is_constant_regime(&self) -> bool {
        self.q > self.p_star
    }
}

/// Exponents of the commutator attached to the Jacobian problem at integrability
/// `p`: `[b,S]: L^{2p} → L^{(2p)′}`.
pub fn jacobian_commutator_exponents(p: f64) -> Result<(f64, f64)> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(LabError::InvalidExponent(format!("p = {p} must lie in [1, ∞)")));
    }
    Ok((2.0 * p, conjugate(2.0 * p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn four_two() {
        let e = ExponentTriple::new(4.0, 2.0).unwrap();
        assert_eq!(e.r, Some(4.0));
        assert!((e.r_dual.unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(e.q_dual, 2.0);
        assert_eq!(e.p_star, f64::INFINITY);
        assert_eq!(e.alpha, None);
    }

    #[test]
    fn diagonal_is_bmo_regime() {
        let e = ExponentTriple::new(2.0, 2.0).unwrap();
        assert_eq!(e.r, Some(f64::INFINITY));
    }

    #[test]
    fn jacobian_map_at_one() {
        assert_eq!(jacobian_commutator_exponents(1.0).unwrap(), (2.0, 2.0));
        let (a, b) = jacobian_commutator_exponents(3.0).unwrap();
        assert!(a > 2.0 && b < 2.0);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(ExponentTriple::new(1.0, 2.0).is_err());
        assert!(ExponentTriple::new(2.0, f64::INFINITY).is_err());
        assert!(ExponentTriple::new(f64::NAN, 2.0).is_err());
    }

    #[test]
    fn holder_and_constant_regimes() {
        let e = ExponentTriple::new(1.5, 4.0).unwrap();
        assert!((e.p_star - 6.0).abs() < 1e-12);
        assert!(e.is_holder_regime());
        let a = e.alpha.unwrap();
        assert!(a > 0.0 && a <= 1.0);
        let e = ExponentTriple::new(1.5, 12.0).unwrap();
        assert!(e.is_constant_regime());
        assert!(e.alpha.unwrap() > 1.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn split_identity(q in 1.0001f64..50.0, gap in 1e-3f64..50.0) {
            let p = q + gap;
            let e = ExponentTriple::new(p, q).unwrap();
            let rd = e.r_dual.unwrap();
            prop_assert!((rd / e.q_dual + rd / p - 1.0).abs() <= 1e-12);
            prop_assert!((1.0 / rd - 1.0 / e.q_dual - 1.0 / p).abs() <= 1e-12);
            prop_assert!((1.0 / p + 1.0 / e.p_dual - 1.0).abs() <= 1e-12);
        }
    }
}
