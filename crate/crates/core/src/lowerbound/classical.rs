use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::witness::{crw_rhs, witness_norm_factor, witnesses_on};
use crate::dyadic::{mean_and_oscillation, CellSquare};
use crate::error::{LabError, Result};
use crate::field::{conjugate, ComplexField};
use crate::norms::cube_family;
use crate::operators::BeurlingBackend;

/// A certified lower bound `|Σᵢ ∫ gᵢ [b,S] fᵢ| / Σᵢ ‖fᵢ‖_p ‖gᵢ‖_{q′}` for
/// `‖[b,S]‖_{L^p→L^q}`, from the best square of the cube family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessBound {
    pub value: f64,
    pub square: CellSquare,
    /// `∫_Q |b − ⟨b⟩_Q|` on the winning square
    pub oscillation_integral: f64,
    /// `Σᵢ ‖fᵢ‖_p ‖gᵢ‖_{q′}` on the winning square
    pub norm_factor: f64,
    /// relative gap between the two sides of the witness identity there
    pub identity_residual: f64,
}

/// Scans the cube family with the exact witness identity and evaluates the
/// commutator pairing on the winner, so the reported value is a realised ratio.
pub fn witness_lower(b: &ComplexField, p: f64, q: f64, backend: BeurlingBackend) -> Result<WitnessBound> {
    for s in [p, q] {
        if !(s > 1.0 && s.is_finite()) {
            return Err(LabError::InvalidExponent(format!("exponent {s} must lie in (1, ∞)")));
        }
    }
    let grid = *b.grid();
    if grid.periodic() || !backend.is_quadrature() {
        return Err(LabError::BackendGridMismatch { backend: backend.name(), grid: grid.kind() });
    }
    let q_dual = conjugate(q);
    let family = cube_family(&grid);
    let mut factors = BTreeMap::new();
    for sq in &family {
        if let std::collections::btree_map::Entry::Vacant(e) = factors.entry(sq.side) {
            e.insert(witness_norm_factor(sq.side, grid.spacing(), p, q_dual)?);
        }
    }
    let mut best: Option<(f64, CellSquare)> = None;
    for sq in &family {
        let (_, osc) = mean_and_oscillation(b, sq)?;
        let ratio = osc * sq.area(&grid) / factors[&sq.side];
        if best.is_none_or(|(v, _)| ratio > v) {
            best = Some((ratio, *sq));
        }
    }
    let (_, square) = best.expect("nonempty family");
    let w = witnesses_on(b, square)?;
    let rhs = crw_rhs(b, &w, backend);
    let norm_factor = factors[&square.side];
    let identity_residual = if w.lhs == 0.0 { rhs.norm() } else { (w.lhs - rhs).norm() / w.lhs };
    Ok(WitnessBound {
        value: rhs.norm() / norm_factor,
        square,
        oscillation_integral: w.lhs,
        norm_factor,
        identity_residual,
    })
}

/// Lower bound for `‖[b,S]‖_{L^p→L^p}` from mean oscillations.
pub fn bmo_lower(b: &ComplexField, p: f64, backend: BeurlingBackend) -> Result<WitnessBound> {
    witness_lower(b, p, p, backend)
}

/// Lower bound for `‖[b,S]‖_{L^p→L^q}`, `p < q`. The witness norms scale like
/// `|Q|·r^α` with `α = 2(1/p − 1/q)`, so this tracks the Hölder-`α` oscillation.
pub fn holder_lower(b: &ComplexField, p: f64, q: f64, backend: BeurlingBackend) -> Result<WitnessBound> {
    if !(p < q) {
        return Err(LabError::ExponentMismatch(format!("Hölder regime needs p < q, got p = {p}, q = {q}")));
    }
    witness_lower(b, p, q, backend)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GridSpec;
    use crate::norms::{opnorm_lower, SearchBudget};
    use num_complex::Complex64;

    const FFT: BeurlingBackend = BeurlingBackend::QuadratureFft;

    #[test]
    fn constant_is_zero() {
        let g = GridSpec::centered(16, 1.0).unwrap();
        let b = ComplexField::constant(g, Complex64::new(1.0, 2.0));
        assert_eq!(bmo_lower(&b, 2.0, FFT).unwrap().value, 0.0);
        assert_eq!(holder_lower(&b, 1.5, 3.0, FFT).unwrap().value, 0.0);
    }

    #[test]
    fn step_bound_below_search() {
        let g = GridSpec::centered(32, 2.0).unwrap();
        let b = ComplexField::from_real_fn(g, |x, _| if x > 0.0 { 1.0 } else { 0.0 });
        let lb = bmo_lower(&b, 2.0, FFT).unwrap();
        assert!(lb.identity_residual < 1e-10);
        // ‖fᵢ‖_p ‖gᵢ‖_{p′} ≤ (1 + π√2)²|Q| for each i
        let c = 1.0 / (3.0 * (1.0 + std::f64::consts::PI * 2f64.sqrt()).powi(2));
        assert!(lb.value >= c * 0.5, "{lb:?}");
        let search = opnorm_lower(&b, 2.0, 2.0, FFT, &SearchBudget::default()).unwrap();
        assert!(lb.value <= search.value, "{} vs {}", lb.value, search.value);
    }

    #[test]
    fn holder_regime_checks_exponents() {
        let g = GridSpec::centered(16, 1.0).unwrap();
        let b = ComplexField::zeros(g);
        assert!(matches!(holder_lower(&b, 3.0, 3.0, FFT), Err(LabError::ExponentMismatch(_))));
        assert!(bmo_lower(&b, 1.0, FFT).is_err());
        let t = GridSpec::torus(16, 1.0).unwrap();
        assert!(bmo_lower(&ComplexField::zeros(t), 2.0, BeurlingBackend::Spectral).is_err());
    }

    #[test]
    fn matched_holder_power_is_grid_stable() {
        // p = 2, q = 4 gives α = 1/2
        let vals: Vec<f64> = [32, 64]
            .iter()
            .map(|&n| {
                let g = GridSpec::centered(n, 2.0).unwrap();
                let b = ComplexField::from_real_fn(g, |x, y| (x * x + y * y).powf(0.25));
                holder_lower(&b, 2.0, 4.0, FFT).unwrap().value
            })
            .collect();
        assert!((vals[0] - vals[1]).abs() < 0.1 * vals[1], "{vals:?}");
    }
}
