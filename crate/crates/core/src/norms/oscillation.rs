use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dyadic::{mean_and_oscillation, CellSquare};
use crate::error::{LabError, Result};
use crate::field::{ComplexField, GridSpec};

/// Dyadic squares of side at least 2 cells together with their copies shifted
/// by half a side in either or both directions (those that fit in the grid).
pub fn cube_family(grid: &GridSpec) -> Vec<CellSquare> {
    let n = grid.n();
    let mut out = Vec::new();
    let mut side = n;
    while side >= 2 {
        let step = side / 2;
        for y0 in (0..=n - side).step_by(step) {
            for x0 in (0..=n - side).step_by(step) {
                out.push(CellSquare::new(x0, y0, side));
            }
        }
        side /= 2;
    }
    out
}

/// Largest weighted oscillation over a family of squares and where it occurs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillationSup {
    pub value: f64,
    pub square: CellSquare,
}

/// `sup_Q weight(Q)·⨍_Q |b − ⟨b⟩_Q|` over `family`; ties go to the first square.
pub fn oscillation_sup(
    b: &ComplexField,
    family: &[CellSquare],
    weight: impl Fn(&CellSquare) -> f64 + Sync,
) -> Result<OscillationSup> {
    if family.is_empty() {
        return Err(LabError::InvalidParameter("empty cube family".into()));
    }
    let values: Vec<f64> = family
        .par_iter()
        .map(|sq| mean_and_oscillation(b, sq).map(|(_, osc)| weight(sq) * osc))
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    Ok(OscillationSup { value: values[best], square: family[best] })
}

/// Discrete BMO seminorm: the largest mean oscillation over `family`,
/// normally `cube_family(b.grid())`.
pub fn bmo_norm(b: &ComplexField, family: &[CellSquare]) -> Result<f64> {
    Ok(oscillation_sup(b, family, |_| 1.0)?.value)
}

/// Discrete Hölder seminorm `sup_Q r(Q)^{−α} ⨍_Q |b − ⟨b⟩_Q|` with `r` the half side.
pub fn holder_osc(b: &ComplexField, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(LabError::InvalidParameter(format!("Hölder index {alpha} outside (0, 1]")));
    }
    let g = *b.grid();
    Ok(oscillation_sup(b, &cube_family(&g), |sq| (sq.side_length(&g) / 2.0).powf(-alpha))?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{generate_symbol, SymbolClass, SymbolSpec};
    use num_complex::Complex64;

    #[test]
    fn family_counts() {
        let g = GridSpec::centered(8, 1.0).unwrap();
        let fam = cube_family(&g);
        // sides 8, 4, 2 with 1, 9, 49 placements
        assert_eq!(fam.len(), 1 + 9 + 49);
        assert!(fam.iter().all(|sq| sq.fits(&g)));
    }

    #[test]
    fn constants_vanish() {
        let g = GridSpec::centered(32, 1.0).unwrap();
        let b = ComplexField::constant(g, Complex64::new(0.3, -7.1));
        assert_eq!(bmo_norm(&b, &cube_family(&g)).unwrap(), 0.0);
        assert_eq!(holder_osc(&b, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn step_oscillation_is_half() {
        // a square split evenly by the jump has oscillation exactly 1/2
        let g = GridSpec::centered(32, 1.0).unwrap();
        let b = generate_symbol(&SymbolSpec::new(SymbolClass::Step {}), &g).unwrap();
        assert!((bmo_norm(&b, &cube_family(&g)).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn linear_symbol_holder_one() {
        for n in [16, 64] {
            let g = GridSpec::centered(n, 3.0).unwrap();
            let b = ComplexField::from_real_fn(g, |x, _| x);
            assert!((holder_osc(&b, 1.0).unwrap() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn log_bmo_is_grid_stable() {
        let vals: Vec<f64> = [32, 64, 128]
            .iter()
            .map(|&n| {
                let g = GridSpec::centered(n, 2.0).unwrap();
                let b = generate_symbol(&SymbolSpec::new(SymbolClass::BmoLog { clamp: true }), &g).unwrap();
                bmo_norm(&b, &cube_family(&g)).unwrap()
            })
            .collect();
        for w in vals.windows(2) {
            assert!((w[0] - w[1]).abs() < 0.05 * w[1], "{vals:?}");
        }
    }

    #[test]
    fn holder_power_is_grid_stable() {
        let vals: Vec<f64> = [32, 64, 128]
            .iter()
            .map(|&n| {
                let g = GridSpec::centered(n, 2.0).unwrap();
                let b = generate_symbol(&SymbolSpec::new(SymbolClass::Holder { alpha: 0.5 }), &g).unwrap();
                holder_osc(&b, 0.5).unwrap()
            })
            .collect();
        for w in vals.windows(2) {
            assert!((w[0] - w[1]).abs() < 0.05 * w[1], "{vals:?}");
        }
    }
}
