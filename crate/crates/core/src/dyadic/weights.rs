use super::SparseFamily;
use crate::error::{LabError, Result};

/// `‖Σ λ_Q 1_Q‖_p / (Σ λ_Q^p |Q|)^{1/p}`; a vanishing denominator reports 1.
pub fn sparse_lp_ratio(family: &SparseFamily, lambda: &[f64], p: f64) -> f64 {
    assert_eq!(lambda.len(), family.len());
    let sum = family.weighted_indicator_sum(|i| lambda[i]);
    let cell = family.grid.cell_area();
    let num = (sum.iter().map(|v| v.powf(p)).sum::<f64>() * cell).powf(1.0 / p);
    let den = (0..family.len()).map(|i| lambda[i].powf(p) * family.area(i)).sum::<f64>().powf(1.0 / p);
    if den == 0.0 {
        1.0
    } else {
        num / den
    }
}

/// Dualising weights `λ_Q = a_Q^{r/r′} A^{−1/r′}` with `A = Σ |Q| a_Q^r`, so that
/// `Σ |Q| λ_Q^{r′} = 1` and `Σ |Q| λ_Q a_Q = A^{1/r}`.
pub fn dual_weights(family: &SparseFamily, r: f64) -> Result<Vec<f64>> {
    if !(r > 1.0 && r.is_finite()) {
        return Err(LabError::InvalidExponent(format!("r = {r} must lie in (1, ∞)")));
    }
    let a: Vec<f64> = family.cubes.iter().map(|c| c.oscillation).collect();
    if a.iter().all(|&x| x == 0.0) {
        return Err(LabError::AllZeroOscillation);
    }
    let r_dual = r / (r - 1.0);
    let total: f64 = a.iter().enumerate().map(|(i, x)| family.area(i) * x.powf(r)).sum();
    let norm = total.powf(-1.0 / r_dual);
    Ok(a.iter().map(|x| x.powf(r - 1.0) * norm).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::{sparse_dominate, DyadicCube};
    use crate::field::{ComplexField, GridSpec};
    use num_complex::Complex64;

    fn unit_grid() -> GridSpec {
        GridSpec::new(16, 1.0, false, Complex64::new(0.0, 0.0)).unwrap()
    }

    #[test]
    fn singleton_is_exact() {
        let g = unit_grid();
        let root = DyadicCube::whole_grid(&g);
        let mut fam = SparseFamily::from_cubes(g, root, vec![root]);
        fam.cubes[0].oscillation = 1.0;
        let lam = dual_weights(&fam, 3.0).unwrap();
        assert!((lam[0] - 1.0).abs() < 1e-15);
        for p in [4.0 / 3.0, 2.0, 4.0] {
            assert!((sparse_lp_ratio(&fam, &[2.5], p) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn two_cube_hand_computation() {
        let g = unit_grid();
        let root = DyadicCube::whole_grid(&g);
        let kid = root.children().unwrap()[1];
        let mut fam = SparseFamily::from_cubes(g, root, vec![root, kid]);
        fam.cubes[0].oscillation = 1.0;
        fam.cubes[1].oscillation = 2.0;
        let r = 4.0;
        let lam = dual_weights(&fam, r).unwrap();
        let a_total: f64 = 5.0;
        assert!((lam[0] - a_total.powf(-0.75)).abs() < 1e-15);
        assert!((lam[1] - 8.0 * a_total.powf(-0.75)).abs() < 1e-14);
        let rd = 4.0 / 3.0;
        let norm: f64 = lam[0].powf(rd) + 0.25 * lam[1].powf(rd);
        assert!((norm - 1.0).abs() < 1e-12);
        let pairing = lam[0] * 1.0 + 0.25 * lam[1] * 2.0;
        assert!((pairing - a_total.powf(0.25)).abs() < 1e-12);
    }

    #[test]
    fn constant_symbol_has_nothing_to_certify() {
        let g = unit_grid();
        let b = ComplexField::constant(g, Complex64::new(4.0, 0.0));
        let fam = sparse_dominate(&b, DyadicCube::whole_grid(&g), 2.0).unwrap();
        assert_eq!(dual_weights(&fam, 2.0), Err(LabError::AllZeroOscillation));
    }
}
