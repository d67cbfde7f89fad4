use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cube::{block, centered_values, CellSquare};
use crate::error::{LabError, Result};
use crate::field::{ComplexField, GridSpec};

/// Nested centred squares from the full grid down to side 2, largest first.
pub fn centered_ladder(grid: &GridSpec) -> Vec<CellSquare> {
    let n = grid.n();
    std::iter::successors(Some(n), |&s| (s > 2).then_some(s / 2))
        .map(|s| CellSquare::new((n - s) / 2, (n - s) / 2, s))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanLimit {
    /// extrapolated `lim ⟨b⟩_Q`
    pub value: Complex64,
    /// `⟨b⟩_{Q_k}`, largest square first
    pub means: Vec<Complex64>,
    /// `|⟨b⟩_{Q_k} − ⟨b⟩_{Q_{k+1}}|`
    pub increments: Vec<f64>,
}

/// Limit of the means `⟨b⟩_Q` along a nested ladder as `Q` exhausts the plane.
///
/// The two largest squares are combined assuming `⟨b⟩_Q = c + m/|Q|`, exact
/// when `b − c` is integrable and supported well inside the grid.
pub fn mean_limit_constant(b: &ComplexField, ladder: &[CellSquare]) -> Result<MeanLimit> {
    if ladder.is_empty() {
        return Err(LabError::InvalidParameter("empty ladder".into()));
    }
    for w in ladder.windows(2) {
        if !(w[0].contains_square(&w[1]) && w[0].side > w[1].side) {
            return Err(LabError::InvalidParameter(format!("{:?} does not strictly contain {:?}", w[0], w[1])));
        }
    }
    for sq in ladder {
        sq.check(b.grid())?;
    }
    let means: Vec<Complex64> = ladder.iter().map(|sq| centered_values(&block(b, sq)).0).collect();
    let increments = means.windows(2).map(|w| (w[0] - w[1]).norm()).collect();
    let value = if ladder.len() == 1 || means[0] == means[1] {
        means[0]
    } else {
        let (a0, a1) = (ladder[0].cells() as f64, ladder[1].cells() as f64);
        (means[0] * a0 - means[1] * a1) / (a0 - a1)
    };
    Ok(MeanLimit { value, means, increments })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_mean_vanishes() {
        let g = GridSpec::centered(128, 20.0).unwrap();
        let b = ComplexField::from_real_fn(g, |x, y| (-(x * x + y * y)).exp());
        let lim = mean_limit_constant(&b, &centered_ladder(&g)).unwrap();
        assert!(lim.value.norm() <= PI / 400.0 + 1e-9);
        assert!(lim.value.norm() < 1e-10);
        assert!((lim.means[0].re - PI / 400.0).abs() < 1e-10);
    }

    #[test]
    fn shifted_bump() {
        let g = GridSpec::centered(128, 20.0).unwrap();
        let b = ComplexField::from_real_fn(g, |x, y| 3.0 + (-(x * x + y * y)).exp());
        let lim = mean_limit_constant(&b, &centered_ladder(&g)).unwrap();
        assert!((lim.value - Complex64::new(3.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn odd_symbol_has_zero_limit() {
        let g = GridSpec::centered(128, 20.0).unwrap();
        let b = ComplexField::from_real_fn(g, |x, _| x);
        let lim = mean_limit_constant(&b, &centered_ladder(&g)).unwrap();
        assert_eq!(lim.value, Complex64::new(0.0, 0.0));
        assert!(lim.increments.iter().all(|&d| d == 0.0));
    }

    #[test]
    fn rejects_non_nested() {
        let g = GridSpec::centered(16, 1.0).unwrap();
        let b = ComplexField::zeros(g);
        let bad = [CellSquare::new(0, 0, 8), CellSquare::new(8, 8, 4)];
        assert!(mean_limit_constant(&b, &bad).is_err());
    }
}
