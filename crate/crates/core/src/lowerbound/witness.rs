use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dyadic::{block, centered_values, CellSquare, DyadicCube};
use crate::error::{LabError, Result};
use crate::field::{lp_norm_slice, ComplexField, GridSpec};
use crate::operators::{BeurlingBackend, BlockCommutator};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Witnesses `σ, fᵢ, gᵢ` on a square `Q` of side `ℓ` and centre `z`:
///
/// `f₁ = 1`, `f₂ = (y − z)/ℓ`, `f₃ = ((y − z)/ℓ)²`,
/// `g₁ = −π(x − z)²σ/ℓ²`, `g₂ = 2π(x − z)σ/ℓ`, `g₃ = −πσ`,
///
/// so that `Σᵢ gᵢ(x)fᵢ(y) = −π(x − y)²σ(x)/ℓ²` cancels the kernel of `S`, and
/// `Σᵢ ∫ gᵢ [b,S] fᵢ = ∫_Q |b − ⟨b⟩_Q|`.
///
/// Fields are stored on the cells of `Q` only (row-major within `Q`); they
/// vanish elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessTriple {
    pub square: CellSquare,
    pub grid: GridSpec,
    pub mean: Complex64,
    /// `∫_Q |b − ⟨b⟩_Q|`
    pub lhs: f64,
    /// unimodular with `σ(b − ⟨b⟩_Q) = |b − ⟨b⟩_Q|`, and 1 where `b = ⟨b⟩_Q`
    pub sigma: Vec<Complex64>,
    pub f: [Vec<Complex64>; 3],
    pub g: [Vec<Complex64>; 3],
    /// `maxᵢ max_Q (|fᵢ| + |gᵢ|)`
    pub bound_const: f64,
}

/// The σ-free parts of the witnesses: `fᵢ` and `gᵢ/σ`.
pub(crate) fn witness_profiles(m: usize, h: f64) -> ([Vec<Complex64>; 3], [Vec<Complex64>; 3]) {
    let ell = m as f64 * h;
    let offsets: Vec<Complex64> = (0..m * m)
        .map(|k| {
            let (k1, k2) = ((k % m) as f64, (k / m) as f64);
            let c = 0.5 - m as f64 / 2.0;
            Complex64::new(h * (k1 + c), h * (k2 + c))
        })
        .collect();
    let f = [
        vec![ONE; m * m],
        offsets.iter().map(|w| w / ell).collect(),
        offsets.iter().map(|w| (w / ell).powi(2)).collect(),
    ];
    let g = [
        offsets.iter().map(|w| -PI * w * w / (ell * ell)).collect(),
        offsets.iter().map(|w| 2.0 * PI * w / ell).collect(),
        vec![Complex64::new(-PI, 0.0); m * m],
    ];
    (f, g)
}

/// `Σᵢ ‖fᵢ‖_p ‖gᵢ‖_{q′}` for a square of `m` cells per side. Depends only on
/// the geometry because `|σ| = 1`.
pub(crate) fn witness_norm_factor(m: usize, h: f64, p: f64, q_dual: f64) -> Result<f64> {
    let (f, g) = witness_profiles(m, h);
    let cell = h * h;
    let mut total = 0.0;
    for i in 0..3 {
        total += lp_norm_slice(&f[i], cell, p)? * lp_norm_slice(&g[i], cell, q_dual)?;
    }
    Ok(total)
}

fn require_quadrature(grid: &GridSpec, backend: BeurlingBackend) -> Result<()> {
    if grid.periodic() {
        return Err(LabError::BackendGridMismatch { backend: "quadrature", grid: grid.kind() });
    }
    backend.check_grid(grid)
}

pub(crate) fn witnesses_on(b: &ComplexField, sq: CellSquare) -> Result<WitnessTriple> {
    let grid = *b.grid();
    require_quadrature(&grid, BeurlingBackend::QuadratureFft)?;
    sq.check(&grid)?;
    let (mean, dev) = centered_values(&block(b, &sq));
    let sigma: Vec<Complex64> =
        dev.iter().map(|d| if *d == ZERO { ONE } else { d.conj() / d.norm() }).collect();
    let lhs = grid.cell_area() * dev.iter().map(|d| d.norm()).sum::<f64>();
    let (f, profiles) = witness_profiles(sq.side, grid.spacing());
    let g = profiles.map(|gi| gi.iter().zip(&sigma).map(|(a, s)| a * s).collect::<Vec<_>>());
    let mut bound_const = 0.0f64;
    for i in 0..3 {
        for (a, c) in f[i].iter().zip(&g[i]) {
            bound_const = bound_const.max(a.norm() + c.norm());
        }
    }
    Ok(WitnessTriple { square: sq, grid, mean, lhs, sigma, f, g, bound_const })
}

/// The witness triple of `b` on the cube `q`.
pub fn crw_witnesses(b: &ComplexField, q: &DyadicCube) -> Result<WitnessTriple> {
    witnesses_on(b, q.square())
}

impl WitnessTriple {
    fn embed(&self, local: &[Complex64]) -> ComplexField {
        let mut out = ComplexField::zeros(self.grid);
        for (k, i) in self.square.indices(&self.grid).enumerate() {
            out.samples_mut()[i] = local[k];
        }
        out
    }

    /// `σ` on the whole grid, zero off `Q`.
    pub fn sigma_field(&self) -> ComplexField {
        self.embed(&self.sigma)
    }

    pub fn f_field(&self, i: usize) -> ComplexField {
        self.embed(&self.f[i])
    }

    pub fn g_field(&self, i: usize) -> ComplexField {
        self.embed(&self.g[i])
    }

    /// `Σᵢ ‖fᵢ‖_p ‖gᵢ‖_{q′}`.
    pub fn norm_factor(&self, p: f64, q_dual: f64) -> Result<f64> {
        witness_norm_factor(self.square.side, self.grid.spacing(), p, q_dual)
    }

    /// `(∫ gᵢ [b,S] fᵢ)ᵢ` with the commutator of `b` restricted to `Q`.
    pub(crate) fn pairings(&self, op: &BlockCommutator) -> [Complex64; 3] {
        let cell = self.grid.cell_area();
        std::array::from_fn(|i| {
            let tf = op.apply(&self.f[i], false);
            cell * self.g[i].iter().zip(&tf).map(|(a, c)| a * c).sum::<Complex64>()
        })
    }
}

/// `Σᵢ ∫ gᵢ [b,S] fᵢ` for the witnesses of `b` on `sq`, evaluated with a
/// quadrature backend on the cells of `sq`.
pub(crate) fn crw_rhs(b: &ComplexField, w: &WitnessTriple, backend: BeurlingBackend) -> Complex64 {
    let op = BlockCommutator::new(w.square.side, &block(b, &w.square), backend);
    w.pairings(&op).iter().sum()
}

/// `|∫_Q |b − ⟨b⟩_Q| − Σᵢ ∫ gᵢ [b,S] fᵢ| / ∫_Q |b − ⟨b⟩_Q|`, 0 when `b` is
/// constant on `Q`.
pub fn crw_identity_residual(b: &ComplexField, q: &DyadicCube, backend: BeurlingBackend) -> Result<f64> {
    require_quadrature(b.grid(), backend)?;
    let w = crw_witnesses(b, q)?;
    let rhs = crw_rhs(b, &w, backend);
    if w.lhs == 0.0 {
        return Ok(rhs.norm());
    }
    Ok((w.lhs - rhs).norm() / w.lhs)
}
