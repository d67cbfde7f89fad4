use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quadrature::{self, ConvolutionKernel};
use crate::error::{LabError, Result};
use crate::field::{apply_multiplier, ComplexField, GridSpec, Wavevector};

/// How the Beurling transform is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BeurlingBackend {
    /// Torus Fourier multiplier `ζ̄/ζ`.
    Spectral,
    /// Dense free-space quadrature sum, diagonal excluded.
    QuadratureDirect,
    /// Free-space quadrature through a zero-padded FFT convolution.
    QuadratureFft,
}

impl BeurlingBackend {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Spectral => "spectral",
            Self::QuadratureDirect => "quadrature_direct",
            Self::QuadratureFft => "quadrature_fft",
        }
    }

    pub fn is_quadrature(&self) -> bool {
        !matches!(self, Self::Spectral)
    }

    pub fn check_grid(&self, grid: &GridSpec) -> Result<()> {
        if grid.periodic() == self.is_quadrature() {
            Err(LabError::BackendGridMismatch { backend: self.name(), grid: grid.kind() })
        } else {
            Ok(())
        }
    }
}

/// `m(ζ) = ζ̄/ζ`, with `m(0) = 0`.
pub fn beurling_symbol(w: Wavevector) -> Complex64 {
    let z = w.zeta();
    if z.norm_sqr() == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        z.conj() / z
    }
}

fn spectral(v: &ComplexField, adjoint: bool) -> Result<ComplexField> {
    if adjoint {
        apply_multiplier(v, |w| beurling_symbol(w).conj())
    } else {
        apply_multiplier(v, beurling_symbol)
    }
}

fn quadrature_apply(v: &ComplexField, backend: BeurlingBackend, adjoint: bool) -> ComplexField {
    let n = v.grid().n();
    let out = match backend {
        BeurlingBackend::QuadratureDirect => quadrature::direct(n, v.samples(), None, adjoint),
        _ => ConvolutionKernel::new(n).apply(v.samples(), adjoint),
    };
    ComplexField::from_parts(*v.grid(), out)
}

/// `Sv`.
pub fn beurling(v: &ComplexField, backend: BeurlingBackend) -> Result<ComplexField> {
    backend.check_grid(v.grid())?;
    match backend {
        BeurlingBackend::Spectral => spectral(v, false),
        _ => Ok(quadrature_apply(v, backend, false)),
    }
}

/// `S*g`, the adjoint for `∫ φ·conj(ψ)`.
pub fn beurling_adjoint(g: &ComplexField, backend: BeurlingBackend) -> Result<ComplexField> {
    backend.check_grid(g.grid())?;
    match backend {
        BeurlingBackend::Spectral => spectral(g, true),
        _ => Ok(quadrature_apply(g, backend, true)),
    }
}

/// `[b,S]v = b·Sv − S(bv)`.
pub fn commutator(b: &ComplexField, v: &ComplexField, backend: BeurlingBackend) -> Result<ComplexField> {
    Commutator::new(b, backend)?.apply(v)
}

/// `[b,S]*y = S*(b̄y) − b̄·S*y`.
pub fn commutator_adjoint(
    b: &ComplexField,
    y: &ComplexField,
    backend: BeurlingBackend,
) -> Result<ComplexField> {
    Commutator::new(b, backend)?.apply_adjoint(y)
}

/// Commutator on a square block of cells, in the free-space quadrature.
///
/// The symbol is stored shifted by its first sample; the commutator only sees
/// differences `b(x) − b(y)`, and constant symbols become exactly zero.
#[derive(Clone)]
pub(crate) struct BlockCommutator {
    m: usize,
    shifted: Vec<Complex64>,
    conv: Option<ConvolutionKernel>,
}

impl BlockCommutator {
    pub(crate) fn new(m: usize, b: &[Complex64], backend: BeurlingBackend) -> Self {
        assert!(backend.is_quadrature());
        Self::with_kernel(
            m,
            b,
            (backend == BeurlingBackend::QuadratureFft).then(|| ConvolutionKernel::new(m)),
        )
    }

    /// Reuses a prepared convolution kernel of matching side.
    pub(crate) fn with_kernel(m: usize, b: &[Complex64], conv: Option<ConvolutionKernel>) -> Self {
        assert_eq!(b.len(), m * m);
        if let Some(k) = &conv {
            assert_eq!(k.side(), m);
        }
        let b0 = b[0];
        Self { m, shifted: b.iter().map(|z| z - b0).collect(), conv }
    }

    pub(crate) fn apply(&self, v: &[Complex64], adjoint: bool) -> Vec<Complex64> {
        match &self.conv {
            None => quadrature::direct(self.m, v, Some(&self.shifted), adjoint),
            Some(k) => {
                if self.shifted.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
                    return vec![Complex64::new(0.0, 0.0); v.len()];
                }
                let b: Vec<Complex64> = if adjoint {
                    self.shifted.iter().map(|z| z.conj()).collect()
                } else {
                    self.shifted.clone()
                };
                let bv: Vec<Complex64> = b.iter().zip(v).map(|(x, y)| x * y).collect();
                let sv = k.apply(v, adjoint);
                let sbv = k.apply(&bv, adjoint);
                if adjoint {
                    sbv.iter().zip(&sv).zip(&b).map(|((s, t), bb)| s - bb * t).collect()
                } else {
                    sv.iter().zip(&sbv).zip(&b).map(|((t, s), bb)| bb * t - s).collect()
                }
            }
        }
    }
}

/// `[b,S]` with the symbol and any transform workspace prepared once.
#[derive(Clone)]
pub struct Commutator {
    grid: GridSpec,
    backend: BeurlingBackend,
    spectral_symbol: Option<ComplexField>,
    block: Option<BlockCommutator>,
}

impl Commutator {
    pub fn new(b: &ComplexField, backend: BeurlingBackend) -> Result<Self> {
        backend.check_grid(b.grid())?;
        let grid = *b.grid();
        if backend.is_quadrature() {
            Ok(Self {
                grid,
                backend,
                spectral_symbol: None,
                block: Some(BlockCommutator::new(grid.n(), b.samples(), backend)),
            })
        } else {
            let b0 = b.samples()[0];
            Ok(Self { grid, backend, spectral_symbol: Some(b.map(|z| z - b0)), block: None })
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn backend(&self) -> BeurlingBackend {
        self.backend
    }

    pub fn apply(&self, v: &ComplexField) -> Result<ComplexField> {
        self.run(v, false)
    }

    pub fn apply_adjoint(&self, y: &ComplexField) -> Result<ComplexField> {
        self.run(y, true)
    }

    fn run(&self, v: &ComplexField, adjoint: bool) -> Result<ComplexField> {
        if *v.grid() != self.grid {
            return Err(LabError::GridMismatch);
        }
        if let Some(block) = &self.block {
            return Ok(ComplexField::from_parts(self.grid, block.apply(v.samples(), adjoint)));
        }
        let b = self.spectral_symbol.as_ref().expect("spectral symbol");
        let b = if adjoint { b.conj() } else { b.clone() };
        let bv = &b * v;
        let sv = spectral(v, adjoint)?;
        let sbv = spectral(&bv, adjoint)?;
        Ok(if adjoint { &sbv - &(&b * &sv) } else { &(&b * &sv) - &sbv })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

    fn torus() -> GridSpec {
        GridSpec::torus(32, 2.0 * PI).unwrap()
    }

    fn wave(k1: f64, k2: f64) -> ComplexField {
        ComplexField::from_fn(torus(), |z| (I * (k1 * z.re + k2 * z.im)).exp())
    }

    #[test]
    fn plane_wave_multipliers() {
        let e = wave(1.0, 0.0);
        assert!((&beurling(&e, BeurlingBackend::Spectral).unwrap() - &e).max_abs() < 1e-12);
        let e = wave(1.0, 1.0);
        let got = beurling(&e, BeurlingBackend::Spectral).unwrap();
        assert!((&got - &e.scale(-I)).max_abs() < 1e-12);
    }

    #[test]
    fn commutator_of_plane_waves() {
        let b = wave(1.0, 0.0);
        let v = wave(0.0, 1.0);
        let got = commutator(&b, &v, BeurlingBackend::Spectral).unwrap();
        let expect = wave(1.0, 1.0).scale(Complex64::new(-1.0, 1.0));
        assert!((&got - &expect).max_abs() < 1e-12);
    }

    #[test]
    fn constant_symbol_gives_exact_zero() {
        for (grid, backend) in [
            (torus(), BeurlingBackend::Spectral),
            (GridSpec::centered(16, 2.0).unwrap(), BeurlingBackend::QuadratureDirect),
            (GridSpec::centered(16, 2.0).unwrap(), BeurlingBackend::QuadratureFft),
        ] {
            let b = ComplexField::constant(grid, Complex64::new(7.0, 0.0));
            let v = ComplexField::from_fn(grid, |z| (z * z).sin() + z.conj());
            let out = commutator(&b, &v, backend).unwrap();
            assert_eq!(out.max_abs(), 0.0, "{backend:?}");
        }
    }

    #[test]
    fn backend_grid_mismatch() {
        let v = ComplexField::zeros(torus());
        assert!(matches!(
            beurling(&v, BeurlingBackend::QuadratureFft),
            Err(LabError::BackendGridMismatch { .. })
        ));
        let v = ComplexField::zeros(GridSpec::centered(8, 1.0).unwrap());
        assert!(beurling_adjoint(&v, BeurlingBackend::Spectral).is_err());
    }

    #[test]
    fn commutator_grid_mismatch() {
        let b = ComplexField::zeros(torus());
        let v = ComplexField::zeros(GridSpec::torus(16, 2.0 * PI).unwrap());
        assert_eq!(commutator(&b, &v, BeurlingBackend::Spectral).unwrap_err(), LabError::GridMismatch);
    }
}
