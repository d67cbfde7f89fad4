//! Spectral calculus on the torus and its finite-difference counterpart on
//! bounded grids.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{stencil, ComplexField, Fft2, GridSpec};
use crate::error::{LabError, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Angular wavevector of one Fourier mode on the torus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavevector {
    pub xi1: f64,
    pub xi2: f64,
    pub nyquist1: bool,
    pub nyquist2: bool,
}

impl Wavevector {
    /// `ζ = ξ₁ + iξ₂` with the Nyquist modes kept at `−n/2`.
    pub fn zeta(&self) -> Complex64 {
        Complex64::new(self.xi1, self.xi2)
    }

    /// `ζ` as seen by first derivatives: Nyquist components are zeroed so
    /// that derivatives of real fields stay real.
    pub fn zeta_derivative(&self) -> Complex64 {
        Complex64::new(
            if self.nyquist1 { 0.0 } else { self.xi1 },
            if self.nyquist2 { 0.0 } else { self.xi2 },
        )
    }
}

fn signed_mode(i: usize, n: usize) -> (f64, bool) {
    if i < n / 2 {
        (i as f64, false)
    } else if i == n / 2 {
        (-(n as f64) / 2.0, true)
    } else {
        (i as f64 - n as f64, false)
    }
}

pub(crate) fn require_periodic(grid: &GridSpec, backend: &'static str) -> Result<()> {
    if grid.periodic() {
        Ok(())
    } else {
        Err(LabError::BackendGridMismatch { backend, grid: grid.kind() })
    }
}

/// Multiplies the Fourier coefficient at each wavevector by `symbol(ξ)`.
pub fn apply_multiplier(
    f: &ComplexField,
    symbol: impl Fn(Wavevector) -> Complex64,
) -> Result<ComplexField> {
    let grid = *f.grid();
    require_periodic(&grid, "spectral")?;
    let n = grid.n();
    let fft = Fft2::new(n);
    let mut buf = f.samples().to_vec();
    fft.forward(&mut buf);
    let k0 = 2.0 * PI / grid.length();
    for i2 in 0..n {
        let (m2, ny2) = signed_mode(i2, n);
        for i1 in 0..n {
            let (m1, ny1) = signed_mode(i1, n);
            let w = Wavevector { xi1: k0 * m1, xi2: k0 * m2, nyquist1: ny1, nyquist2: ny2 };
            buf[i2 * n + i1] *= symbol(w);
        }
    }
    fft.inverse(&mut buf);
    Ok(ComplexField::from_parts(grid, buf))
}

fn split_diff(f: &ComplexField, axis: usize) -> ComplexField {
    let g = *f.grid();
    let (n, h) = (g.n(), g.spacing());
    let re: Vec<f64> = f.samples().iter().map(|z| z.re).collect();
    let im: Vec<f64> = f.samples().iter().map(|z| z.im).collect();
    let diff = if axis == 1 { stencil::diff_x1 } else { stencil::diff_x2 };
    let (dre, dim) = (diff(&re, n, h), diff(&im, n, h));
    ComplexField::from_parts(
        g,
        dre.into_iter().zip(dim).map(|(a, b)| Complex64::new(a, b)).collect(),
    )
}

/// `∂₁f`: spectral on the torus, fourth-order differences on a bounded grid.
pub fn partial_x1(f: &ComplexField) -> ComplexField {
    if f.grid().periodic() {
        apply_multiplier(f, |w| I * w.zeta_derivative().re).expect("periodic grid")
    } else {
        split_diff(f, 1)
    }
}

/// `∂₂f`: spectral on the torus, fourth-order differences on a bounded grid.
pub fn partial_x2(f: &ComplexField) -> ComplexField {
    if f.grid().periodic() {
        apply_multiplier(f, |w| I * w.zeta_derivative().im).expect("periodic grid")
    } else {
        split_diff(f, 2)
    }
}

/// `∂̄ = ½(∂₁ + i∂₂)`, symbol `(i/2)ζ` on the torus.
pub fn d_bar(h: &ComplexField) -> ComplexField {
    if h.grid().periodic() {
        apply_multiplier(h, |w| 0.5 * I * w.zeta_derivative()).expect("periodic grid")
    } else {
        let (a, b) = (split_diff(h, 1), split_diff(h, 2));
        a.zip_with(&b, |x, y| 0.5 * (x + I * y)).expect("same grid")
    }
}

/// `∂ = ½(∂₁ − i∂₂)`, symbol `(i/2)ζ̄` on the torus.
pub fn d(h: &ComplexField) -> ComplexField {
    if h.grid().periodic() {
        apply_multiplier(h, |w| 0.5 * I * w.zeta_derivative().conj()).expect("periodic grid")
    } else {
        let (a, b) = (split_diff(h, 1), split_diff(h, 2));
        a.zip_with(&b, |x, y| 0.5 * (x - I * y)).expect("same grid")
    }
}

/// Relative tolerance for the zero-mean requirement of [`solve_dbar`].
pub const MEAN_TOLERANCE: f64 = 1e-10;

pub(crate) fn check_mean_zero(v: &ComplexField) -> Result<()> {
    let mean = v.mean().norm() * v.grid().length();
    let tol = MEAN_TOLERANCE * v.l2_norm();
    if mean > tol {
        Err(LabError::NonZeroMean { mean, tol })
    } else {
        Ok(())
    }
}

/// Inverts `v = ∂̄h` on the torus, returning the zero-mean solution `h`.
pub fn solve_dbar(v: &ComplexField) -> Result<ComplexField> {
    require_periodic(v.grid(), "solve_dbar")?;
    check_mean_zero(v)?;
    apply_multiplier(v, |w| {
        let z = w.zeta_derivative();
        if z.norm_sqr() == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            1.0 / (0.5 * I * z)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus() -> GridSpec {
        GridSpec::torus(64, 2.0 * PI).unwrap()
    }

    fn wave(g: GridSpec, k1: f64, k2: f64) -> ComplexField {
        ComplexField::from_fn(g, |z| (I * (k1 * z.re + k2 * z.im)).exp())
    }

    fn max_diff(a: &ComplexField, b: &ComplexField) -> f64 {
        (a - b).max_abs()
    }

    #[test]
    fn dbar_of_plane_wave_x1() {
        let e = wave(torus(), 1.0, 0.0);
        let got = d_bar(&e);
        assert!(max_diff(&got, &e.scale(0.5 * I)) < 1e-12);
    }

    #[test]
    fn d_of_plane_wave_x2() {
        let e = wave(torus(), 0.0, 1.0);
        let got = d(&e);
        assert!(max_diff(&got, &e.scale(Complex64::new(0.5, 0.0))) < 1e-12);
    }

    #[test]
    fn derivatives_kill_constants() {
        for g in [torus(), GridSpec::centered(16, 3.0).unwrap()] {
            let c = ComplexField::constant(g, Complex64::new(2.0, -1.0));
            assert!(d_bar(&c).max_abs() < 1e-12);
            assert!(d(&c).max_abs() < 1e-12);
        }
    }

    #[test]
    fn solve_dbar_plane_wave() {
        let v = wave(torus(), 1.0, 0.0);
        let h = solve_dbar(&v).unwrap();
        assert!(max_diff(&h, &v.scale(Complex64::new(0.0, -2.0))) < 1e-12);
    }

    #[test]
    fn solve_dbar_rejects_constants() {
        let v = ComplexField::constant(torus(), Complex64::new(1.0, 0.0));
        assert!(matches!(solve_dbar(&v), Err(LabError::NonZeroMean { .. })));
    }

    #[test]
    fn solve_dbar_zero() {
        let v = ComplexField::zeros(torus());
        assert_eq!(solve_dbar(&v).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn solve_dbar_needs_torus() {
        let v = ComplexField::zeros(GridSpec::centered(8, 1.0).unwrap());
        assert!(matches!(solve_dbar(&v), Err(LabError::BackendGridMismatch { .. })));
    }

    #[test]
    fn bounded_dbar_of_identity_map() {
        let g = GridSpec::centered(32, 2.0).unwrap();
        let z = ComplexField::from_fn(g, |z| z);
        let zbar = ComplexField::from_fn(g, |z| z.conj());
        assert!(max_diff(&d(&z), &ComplexField::constant(g, Complex64::new(1.0, 0.0))) < 1e-10);
        assert!(d_bar(&z).max_abs() < 1e-10);
        assert!(max_diff(&d_bar(&zbar), &ComplexField::constant(g, Complex64::new(1.0, 0.0))) < 1e-10);
    }
}
