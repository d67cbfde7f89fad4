use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::GridSpec;
use crate::error::{LabError, Result};

/// A complex-valued function sampled at the nodes of a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: GridSpec,
    samples: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: GridSpec, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(LabError::InvalidGrid(format!(
                "expected {} samples, got {}",
                grid.len(),
                samples.len()
            )));
        }
        if let Some(i) = samples.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(LabError::NonFinite(i));
        }
        Ok(Self { grid, samples })
    }

    /// Internal constructor for results of arithmetic on already validated fields.
    pub(crate) fn from_parts(grid: GridSpec, samples: Vec<Complex64>) -> Self {
        debug_assert_eq!(samples.len(), grid.len());
        Self { grid, samples }
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self::constant(grid, Complex64::new(0.0, 0.0))
    }

    pub fn constant(grid: GridSpec, value: Complex64) -> Self {
        Self { grid, samples: vec![value; grid.len()] }
    }

    pub fn from_fn(grid: GridSpec, f: impl FnMut(Complex64) -> Complex64) -> Self {
        let samples = grid.nodes().map(f).collect();
        Self { grid, samples }
    }

    pub fn from_real_fn(grid: GridSpec, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        Self::from_fn(grid, |z| Complex64::new(f(z.re, z.im), 0.0))
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn at(&self, j1: usize, j2: usize) -> Complex64 {
        self.samples[self.grid.index(j1, j2)]
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self::from_parts(self.grid, self.samples.iter().map(|&z| f(z)).collect())
    }

    pub fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        self.check_grid(other)?;
        Ok(Self::from_parts(
            self.grid,
            self.samples.iter().zip(&other.samples).map(|(&a, &b)| f(a, b)).collect(),
        ))
    }

    pub fn check_grid(&self, other: &Self) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(LabError::GridMismatch)
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|z| z * c)
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn real_part(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.re).collect()
    }

    pub fn mean(&self) -> Complex64 {
        self.samples.iter().sum::<Complex64>() / self.samples.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// `∫ self · conj(other)`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_grid(other)?;
        let s: Complex64 = self.samples.iter().zip(&other.samples).map(|(a, b)| a * b.conj()).sum();
        Ok(s * self.grid.cell_area())
    }

    /// Bilinear pairing `∫ self · other`.
    pub fn pairing(&self, other: &Self) -> Result<Complex64> {
        self.check_grid(other)?;
        let s: Complex64 = self.samples.iter().zip(&other.samples).map(|(a, b)| a * b).sum();
        Ok(s * self.grid.cell_area())
    }

    pub fn l2_norm(&self) -> f64 {
        (self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.cell_area()).sqrt()
    }
}

impl Add for &ComplexField {
    type Output = ComplexField;
    fn add(self, rhs: &ComplexField) -> ComplexField {
        self.zip_with(rhs, |a, b| a + b).expect("grid mismatch in field addition")
    }
}

impl Sub for &ComplexField {
    type Output = ComplexField;
    fn sub(self, rhs: &ComplexField) -> ComplexField {
        self.zip_with(rhs, |a, b| a - b).expect("grid mismatch in field subtraction")
    }
}

impl Mul for &ComplexField {
    type Output = ComplexField;
    fn mul(self, rhs: &ComplexField) -> ComplexField {
        self.zip_with(rhs, |a, b| a * b).expect("grid mismatch in field product")
    }
}

/// Riemann sum `h² Σ f(xⱼ)`.
pub fn integrate(f: &ComplexField) -> Complex64 {
    f.samples.iter().sum::<Complex64>() * f.grid.cell_area()
}

/// `(h² Σ |f|^p)^{1/p}`, or the max norm for `p = ∞`.
pub fn lp_norm(f: &ComplexField, p: f64) -> Result<f64> {
    lp_norm_slice(&f.samples, f.grid.cell_area(), p)
}

pub(crate) fn lp_norm_slice(values: &[Complex64], cell_area: f64, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(LabError::InvalidExponent(format!("p = {p} must be at least 1")));
    }
    if p.is_infinite() {
        return Ok(values.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    let sum: f64 = if p == 2.0 {
        values.iter().map(|z| z.norm_sqr()).sum()
    } else {
        values.iter().map(|z| z.norm().powf(p)).sum()
    };
    Ok((sum * cell_area).powf(1.0 / p))
}

/// A map `u = (u₁, u₂): ℝ² → ℝ²` sampled on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField2 {
    grid: GridSpec,
    u1: Vec<f64>,
    u2: Vec<f64>,
}

impl VectorField2 {
    pub fn new(grid: GridSpec, u1: Vec<f64>, u2: Vec<f64>) -> Result<Self> {
        if u1.len() != grid.len() || u2.len() != grid.len() {
            return Err(LabError::GridMismatch);
        }
        Ok(Self { grid, u1, u2 })
    }

    pub fn from_fn(grid: GridSpec, mut f: impl FnMut(f64, f64) -> (f64, f64)) -> Self {
        let (u1, u2) = grid.nodes().map(|z| f(z.re, z.im)).unzip();
        Self { grid, u1, u2 }
    }

    /// `u₁ = Re h`, `u₂ = Im h`.
    pub fn from_complex(h: &ComplexField) -> Self {
        let (u1, u2) = h.samples().iter().map(|z| (z.re, z.im)).unzip();
        Self { grid: *h.grid(), u1, u2 }
    }

    /// `h = u₁ + i u₂`.
    pub fn to_complex(&self) -> ComplexField {
        ComplexField::from_parts(
            self.grid,
            self.u1.iter().zip(&self.u2).map(|(&a, &b)| Complex64::new(a, b)).collect(),
        )
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn u1(&self) -> &[f64] {
        &self.u1
    }

    pub fn u2(&self) -> &[f64] {
        &self.u2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn torus(n: usize) -> GridSpec {
        GridSpec::torus(n, 2.0 * PI).unwrap()
    }

    #[test]
    fn integrate_constant_on_torus() {
        let f = ComplexField::constant(torus(128), Complex64::new(1.0, 0.0));
        let v = integrate(&f);
        assert!((v.re - 4.0 * PI * PI).abs() < 1e-10);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn integrate_full_period_oscillation() {
        let f = ComplexField::from_fn(torus(128), |z| Complex64::new(0.0, z.re).exp());
        assert!(integrate(&f).norm() < 1e-12);
    }

    #[test]
    fn integrate_gaussian_on_square() {
        let g = GridSpec::centered(256, 20.0).unwrap();
        let f = ComplexField::from_real_fn(g, |x, y| (-(x * x + y * y)).exp());
        assert!((integrate(&f).re - PI).abs() < 1e-8);
    }

    #[test]
    fn lp_norm_examples() {
        let c = Complex64::new(3.0, -4.0);
        let f = ComplexField::constant(torus(64), c);
        assert!((lp_norm(&f, 2.0).unwrap() - 5.0 * 2.0 * PI).abs() < 1e-10);

        let g = GridSpec::centered(256, 20.0).unwrap();
        let gauss = ComplexField::from_real_fn(g, |x, y| (-(x * x + y * y)).exp());
        let expect = (PI / 4.0).powf(0.25);
        assert!((lp_norm(&gauss, 4.0).unwrap() - expect).abs() < 1e-6);

        let zero = ComplexField::zeros(g);
        for p in [1.0, 1.5, 2.0, 7.0, f64::INFINITY] {
            assert_eq!(lp_norm(&zero, p).unwrap(), 0.0);
        }
        assert!(matches!(lp_norm(&zero, 0.5), Err(LabError::InvalidExponent(_))));
    }

    #[test]
    fn rejects_nonfinite_samples() {
        let g = torus(8);
        let mut s = vec![Complex64::new(0.0, 0.0); 64];
        s[5] = Complex64::new(f64::NAN, 0.0);
        assert_eq!(ComplexField::new(g, s), Err(LabError::NonFinite(5)));
    }
}
