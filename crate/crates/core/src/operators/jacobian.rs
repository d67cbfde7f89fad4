use num_complex::Complex64;

use super::{beurling, BeurlingBackend};
use crate::error::Result;
use crate::field::{partial_x1, partial_x2, spectral_check_mean_zero, ComplexField, VectorField2};

fn real_field(u: &VectorField2, part: &[f64]) -> ComplexField {
    ComplexField::from_parts(*u.grid(), part.iter().map(|&x| Complex64::new(x, 0.0)).collect())
}

/// `Ju = ∂₁u₁ ∂₂u₂ − ∂₂u₁ ∂₁u₂`, computed with the grid's derivative operators.
pub fn jacobian(u: &VectorField2) -> ComplexField {
    let u1 = real_field(u, u.u1());
    let u2 = real_field(u, u.u2());
    let (a, b) = (partial_x1(&u1), partial_x2(&u1));
    let (c, d) = (partial_x1(&u2), partial_x2(&u2));
    let samples = (0..u.grid().len())
        .map(|j| Complex64::new(a.samples()[j].re * d.samples()[j].re - b.samples()[j].re * c.samples()[j].re, 0.0))
        .collect();
    ComplexField::from_parts(*u.grid(), samples)
}

/// `|Sv|² − |v|²`, the Jacobian of `u` with `v = ∂̄(u₁ + iu₂)`.
pub fn jacobian_complex(v: &ComplexField) -> Result<ComplexField> {
    crate::field::require_periodic(v.grid(), "jacobian_complex")?;
    spectral_check_mean_zero(v)?;
    let sv = beurling(v, BeurlingBackend::Spectral)?;
    sv.zip_with(v, |s, x| Complex64::new(s.norm_sqr() - x.norm_sqr(), 0.0))
}

/// `¼ Σ_{ε ∈ {±1, ±i}} ε |a + εb|²`, which equals `a·conj(b)`.
pub fn polarize(a: &ComplexField, b: &ComplexField) -> Result<ComplexField> {
    const UNITS: [Complex64; 4] = [
        Complex64 { re: 1.0, im: 0.0 },
        Complex64 { re: -1.0, im: 0.0 },
        Complex64 { re: 0.0, im: 1.0 },
        Complex64 { re: 0.0, im: -1.0 },
    ];
    a.zip_with(b, |x, y| UNITS.iter().map(|&e| e * (x + e * y).norm_sqr()).sum::<Complex64>() * 0.25)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{d_bar, integrate, GridSpec};
    use crate::error::LabError;
    use std::f64::consts::PI;

    const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

    fn torus() -> GridSpec {
        GridSpec::torus(64, 2.0 * PI).unwrap()
    }

    #[test]
    fn identity_map_on_bounded_grid() {
        let g = GridSpec::centered(32, 2.0).unwrap();
        let u = VectorField2::from_fn(g, |x, y| (x, y));
        let j = jacobian(&u);
        assert!(j.samples().iter().all(|z| (z.re - 1.0).abs() < 1e-8 && z.im == 0.0));
    }

    #[test]
    fn diagonal_gradient_on_torus() {
        let g = torus();
        let u = VectorField2::from_fn(g, |x, y| (x.sin(), y.sin()));
        let j = jacobian(&u);
        let expect = ComplexField::from_real_fn(g, |x, y| x.cos() * y.cos());
        assert!((&j - &expect).max_abs() < 1e-12);
    }

    #[test]
    fn complex_form_examples() {
        let g = torus();
        assert_eq!(jacobian_complex(&ComplexField::zeros(g)).unwrap().max_abs(), 0.0);
        let v = ComplexField::from_fn(g, |z| (I * (z.re + z.im)).exp());
        assert!(jacobian_complex(&v).unwrap().max_abs() < 1e-12);
        let v = ComplexField::from_fn(g, |z| (I * z.re).exp() + (I * z.im).exp());
        let j = jacobian_complex(&v).unwrap();
        let expect = ComplexField::from_real_fn(g, |x, y| -4.0 * (x - y).cos());
        assert!((&j - &expect).max_abs() < 1e-12);
        assert!(integrate(&j).norm() < 1e-10);
    }

    #[test]
    fn complex_form_needs_mean_zero() {
        let v = ComplexField::constant(torus(), Complex64::new(1.0, 0.0));
        assert!(matches!(jacobian_complex(&v), Err(LabError::NonZeroMean { .. })));
    }

    #[test]
    fn matches_real_jacobian() {
        let g = torus();
        let u = VectorField2::from_fn(g, |x, y| ((2.0 * x).sin() + y.cos(), (x + y).cos() - 0.3 * (3.0 * y).sin()));
        let v = d_bar(&u.to_complex());
        let a = jacobian(&u);
        let b = jacobian_complex(&v).unwrap();
        assert!((&a - &b).max_abs() < 1e-10);
    }

    #[test]
    fn polarisation_pointwise() {
        let g = GridSpec::torus(8, 1.0).unwrap();
        let one = ComplexField::constant(g, Complex64::new(1.0, 0.0));
        let i = ComplexField::constant(g, I);
        assert!((&polarize(&one, &one).unwrap() - &one).max_abs() < 1e-15);
        assert!((&polarize(&one, &i).unwrap() - &i.scale(-Complex64::new(1.0, 0.0))).max_abs() < 1e-15);
    }
}
