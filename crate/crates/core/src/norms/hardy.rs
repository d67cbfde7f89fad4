use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::field::{apply_multiplier, ComplexField, Fft2, GridSpec};

/// Gaussian widths `L·2^{−k}` for `k = 0..=log₂(n) − 2`; the finest is four cells.
pub fn h1_scales(grid: &GridSpec) -> Vec<f64> {
    let levels = grid.n().trailing_zeros() - 2;
    (0..=levels).map(|k| grid.length() / f64::from(1u32 << k)).collect()
}

/// `‖sup_k |φ_k * f|‖₁` for unit-mass Gaussians `φ_k` of width `h1_scales`.
///
/// A smooth maximal function stand-in for the Hardy norm, not a certified one.
/// On a bounded grid `f` is extended by zero; on the torus it is periodic.
pub fn h1_proxy(f: &ComplexField) -> Result<f64> {
    let grid = *f.grid();
    let scale = f.max_abs();
    if f.max_imag_abs() > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(LabError::InvalidParameter("h1_proxy expects a real-valued field".into()));
    }
    if scale == 0.0 {
        return Ok(0.0);
    }
    let real = f.map(|z| Complex64::new(z.re, 0.0));
    let mut sup = vec![0.0f64; grid.len()];
    for s in h1_scales(&grid) {
        let smoothed = if grid.periodic() {
            apply_multiplier(&real, |w| {
                let xi2 = w.xi1 * w.xi1 + w.xi2 * w.xi2;
                Complex64::new((-0.5 * s * s * xi2).exp(), 0.0)
            })?
            .into_samples()
        } else {
            padded_gaussian(&real, s)
        };
        for (m, z) in sup.iter_mut().zip(&smoothed) {
            *m = m.max(z.norm());
        }
    }
    Ok(grid.cell_area() * sup.iter().sum::<f64>())
}

/// Linear convolution with the sampled Gaussian of width `s` through a
/// zero-padded FFT of side `2n`.
fn padded_gaussian(f: &ComplexField, s: f64) -> Vec<Complex64> {
    let grid = *f.grid();
    let (n, h) = (grid.n(), grid.spacing());
    let m = 2 * n;
    let fft = Fft2::new(m);
    let norm = grid.cell_area() / (2.0 * PI * s * s);
    let offset = |i: usize| if i < n { i as f64 } else { i as f64 - m as f64 };
    let mut kernel = vec![Complex64::new(0.0, 0.0); m * m];
    for i2 in 0..m {
        for i1 in 0..m {
            if i1 == n || i2 == n {
                continue;
            }
            let (dx, dy) = (h * offset(i1), h * offset(i2));
            kernel[i2 * m + i1] = Complex64::new(norm * (-(dx * dx + dy * dy) / (2.0 * s * s)).exp(), 0.0);
        }
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); m * m];
    for j2 in 0..n {
        buf[j2 * m..j2 * m + n].copy_from_slice(&f.samples()[j2 * n..(j2 + 1) * n]);
    }
    fft.forward(&mut kernel);
    fft.forward(&mut buf);
    for (a, k) in buf.iter_mut().zip(&kernel) {
        *a *= k;
    }
    fft.inverse(&mut buf);
    (0..n).flat_map(|j2| buf[j2 * m..j2 * m + n].to_vec()).collect()
}
