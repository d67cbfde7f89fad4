//! Free-space quadrature of the Beurling kernel on an `m × m` block of cells.
//!
//! With nodes `xⱼ = h·j`, the weight `h²K(xⱼ, x_k) = −1/(π (Δ₁ + iΔ₂)²)` depends
//! only on the index offset `Δ = j − k`, so the discrete operator does not
//! depend on the spacing. The self-term `Δ = 0` is dropped.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::field::Fft2;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// `h² K` at integer offset `(d1, d2)`.
#[inline]
pub(crate) fn offset_weight(d1: i64, d2: i64) -> Complex64 {
    if d1 == 0 && d2 == 0 {
        return ZERO;
    }
    let w = Complex64::new(d1 as f64, d2 as f64);
    -1.0 / (PI * w * w)
}

/// Dense table of offset weights for `|Δᵢ| < m`, indexed `(d2 + m − 1)(2m − 1) + d1 + m − 1`.
fn weight_table(m: usize) -> Vec<Complex64> {
    let w = 2 * m - 1;
    let mut t = Vec::with_capacity(w * w);
    for d2 in -(m as i64 - 1)..=(m as i64 - 1) {
        for d1 in -(m as i64 - 1)..=(m as i64 - 1) {
            t.push(offset_weight(d1, d2));
        }
    }
    t
}

/// Direct double sum. When `symbol` is given the combined commutator kernel
/// `(b_j − b_k)·w(j − k)` is used. `adjoint` conjugates the weights (and the symbol).
pub(crate) fn direct(
    m: usize,
    v: &[Complex64],
    symbol: Option<&[Complex64]>,
    adjoint: bool,
) -> Vec<Complex64> {
    assert_eq!(v.len(), m * m);
    let mut table = weight_table(m);
    if adjoint {
        table.iter_mut().for_each(|z| *z = z.conj());
    }
    let b: Option<Vec<Complex64>> =
        symbol.map(|b| if adjoint { b.iter().map(|z| z.conj()).collect() } else { b.to_vec() });
    let w = 2 * m - 1;
    let mut out = vec![ZERO; m * m];
    for j2 in 0..m {
        for j1 in 0..m {
            let j = j2 * m + j1;
            let mut acc = ZERO;
            for k2 in 0..m {
                let row = (j2 + m - 1 - k2) * w + j1 + m - 1;
                let vrow = &v[k2 * m..(k2 + 1) * m];
                match &b {
                    None => {
                        for (k1, vk) in vrow.iter().enumerate() {
                            acc += table[row - k1] * vk;
                        }
                    }
                    Some(b) => {
                        let bj = b[j];
                        let brow = &b[k2 * m..(k2 + 1) * m];
                        for (k1, (vk, bk)) in vrow.iter().zip(brow).enumerate() {
                            acc += (bj - bk) * table[row - k1] * vk;
                        }
                    }
                }
            }
            // the adjoint of the combined kernel carries (b̄_k − b̄_j)
            out[j] = if adjoint && b.is_some() { -acc } else { acc };
        }
    }
    out
}

/// Zero-padded FFT convolution with the offset weights on a `2m × 2m` torus.
#[derive(Clone)]
pub(crate) struct ConvolutionKernel {
    m: usize,
    fft: Fft2,
    spectrum: Vec<Complex64>,
}

impl ConvolutionKernel {
    pub(crate) fn new(m: usize) -> Self {
        let big = 2 * m;
        let fft = Fft2::new(big);
        let mut kernel = vec![ZERO; big * big];
        let wrap = |i: usize| -> Option<i64> {
            if i < m {
                Some(i as i64)
            } else if i > m {
                Some(i as i64 - big as i64)
            } else {
                None
            }
        };
        for i2 in 0..big {
            for i1 in 0..big {
                if let (Some(d1), Some(d2)) = (wrap(i1), wrap(i2)) {
                    kernel[i2 * big + i1] = offset_weight(d1, d2);
                }
            }
        }
        fft.forward(&mut kernel);
        Self { m, fft, spectrum: kernel }
    }

    pub(crate) fn side(&self) -> usize {
        self.m
    }

    /// `S v` (or `S* v`) restricted to the block.
    pub(crate) fn apply(&self, v: &[Complex64], adjoint: bool) -> Vec<Complex64> {
        let m = self.m;
        let big = 2 * m;
        assert_eq!(v.len(), m * m);
        let mut buf = vec![ZERO; big * big];
        for (src, dst) in v.chunks_exact(m).zip(buf.chunks_exact_mut(big)) {
            dst[..m].copy_from_slice(src);
        }
        self.fft.forward(&mut buf);
        // weights are even in Δ, so the adjoint multiplies by the conjugate spectrum
        if adjoint {
            buf.iter_mut().zip(&self.spectrum).for_each(|(z, k)| *z *= k.conj());
        } else {
            buf.iter_mut().zip(&self.spectrum).for_each(|(z, k)| *z *= k);
        }
        self.fft.inverse(&mut buf);
        buf.chunks_exact(big).take(m).flat_map(|row| row[..m].iter().copied()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(m: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..m * m).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
    }

    fn rel(a: &[Complex64], b: &[Complex64]) -> f64 {
        let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
        let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
        (num / den).sqrt()
    }

    #[test]
    fn fft_matches_direct() {
        for m in [4, 8, 16, 32] {
            let v = random(m, m as u64);
            let k = ConvolutionKernel::new(m);
            for adjoint in [false, true] {
                let a = direct(m, &v, None, adjoint);
                let b = k.apply(&v, adjoint);
                assert!(rel(&b, &a) < 1e-13, "m={m} adjoint={adjoint}: {}", rel(&b, &a));
            }
        }
    }

    #[test]
    fn direct_commutator_is_combined_form() {
        let m = 8;
        let v = random(m, 1);
        let b = random(m, 2);
        let sv = direct(m, &v, None, false);
        let bv: Vec<_> = b.iter().zip(&v).map(|(x, y)| x * y).collect();
        let sbv = direct(m, &bv, None, false);
        let split: Vec<_> = (0..m * m).map(|j| b[j] * sv[j] - sbv[j]).collect();
        let combined = direct(m, &v, Some(&b), false);
        assert!(rel(&combined, &split) < 1e-13);
    }

    #[test]
    fn lattice_sum_cancels_on_rotation_symmetric_sets() {
        // Σ over a centred square of 1/Δ² vanishes by the 90° rotation symmetry
        let m = 9;
        let mut v = vec![ZERO; m * m];
        v.iter_mut().for_each(|z| *z = Complex64::new(1.0, 0.0));
        let out = direct(m, &v, None, false);
        assert!(out[4 * m + 4].norm() < 1e-14);
    }
}
