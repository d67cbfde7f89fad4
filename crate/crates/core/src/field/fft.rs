use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Unnormalised 2D FFT on a square row-major buffer.
#[derive(Clone)]
pub(crate) struct Fft2 {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub(crate) fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self { n, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) }
    }

    pub(crate) fn forward(&self, buf: &mut [Complex64]) {
        self.run(buf, &*self.forward);
    }

    /// Inverse transform including the `1/n²` normalisation.
    pub(crate) fn inverse(&self, buf: &mut [Complex64]) {
        self.run(buf, &*self.inverse);
        let s = 1.0 / (self.n * self.n) as f64;
        buf.iter_mut().for_each(|z| *z *= s);
    }

    fn run(&self, buf: &mut [Complex64], fft: &dyn Fft<f64>) {
        let n = self.n;
        assert_eq!(buf.len(), n * n);
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(buf, &mut scratch);
        transpose(buf, n);
        fft.process_with_scratch(buf, &mut scratch);
        transpose(buf, n);
    }
}

fn transpose(buf: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            buf.swap(i * n + j, j * n + i);
        }
    }
}
