//! Fourth-order finite differences for bounded grids.

/// Derivative of equally spaced samples `f` with spacing `h`, writing into `out`
/// with stride `stride` between consecutive points.
fn diff_line(f: &[f64], h: f64, out: &mut [f64]) {
    let n = f.len();
    debug_assert!(n >= 5);
    let s = 1.0 / (12.0 * h);
    out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * s;
    out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * s;
    for j in 2..n - 2 {
        out[j] = (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) * s;
    }
    out[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) * s;
    out[n - 1] =
        (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) * s;
}

/// `∂₁` of a row-major `n × n` array.
pub(crate) fn diff_x1(f: &[f64], n: usize, h: f64) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for (row, dst) in f.chunks_exact(n).zip(out.chunks_exact_mut(n)) {
        diff_line(row, h, dst);
    }
    out
}

/// `∂₂` of a row-major `n × n` array.
pub(crate) fn diff_x2(f: &[f64], n: usize, h: f64) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    let mut col = vec![0.0; n];
    let mut dcol = vec![0.0; n];
    for j1 in 0..n {
        for j2 in 0..n {
            col[j2] = f[j2 * n + j1];
        }
        diff_line(&col, h, &mut dcol);
        for j2 in 0..n {
            out[j2 * n + j1] = dcol[j2];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_quartics() {
        let n = 9;
        let h = 0.3;
        let f: Vec<f64> = (0..n).map(|j| {
            let x = j as f64 * h;
            1.0 - 2.0 * x + 0.5 * x * x + x.powi(3) - 0.25 * x.powi(4)
        }).collect();
        let mut d = vec![0.0; n];
        diff_line(&f, h, &mut d);
        for (j, v) in d.iter().enumerate() {
            let x = j as f64 * h;
            let exact = -2.0 + x + 3.0 * x * x - x.powi(3);
            assert!((v - exact).abs() < 1e-11, "j={j}: {v} vs {exact}");
        }
    }
}
