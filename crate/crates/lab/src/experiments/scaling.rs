//! Dilations `u_λ(x) = λ u(x/λ)` against homogeneous and nonhomogeneous norms.

use jaclab::field::{lp_norm, partial_x1, partial_x2};
use jaclab::operators::jacobian;
use jaclab::{Complex64, ComplexField, GridSpec, VectorField2};
use serde::Serialize;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::report::{csv_bytes, loglog_slope, Check, Outcome};

pub const HOMOGENEOUS_DRIFT: f64 = 0.01;
pub const EXPECTED_SLOPE: f64 = -2.0;
pub const SLOPE_TOLERANCE: f64 = 0.1;
/// Gaussian width of the base map as a fraction of the box side.
pub const WIDTH_FRACTION: f64 = 1.0 / 6.0;

#[derive(Debug, Serialize)]
struct Row {
    lambda: f64,
    length: f64,
    jacobian_p: f64,
    grad_2p_sq: f64,
    u_2p: f64,
    homogeneous: f64,
    nonhomogeneous: f64,
    homogeneous_rel: f64,
    nonhomogeneous_rel: f64,
}

/// `‖∇u‖_{2p}` with `|∇u|` the Frobenius norm of the derivative matrix.
fn grad_norm(u: &VectorField2, s: f64) -> Result<f64, CliError> {
    let comp = |v: &[f64]| ComplexField::new(*u.grid(), v.iter().map(|&x| Complex64::new(x, 0.0)).collect());
    let (u1, u2) = (comp(u.u1())?, comp(u.u2())?);
    let parts = [partial_x1(&u1), partial_x2(&u1), partial_x1(&u2), partial_x2(&u2)];
    let frob: Vec<Complex64> = (0..u.grid().len())
        .map(|j| Complex64::new(parts.iter().map(|f| f.samples()[j].norm_sqr()).sum::<f64>().sqrt(), 0.0))
        .collect();
    Ok(lp_norm(&ComplexField::new(*u.grid(), frob)?, s)?)
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let base = cfg.grid;
    let p = cfg.exponents.p;
    let width = WIDTH_FRACTION * base.length;
    let mut rows: Vec<Row> = Vec::with_capacity(cfg.lambdas.len());
    for &lambda in &cfg.lambdas {
        let length = lambda * base.length;
        let half = -0.5 * length;
        let grid = GridSpec::new(base.n, length, base.periodic, Complex64::new(half, half))?;
        let u = VectorField2::from_fn(grid, |x1, x2| {
            let (y1, y2) = (x1 / lambda, x2 / lambda);
            let g = (-(y1 * y1 + y2 * y2) / (width * width)).exp();
            (lambda * y1 * g, lambda * y2 * g)
        });
        let jacobian_p = lp_norm(&jacobian(&u), p)?;
        let grad = grad_norm(&u, 2.0 * p)?;
        let comp = u.to_complex().map(|z| Complex64::new(z.norm(), 0.0));
        let u_2p = lp_norm(&comp, 2.0 * p)?;
        let homogeneous = jacobian_p / (grad * grad);
        let nonhomogeneous = jacobian_p / (u_2p + grad).powi(2);
        let (h0, n0) = rows.first().map_or((homogeneous, nonhomogeneous), |r| (r.homogeneous, r.nonhomogeneous));
        rows.push(Row {
            lambda,
            length,
            jacobian_p,
            grad_2p_sq: grad * grad,
            u_2p,
            homogeneous,
            nonhomogeneous,
            homogeneous_rel: homogeneous / h0,
            nonhomogeneous_rel: nonhomogeneous / n0,
        });
    }
    let drift = rows.iter().map(|r| (r.homogeneous_rel - 1.0).abs()).fold(0.0, f64::max);
    let lambdas: Vec<f64> = rows.iter().map(|r| r.lambda).collect();
    let nonhom: Vec<f64> = rows.iter().map(|r| r.nonhomogeneous).collect();
    let slope = loglog_slope(&lambdas, &nonhom);
    let checks = vec![
        Check::le("homogeneous_drift", drift, HOMOGENEOUS_DRIFT),
        Check::le("nonhomogeneous_slope", (slope - EXPECTED_SLOPE).abs(), SLOPE_TOLERANCE),
    ];
    Ok(Outcome {
        results: json!({
            "p": p,
            "width": width,
            "homogeneous_drift": drift,
            "nonhomogeneous_slope": slope,
        }),
        constants: json!({
            "homogeneous_drift": HOMOGENEOUS_DRIFT,
            "expected_slope": EXPECTED_SLOPE,
            "slope_tolerance": SLOPE_TOLERANCE,
            "width_fraction": WIDTH_FRACTION,
        }),
        checks,
        csv: Some(csv_bytes(&rows)?),
    })
}
