//! Algebraic identities of the Beurling transform on the torus.

use jaclab::field::{apply_multiplier, band_limited_map, d, d_bar, integrate, partial_x1, partial_x2};
use jaclab::operators::{beurling, beurling_adjoint, beurling_symbol, commutator, jacobian, polarize};
use jaclab::{BeurlingBackend, Complex64, ComplexField, GridSpec};
use serde::Serialize;
use serde_json::json;

use super::{complex_band_limited, sup_diff};
use crate::config::{ExperimentConfig, Fault};
use crate::error::CliError;
use crate::report::{csv_bytes, Check, Outcome};

pub const TOL_INTERTWINING: f64 = 1e-10;
pub const TOL_ISOMETRY: f64 = 1e-12;
pub const TOL_INVERSE: f64 = 1e-10;
pub const TOL_POLARIZATION: f64 = 1e-13;
pub const TOL_JACOBIAN: f64 = 1e-8;
pub const TOL_JACOBIAN_INTEGRAL: f64 = 1e-10;
pub const TOL_BACKENDS: f64 = 1e-12;

/// The transform under test; a configured fault perturbs one Fourier mode.
fn transform(v: &ComplexField, fault: Option<Fault>) -> jaclab::Result<ComplexField> {
    match fault {
        None => beurling(v, BeurlingBackend::Spectral),
        Some(Fault::CorruptMultiplier) => apply_multiplier(v, |w| {
            let m = beurling_symbol(w);
            if w.xi1 > 0.0 && w.xi2 == 0.0 {
                m * Complex64::new(1.0, 1e-3)
            } else {
                m
            }
        }),
    }
}

#[derive(Serialize)]
struct Row<'a> {
    check: &'a str,
    value: f64,
    relation: &'a str,
    limit: f64,
    pass: bool,
}

fn grad_l2(h: &ComplexField) -> f64 {
    partial_x1(h).l2_norm().hypot(partial_x2(h).l2_norm())
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let grid = cfg.grid.spec()?;
    let kmax = cfg.band_limit(grid.n());
    let fault = cfg.fault;
    let mut checks = Vec::new();

    let h = complex_band_limited(&grid, kmax, cfg.seed)?;
    let lhs = transform(&d_bar(&h), fault)?;
    checks.push(Check::le(
        "intertwining",
        (&lhs - &d(&h)).l2_norm() / grad_l2(&h),
        TOL_INTERTWINING,
    ));

    let v = complex_band_limited(&grid, kmax, cfg.seed.wrapping_add(1))?;
    let sv = transform(&v, fault)?;
    checks.push(Check::le("isometry", (sv.l2_norm() - v.l2_norm()).abs() / v.l2_norm(), TOL_ISOMETRY));
    let back = beurling_adjoint(&sv, BeurlingBackend::Spectral)?;
    checks.push(Check::le("adjoint_inverse", (&back - &v).l2_norm() / v.l2_norm(), TOL_INVERSE));

    let w = complex_band_limited(&grid, kmax, cfg.seed.wrapping_add(2))?;
    let scale = (v.max_abs() + w.max_abs()).powi(2);
    let pol = polarize(&v, &w)?;
    let direct = v.zip_with(&w, |a, b| a * b.conj())?;
    checks.push(Check::le("polarization", sup_diff(&pol, &direct) / scale, TOL_POLARIZATION));

    let mut worst_jac = 0.0f64;
    let mut worst_int = 0.0f64;
    for k in 0..cfg.samples {
        let u = band_limited_map(&grid, kmax, cfg.seed.wrapping_add(100 + k as u64))?;
        let hu = u.to_complex();
        let vu = d_bar(&hu);
        let s = transform(&vu, fault)?;
        let jc = s.zip_with(&vu, |a, b| Complex64::new(a.norm_sqr() - b.norm_sqr(), 0.0))?;
        let ju = jacobian(&u);
        let grad_sup = partial_x1(&hu).max_abs().max(partial_x2(&hu).max_abs());
        worst_jac = worst_jac.max(sup_diff(&ju, &jc) / (grad_sup * grad_sup));
        let abs_int = integrate(&ju.map(|z| Complex64::new(z.norm(), 0.0))).re;
        worst_int = worst_int.max(integrate(&ju).norm() / abs_int);
    }
    checks.push(Check::le("jacobian_identity", worst_jac, TOL_JACOBIAN));
    checks.push(Check::le("jacobian_integral", worst_int, TOL_JACOBIAN_INTEGRAL));

    let nb = grid.n().min(64);
    let bounded = GridSpec::centered(nb, grid.length())?;
    let vb = complex_band_limited(&bounded, kmax.min(nb / 2 - 1), cfg.seed.wrapping_add(3))?;
    let direct = beurling(&vb, BeurlingBackend::QuadratureDirect)?;
    let fft = beurling(&vb, BeurlingBackend::QuadratureFft)?;
    checks.push(Check::le("backend_agreement", sup_diff(&direct, &fft) / vb.max_abs(), TOL_BACKENDS));

    let constant = ComplexField::constant(grid, Complex64::new(2.5, -1.0));
    let zero = commutator(&constant, &v, BeurlingBackend::Spectral)?;
    checks.push(Check::le("constant_commutator", zero.max_abs(), 0.0));

    let rows: Vec<Row> = checks
        .iter()
        .map(|c| Row { check: &c.name, value: c.value, relation: c.relation, limit: c.limit, pass: c.pass })
        .collect();
    let csv = csv_bytes(&rows)?;
    Ok(Outcome {
        results: json!({"n": grid.n(), "band_limit": kmax, "jacobian_samples": cfg.samples, "backend_grid_n": nb}),
        constants: json!({
            "intertwining": TOL_INTERTWINING,
            "isometry": TOL_ISOMETRY,
            "adjoint_inverse": TOL_INVERSE,
            "polarization": TOL_POLARIZATION,
            "jacobian_identity": TOL_JACOBIAN,
            "jacobian_integral": TOL_JACOBIAN_INTEGRAL,
            "backend_agreement": TOL_BACKENDS,
        }),
        checks,
        csv: Some(csv),
    })
}
