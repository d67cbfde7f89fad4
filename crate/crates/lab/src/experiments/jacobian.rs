//! Jacobians of random maps and the norming functional `∫ b Ju`.

use jaclab::field::{band_limited_map, conjugate, d_bar, integrate, lp_norm, partial_x1, partial_x2};
use jaclab::norms::{generate_symbol, h1_proxy, opnorm_lower};
use jaclab::operators::{beurling, commutator, jacobian, jacobian_complex};
use jaclab::{BeurlingBackend, Complex64, ComplexField};
use serde::Serialize;
use serde_json::json;

use super::sup_diff;
use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::report::{csv_bytes, Check, Outcome};

pub const TOL_IDENTITY: f64 = 1e-8;
pub const TOL_INTEGRAL: f64 = 1e-10;
pub const TOL_FUNCTIONAL_GAP: f64 = 1e-8;
pub const TOL_PLANE_WAVE: f64 = 1e-12;

const SPECTRAL: BeurlingBackend = BeurlingBackend::Spectral;
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Serialize)]
struct Row {
    sample: String,
    identity_error: f64,
    integral_rel: f64,
    h1_ratio: f64,
    functional: f64,
    functional_ratio: f64,
    commutator_gap: f64,
}

/// `∫ b Ju` with `Ju = |Sv|² − |v|²`, and the same number as `⟨[b,S]v, Sv⟩`.
fn functional_pair(b: &ComplexField, v: &ComplexField) -> Result<(f64, f64), CliError> {
    let ju = jacobian_complex(v)?;
    let direct = integrate(&(b * &ju)).re;
    let sv = beurling(v, SPECTRAL)?;
    let via = commutator(b, v, SPECTRAL)?.inner(&sv)?.re;
    Ok((direct, via))
}

fn relative(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale.max(f64::MIN_POSITIVE)
}

fn abs_integral(f: &ComplexField) -> f64 {
    integrate(&f.map(|z| Complex64::new(z.norm(), 0.0))).re
}

/// Functional normalised by `‖v‖_{2p} ‖Sv‖_{2p}`, the Hölder bound for `‖[b,S]‖_{2p→(2p)′}`.
fn normalised(value: f64, v: &ComplexField, s: f64) -> Result<f64, CliError> {
    let sv = beurling(v, SPECTRAL)?;
    let denom = lp_norm(v, s)? * lp_norm(&sv, s)?;
    Ok(if denom > 0.0 { value.abs() / denom } else { 0.0 })
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let grid = cfg.grid.spec()?;
    let kmax = cfg.band_limit(grid.n());
    let b = generate_symbol(&cfg.symbol, &grid)?;
    let s = 2.0 * cfg.exponents.p;
    let s_dual = conjugate(s);

    let mut rows = Vec::with_capacity(cfg.samples + 1);
    let (mut worst_id, mut worst_int, mut worst_gap) = (0.0f64, 0.0f64, 0.0f64);
    let mut sup_functional = 0.0f64;
    for k in 0..cfg.samples {
        let u = band_limited_map(&grid, kmax, cfg.seed.wrapping_add(k as u64))?;
        let h = u.to_complex();
        let v = d_bar(&h);
        let ju = jacobian(&u);
        let jc = jacobian_complex(&v)?;
        let grad_sup = partial_x1(&h).max_abs().max(partial_x2(&h).max_abs());
        let identity_error = sup_diff(&ju, &jc) / (grad_sup * grad_sup);
        let integral_rel = integrate(&ju).norm() / abs_integral(&ju);
        let grad_l2_sq = partial_x1(&h).l2_norm().powi(2) + partial_x2(&h).l2_norm().powi(2);
        let h1_ratio = h1_proxy(&ju)? / grad_l2_sq;
        let (direct, via) = functional_pair(&b, &v)?;
        let gap = relative(direct, via, abs_integral(&(&b * &ju)));
        let ratio = normalised(direct, &v, s)?;
        worst_id = worst_id.max(identity_error);
        worst_int = worst_int.max(integral_rel);
        worst_gap = worst_gap.max(gap);
        sup_functional = sup_functional.max(ratio);
        rows.push(Row {
            sample: k.to_string(),
            identity_error,
            integral_rel,
            h1_ratio,
            functional: direct,
            functional_ratio: ratio,
            commutator_gap: gap,
        });
    }

    let est = opnorm_lower(&b, s, s_dual, SPECTRAL, &cfg.search)?;
    // the ascent witness, projected to mean zero, is one more test input
    let w = {
        let m = est.witness_v.mean();
        est.witness_v.map(|z| z - m)
    };
    let (wd, wv) = functional_pair(&b, &w)?;
    let w_ratio = normalised(wd, &w, s)?;
    sup_functional = sup_functional.max(w_ratio);
    rows.push(Row {
        sample: "ascent_witness".into(),
        identity_error: 0.0,
        integral_rel: 0.0,
        h1_ratio: 0.0,
        functional: wd,
        functional_ratio: w_ratio,
        commutator_gap: relative(wd, wv, wd.abs().max(wv.abs())),
    });

    let kappa = 2.0 * std::f64::consts::PI / grid.length();
    let plane = ComplexField::from_fn(grid, |z| (I * kappa * z.re).exp());
    let plane_ju = jacobian_complex(&plane)?.max_abs();

    let two = ComplexField::from_fn(grid, |z| (I * kappa * z.re).exp() + (I * kappa * z.im).exp());
    let (two_direct, two_via) = functional_pair(&b, &two)?;
    let formula = integrate(&ComplexField::from_fn(grid, |z| Complex64::new(-4.0 * (kappa * (z.re - z.im)).cos(), 0.0)).zip_with(&b, |c, bb| c * bb)?).re;
    let two_scale = abs_integral(&b) * 4.0;
    let two_err = relative(two_direct, formula, two_scale).max(relative(two_via, formula, two_scale));

    let constant = ComplexField::constant(grid, Complex64::new(1.75, 0.0));
    let u0 = band_limited_map(&grid, kmax, cfg.seed.wrapping_add(cfg.samples as u64))?;
    let ju0 = jacobian(&u0);
    let const_rel = integrate(&(&constant * &ju0)).norm() / (1.75 * abs_integral(&ju0));

    let comparability = if est.value > 0.0 { sup_functional / est.value } else { 0.0 };
    let checks = vec![
        Check::le("jacobian_identity", worst_id, TOL_IDENTITY),
        Check::le("jacobian_integral", worst_int, TOL_INTEGRAL),
        Check::le("functional_commutator_gap", worst_gap, TOL_FUNCTIONAL_GAP),
        Check::le("plane_wave_jacobian", plane_ju, TOL_PLANE_WAVE),
        Check::le("two_wave_functional", two_err, TOL_FUNCTIONAL_GAP),
        Check::le("constant_symbol_functional", const_rel, TOL_INTEGRAL),
    ];
    Ok(Outcome {
        results: json!({
            "n": grid.n(),
            "band_limit": kmax,
            "symbol": cfg.symbol.label(),
            "s": s,
            "s_dual": s_dual,
            "sup_functional_ratio": sup_functional,
            "opnorm_lower": est.value,
            "comparability_ratio": comparability,
            "two_wave": {"direct": two_direct, "commutator": two_via, "formula": formula},
        }),
        constants: json!({
            "jacobian_identity": TOL_IDENTITY,
            "jacobian_integral": TOL_INTEGRAL,
            "functional_gap": TOL_FUNCTIONAL_GAP,
            "plane_wave": TOL_PLANE_WAVE,
        }),
        checks,
        csv: Some(csv_bytes(&rows)?),
    })
}
