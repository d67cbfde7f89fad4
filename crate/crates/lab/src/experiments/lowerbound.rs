//! The random-sign pipeline sandwiched between the `L^r` distance to
//! constants and the split upper envelope.

use jaclab::dyadic::DyadicCube;
use jaclab::lowerbound::lr_lower_pipeline;
use jaclab::norms::{distance_to_constants_lr, generate_symbol, opnorm_upper_split};
use serde::Serialize;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::report::{csv_bytes, Check, Outcome};

pub const TOL_IDENTITY: f64 = 1e-10;
pub const MC_STDERRS: f64 = 3.0;
pub const HOLDER_FACTOR_LIMIT: f64 = 10.0;

#[derive(Serialize)]
struct Row {
    sample: usize,
    value_re: f64,
    value_im: f64,
    ratio_1: f64,
    ratio_2: f64,
    ratio_3: f64,
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let grid = cfg.grid.spec()?;
    let b = generate_symbol(&cfg.symbol, &grid)?;
    let (p, q) = (cfg.exponents.p, cfg.exponents.q);
    let q0 = DyadicCube::whole_grid(&grid);
    let report = lr_lower_pipeline(&b, &q0, p, q, cfg.samples, cfg.seed, cfg.backend)?;
    let lr = distance_to_constants_lr(&b, report.r)?;

    let constant = report.target == 0.0 && report.lr_local == 0.0;
    let (envelope, k, k_prime, checks) = if constant {
        let checks = vec![
            Check::le("constant_certified_lb", report.certified_lb.abs(), 0.0),
            Check::le("constant_mc_mean", report.mc_mean.abs(), 0.0),
            Check::le("constant_target", report.target.abs(), 0.0),
            Check::le("constant_lr_distance", lr.dist, 0.0),
        ];
        (None, None, None, checks)
    } else {
        let centred = b.map(|z| z - lr.c);
        let env = opnorm_upper_split(&centred, p, q, report.r, cfg.backend)?;
        let lb = report.certified_lb;
        let k = (lb > 0.0).then(|| lr.dist / lb);
        let k_prime = (env.value > 0.0).then(|| lr.dist / env.value);
        let checks = vec![
            Check::le("identity_residual", report.identity_residual, TOL_IDENTITY),
            Check::le(
                "mc_mean_vs_target",
                (report.mc_mean - report.target).abs(),
                MC_STDERRS * report.mc_stderr,
            ),
            Check::ge("certified_lb_positive", lb, f64::MIN_POSITIVE),
            Check::le("certified_lb_below_envelope", lb, env.value),
            Check::le("holder_factor_p", report.holder_factor_p, HOLDER_FACTOR_LIMIT),
            Check::le("holder_factor_q_dual", report.holder_factor_q_dual, HOLDER_FACTOR_LIMIT),
            Check::holds("sandwich_constants_finite", k.is_some_and(f64::is_finite) && k_prime.is_some_and(f64::is_finite)),
        ];
        (Some(env), k, k_prime, checks)
    };

    let rows: Vec<Row> = report
        .per_sample
        .iter()
        .map(|s| Row {
            sample: s.sample,
            value_re: s.value_re,
            value_im: s.value_im,
            ratio_1: s.ratios[0],
            ratio_2: s.ratios[1],
            ratio_3: s.ratios[2],
        })
        .collect();
    Ok(Outcome {
        results: json!({
            "symbol": cfg.symbol.label(),
            "n": grid.n(),
            "pipeline": report,
            "lr_distance": {"c_re": lr.c.re, "c_im": lr.c.im, "dist": lr.dist},
            "envelope": envelope,
            "k": k,
            "k_prime": k_prime,
        }),
        constants: json!({
            "threshold": report.threshold,
            "identity_residual": TOL_IDENTITY,
            "mc_stderrs": MC_STDERRS,
            "holder_factor_limit": HOLDER_FACTOR_LIMIT,
        }),
        checks,
        csv: Some(csv_bytes(&rows)?),
    })
}
