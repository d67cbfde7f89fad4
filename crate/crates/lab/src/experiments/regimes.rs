//! Scan over exponent pairs, symbol classes and grid sizes.

use jaclab::dyadic::DyadicCube;
use jaclab::lowerbound::{bmo_lower, holder_lower, lr_lower_pipeline};
use jaclab::norms::{distance_to_constants_lr, generate_symbol, opnorm_lower, opnorm_upper_split};
use jaclab::ExponentTriple;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::{ExperimentConfig, RegimeCase};
use crate::error::CliError;
use crate::report::{csv_bytes, Check, Outcome};

pub const HOLDER_DRIFT: f64 = 0.10;
pub const SLOPE_TOLERANCE: f64 = 0.20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `p = q`
    Bmo,
    /// `p < q ≤ p*`
    Holder,
    /// `q > p*`
    ConstantOnly,
    /// `p > q`
    Lr,
}

pub fn classify(t: &ExponentTriple) -> Regime {
    if t.p == t.q {
        Regime::Bmo
    } else if t.p > t.q {
        Regime::Lr
    } else if t.is_constant_regime() {
        Regime::ConstantOnly
    } else {
        Regime::Holder
    }
}

#[derive(Debug, Clone, Serialize)]
struct Row {
    case: usize,
    p: f64,
    q: f64,
    regime: Regime,
    alpha: Option<f64>,
    class: String,
    n: usize,
    h: f64,
    opnorm_lower: f64,
    lower_kind: &'static str,
    lower: f64,
    envelope: Option<f64>,
    lr_distance: Option<f64>,
    k: Option<f64>,
    k_prime: Option<f64>,
    /// log–log slope against `h` from the previous grid of the same case
    slope_opnorm_vs_h: Option<f64>,
    slope_lower_vs_h: Option<f64>,
}

fn evaluate(cfg: &ExperimentConfig, index: usize, case: &RegimeCase, n: usize) -> Result<Row, CliError> {
    let grid = cfg.grid.with_n(n)?;
    let b = generate_symbol(&case.symbol, &grid)?;
    let t = ExponentTriple::new(case.p, case.q)?;
    let regime = classify(&t);
    let backend = cfg.backend;
    let opnorm = opnorm_lower(&b, case.p, case.q, backend, &cfg.search)?.value;
    let (mut envelope, mut lr_distance, mut k, mut k_prime) = (None, None, None, None);
    let (lower_kind, lower) = match regime {
        Regime::Bmo => ("bmo_lower", bmo_lower(&b, case.p, backend)?.value),
        Regime::Holder | Regime::ConstantOnly => ("holder_lower", holder_lower(&b, case.p, case.q, backend)?.value),
        Regime::Lr => {
            let rep = lr_lower_pipeline(&b, &DyadicCube::whole_grid(&grid), case.p, case.q, cfg.samples, cfg.seed, backend)?;
            let lr = distance_to_constants_lr(&b, rep.r)?;
            let env = opnorm_upper_split(&b.map(|z| z - lr.c), case.p, case.q, rep.r, backend)?.value;
            envelope = Some(env);
            lr_distance = Some(lr.dist);
            k = (rep.certified_lb > 0.0).then(|| lr.dist / rep.certified_lb);
            k_prime = (env > 0.0).then(|| lr.dist / env);
            ("pipeline", rep.certified_lb)
        }
    };
    Ok(Row {
        case: index,
        p: case.p,
        q: case.q,
        regime,
        alpha: t.alpha,
        class: case.symbol.label(),
        n,
        h: grid.spacing(),
        opnorm_lower: opnorm,
        lower_kind,
        lower,
        envelope,
        lr_distance,
        k,
        k_prime,
        slope_opnorm_vs_h: None,
        slope_lower_vs_h: None,
    })
}

fn slope(a: f64, b: f64, ha: f64, hb: f64) -> Option<f64> {
    (a > 0.0 && b > 0.0).then(|| (b / a).ln() / (hb / ha).ln())
}

fn case_checks(case: &RegimeCase, rows: &[Row], checks: &mut Vec<Check>) {
    let i = rows[0].case;
    let last = rows.last().expect("at least one grid");
    if matches!(case.symbol.class, jaclab::norms::SymbolClass::Constant { .. }) {
        let worst = rows
            .iter()
            .flat_map(|r| [r.opnorm_lower, r.lower, r.envelope.unwrap_or(0.0), r.lr_distance.unwrap_or(0.0)])
            .fold(0.0, |m: f64, v| m.max(v.abs()));
        checks.push(Check::le(format!("case{i}_constant_zero"), worst, 0.0));
        return;
    }
    match last.regime {
        Regime::Holder if rows.len() >= 2 => {
            let prev = &rows[rows.len() - 2];
            checks.push(Check::le(format!("case{i}_holder_drift"), (last.lower / prev.lower - 1.0).abs(), HOLDER_DRIFT));
        }
        Regime::ConstantOnly if rows.len() >= 2 => {
            let rate = last.alpha.expect("p < q") - 1.0;
            let observed = last.slope_lower_vs_h.map_or(f64::NAN, |s| -s);
            checks.push(Check::le(
                format!("case{i}_divergence_rate"),
                (observed - rate).abs() / rate.abs(),
                SLOPE_TOLERANCE,
            ));
        }
        Regime::Lr => {
            for r in rows {
                let env = r.envelope.unwrap_or(f64::NAN);
                let n = r.n;
                checks.push(Check::ge(format!("case{i}_n{n}_certified_lb_positive"), r.lower, f64::MIN_POSITIVE));
                checks.push(Check::le(format!("case{i}_n{n}_lb_below_envelope"), r.lower, env));
                checks.push(Check::le(format!("case{i}_n{n}_opnorm_below_envelope"), r.opnorm_lower, env));
                checks.push(Check::holds(
                    format!("case{i}_n{n}_sandwich_finite"),
                    r.k.is_some_and(f64::is_finite) && r.k_prime.is_some_and(f64::is_finite),
                ));
            }
        }
        _ => {}
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let points: Vec<(usize, usize)> =
        (0..cfg.sweep.cases.len()).flat_map(|c| cfg.sweep.ns.iter().map(move |&n| (c, n))).collect();
    let mut rows = points
        .par_iter()
        .map(|&(c, n)| evaluate(cfg, c, &cfg.sweep.cases[c], n))
        .collect::<Result<Vec<_>, CliError>>()?;
    rows.sort_by_key(|r| (r.case, r.n));
    for i in 1..rows.len() {
        if rows[i].case == rows[i - 1].case {
            let (a, b) = (&rows[i - 1], &rows[i]);
            let (so, sl) = (slope(a.opnorm_lower, b.opnorm_lower, a.h, b.h), slope(a.lower, b.lower, a.h, b.h));
            rows[i].slope_opnorm_vs_h = so;
            rows[i].slope_lower_vs_h = sl;
        }
    }
    let mut checks = Vec::new();
    for (i, case) in cfg.sweep.cases.iter().enumerate() {
        let case_rows: Vec<Row> = rows.iter().filter(|r| r.case == i).cloned().collect();
        case_checks(case, &case_rows, &mut checks);
    }
    Ok(Outcome {
        results: json!({"rows": rows.len(), "ns": cfg.sweep.ns, "cases": cfg.sweep.cases.len()}),
        constants: json!({
            "holder_drift": HOLDER_DRIFT,
            "slope_tolerance": SLOPE_TOLERANCE,
            "pipeline_threshold": jaclab::lowerbound::PIPELINE_THRESHOLD,
        }),
        checks,
        csv: Some(csv_bytes(&rows)?),
    })
}
