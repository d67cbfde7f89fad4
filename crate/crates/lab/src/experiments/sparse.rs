//! Sparse decomposition statistics over the symbol corpus and random families.

use jaclab::dyadic::{dual_weights, sparse_dominate, sparse_lp_ratio, verify_domination, DyadicCube, SparseFamily};
use jaclab::field::conjugate;
use jaclab::norms::{generate_symbol, standard_corpus, SymbolClass, SymbolSpec};
use jaclab::{ComplexField, GridSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::report::{csv_bytes, Check, Outcome};

pub const TOL_DUAL_WEIGHTS: f64 = 1e-12;
pub const LP_RATIO_UPPER: f64 = 10.0;
pub const PACKING_LIMIT: f64 = 2.0;
pub const DUAL_EXPONENTS: [f64; 3] = [4.0 / 3.0, 2.0, 4.0];
const RANDOM_WINDOWS: [Option<f64>; 4] = [None, Some(0.5), Some(1.0), Some(1.5)];

/// `C_emp` bound `4Λ + 1` for threshold `Λ` in the plane.
pub fn domination_limit(threshold: f64) -> f64 {
    4.0 * threshold + 1.0
}

#[derive(Debug, Serialize)]
struct Row {
    symbol: String,
    family_size: usize,
    depth: u32,
    disjoint: bool,
    all_dyadic: bool,
    min_major_fraction: f64,
    max_packing: f64,
    c_emp: f64,
    dual_residual: f64,
}

/// Largest relative residual of `Σ|Q|λ^{r′} = 1` and `Σ|Q|λ a = A^{1/r}`
/// over the test exponents; zero for an all-constant family.
fn dual_residual(family: &SparseFamily) -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for r in DUAL_EXPONENTS {
        let lambda = match dual_weights(family, r) {
            Ok(l) => l,
            Err(jaclab::LabError::AllZeroOscillation) => return Ok(0.0),
            Err(e) => return Err(e.into()),
        };
        let r_dual = conjugate(r);
        let mut mass = 0.0;
        let mut pairing = 0.0;
        let mut total = 0.0;
        for (i, c) in family.cubes.iter().enumerate() {
            let area = family.area(i);
            mass += area * lambda[i].powf(r_dual);
            pairing += area * lambda[i] * c.oscillation;
            total += area * c.oscillation.powf(r);
        }
        let expect = total.powf(1.0 / r);
        worst = worst.max((mass - 1.0).abs()).max((pairing - expect).abs() / expect);
    }
    Ok(worst)
}

fn analyse(label: String, b: &ComplexField, threshold: f64) -> Result<Row, CliError> {
    let family = sparse_dominate(b, DyadicCube::whole_grid(b.grid()), threshold)?;
    let inv = family.invariants();
    let (_, c_emp) = verify_domination(b, &family);
    Ok(Row {
        symbol: label,
        family_size: family.len(),
        depth: inv.depth,
        disjoint: inv.disjoint,
        all_dyadic: inv.all_dyadic,
        min_major_fraction: inv.min_major_fraction,
        max_packing: inv.max_packing,
        c_emp,
        dual_residual: dual_residual(&family)?,
    })
}

/// Extreme `sparse_lp_ratio` values over one random family with random weights.
fn random_family(grid: &GridSpec, threshold: f64, seed: u64, k: usize) -> Result<Vec<f64>, CliError> {
    let spec = SymbolSpec {
        window: RANDOM_WINDOWS[k % RANDOM_WINDOWS.len()],
        ..SymbolSpec::new(SymbolClass::Random { seed: seed.wrapping_add(k as u64) })
    };
    let b = generate_symbol(&spec, grid)?;
    let family = sparse_dominate(&b, DyadicCube::whole_grid(grid), threshold)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
    let lambda: Vec<f64> = (0..family.len()).map(|_| rng.random_range(0.0..1.0) + 1e-3).collect();
    Ok(DUAL_EXPONENTS.iter().map(|&p| sparse_lp_ratio(&family, &lambda, p)).collect())
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let grid = cfg.grid.spec()?;
    let lambda = cfg.threshold;
    let mut specs = standard_corpus();
    specs.push(cfg.symbol.clone());
    let rows = specs
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let label = if i + 1 == specs.len() { format!("config:{}", s.label()) } else { s.label() };
            analyse(label, &generate_symbol(s, &grid)?, lambda)
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let ratios = (0..cfg.samples)
        .into_par_iter()
        .map(|k| random_family(&grid, lambda, cfg.seed, k))
        .collect::<Result<Vec<_>, CliError>>()?;
    let (mut lo, mut hi) = ([f64::INFINITY; 3], [0.0f64; 3]);
    for r in &ratios {
        for j in 0..3 {
            lo[j] = lo[j].min(r[j]);
            hi[j] = hi[j].max(r[j]);
        }
    }

    let constant = generate_symbol(&SymbolSpec::new(SymbolClass::Constant { value: 1.0 }), &grid)?;
    let constant_size = sparse_dominate(&constant, DyadicCube::whole_grid(&grid), lambda)?.len();

    let min_major = rows.iter().map(|r| r.min_major_fraction).fold(1.0, f64::min);
    let max_packing = rows.iter().map(|r| r.max_packing).fold(0.0, f64::max);
    let c_emp = rows.iter().map(|r| r.c_emp).fold(0.0, f64::max);
    let dual = rows.iter().map(|r| r.dual_residual).fold(0.0, f64::max);
    let mut checks = vec![
        Check::holds("disjoint_major_subsets", rows.iter().all(|r| r.disjoint)),
        Check::holds("dyadic_membership", rows.iter().all(|r| r.all_dyadic)),
        Check::ge("major_fraction", min_major, 1.0 - 1.0 / lambda),
        Check::le("carleson_packing", max_packing, PACKING_LIMIT),
        Check::le("domination_constant", c_emp, domination_limit(lambda)),
        Check::le("dual_weight_residual", dual, TOL_DUAL_WEIGHTS),
        Check::le("constant_family_size", constant_size as f64, 1.0),
    ];
    for (j, p) in DUAL_EXPONENTS.iter().enumerate() {
        checks.push(Check::ge(format!("lp_ratio_min_p{p:.4}"), lo[j], 2f64.powf(-1.0 / p)));
        checks.push(Check::le(format!("lp_ratio_max_p{p:.4}"), hi[j], LP_RATIO_UPPER));
    }
    Ok(Outcome {
        results: json!({
            "n": grid.n(),
            "threshold": lambda,
            "symbols": rows.len(),
            "random_families": cfg.samples,
            "lp_ratio": DUAL_EXPONENTS.iter().enumerate().map(|(j, p)| json!({"p": p, "min": lo[j], "max": hi[j]})).collect::<Vec<_>>(),
            "min_major_fraction": min_major,
            "max_packing": max_packing,
            "c_emp": c_emp,
            "dual_residual": dual,
        }),
        constants: json!({
            "threshold": lambda,
            "domination_limit": domination_limit(lambda),
            "packing_limit": PACKING_LIMIT,
            "dual_weights": TOL_DUAL_WEIGHTS,
            "lp_ratio_upper": LP_RATIO_UPPER,
        }),
        checks,
        csv: Some(csv_bytes(&rows)?),
    })
}
