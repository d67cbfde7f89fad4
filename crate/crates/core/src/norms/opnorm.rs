use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::field::{conjugate, lp_norm, ComplexField, GridSpec};
use crate::operators::{beurling, beurling_adjoint, BeurlingBackend, Commutator};

/// Random restarts and ascent steps for the operator-norm search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SearchBudget {
    pub restarts: usize,
    pub steps: usize,
    /// stop a restart once the ratio improves by less than this fraction
    pub tol: f64,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { restarts: 8, steps: 30, tol: 1e-3, seed: 0 }
    }
}

impl SearchBudget {
    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Best ratio `‖Tv‖_q / ‖v‖_p` found, with the input that attains it.
#[derive(Debug, Clone, PartialEq)]
pub struct OpNormEstimate {
    pub value: f64,
    pub witness_v: ComplexField,
    pub p: f64,
    pub q: f64,
    /// ascent steps summed over restarts
    pub iterations: usize,
    pub restarts: usize,
    /// best ratio reached by each restart
    pub history: Vec<f64>,
}

/// Element of the dual space norming `x ∈ L^s`, up to a positive factor.
fn norming(x: &[Complex64], s: f64) -> Vec<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let phase = |z: &Complex64| if *z == zero { zero } else { z / z.norm() };
    if s.is_infinite() {
        let mut best = 0;
        for (i, z) in x.iter().enumerate() {
            if z.norm() > x[best].norm() {
                best = i;
            }
        }
        let mut out = vec![zero; x.len()];
        out[best] = phase(&x[best]);
        out
    } else if s == 1.0 {
        x.iter().map(phase).collect()
    } else {
        x.iter().map(|z| phase(z) * z.norm().powf(s - 1.0)).collect()
    }
}

fn check_exponent(s: f64) -> Result<()> {
    if s.is_nan() || s < 1.0 {
        return Err(LabError::InvalidExponent(format!("exponent {s} must be at least 1")));
    }
    Ok(())
}

/// Nonlinear power iteration for `sup ‖Tv‖_q / ‖v‖_p`.
///
/// Each step maps `v` to the `L^{p′}` norming element of `T*J_q(Tv)`, where
/// `J_q` picks the `L^{q′}` functional norming `Tv`. Restart `k` starts from
/// complex Gaussian noise seeded with `seed + k`; restarts run in parallel and
/// the maximum is taken in restart order, so the result does not depend on
/// scheduling.
pub fn ascent<F, G>(grid: &GridSpec, p: f64, q: f64, budget: &SearchBudget, apply: F, adjoint: G) -> Result<OpNormEstimate>
where
    F: Fn(&ComplexField) -> Result<ComplexField> + Sync,
    G: Fn(&ComplexField) -> Result<ComplexField> + Sync,
{
    check_exponent(p)?;
    check_exponent(q)?;
    if budget.restarts == 0 {
        return Err(LabError::InvalidParameter("search budget needs at least one restart".into()));
    }
    let p_dual = conjugate(p);
    let run = |k: usize| -> Result<(f64, ComplexField, usize)> {
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_add(k as u64));
        let mut v = ComplexField::from_fn(*grid, |_| {
            Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
        });
        let norm = lp_norm(&v, p)?;
        v = v.scale(Complex64::new(1.0 / norm, 0.0));
        let (mut best, mut best_v, mut steps) = (0.0f64, v.clone(), 0);
        for step in 0..budget.steps.max(1) {
            steps += 1;
            let w = apply(&v)?;
            let ratio = lp_norm(&w, q)? / lp_norm(&v, p)?;
            let improved = ratio > best * (1.0 + budget.tol);
            if ratio > best {
                best = ratio;
                best_v = v.clone();
            }
            if (step > 0 && !improved) || ratio == 0.0 || step + 1 == budget.steps {
                break;
            }
            let y = ComplexField::new(*grid, norming(w.samples(), q))?;
            let z = adjoint(&y)?;
            if z.max_abs() == 0.0 {
                break;
            }
            let next = ComplexField::new(*grid, norming(z.samples(), p_dual))?;
            let norm = lp_norm(&next, p)?;
            v = next.scale(Complex64::new(1.0 / norm, 0.0));
        }
        Ok((best, best_v, steps))
    };
    let results: Vec<(f64, ComplexField, usize)> =
        (0..budget.restarts).into_par_iter().map(run).collect::<Result<_>>()?;
    let mut winner = 0;
    for (k, r) in results.iter().enumerate() {
        if r.0 > results[winner].0 {
            winner = k;
        }
    }
    Ok(OpNormEstimate {
        value: results[winner].0,
        witness_v: results[winner].1.clone(),
        p,
        q,
        iterations: results.iter().map(|r| r.2).sum(),
        restarts: budget.restarts,
        history: results.iter().map(|r| r.0).collect(),
    })
}

/// Lower estimate of `‖[b,S]‖_{L^p→L^q}` by witness search.
pub fn opnorm_lower(
    b: &ComplexField,
    p: f64,
    q: f64,
    backend: BeurlingBackend,
    search: &SearchBudget,
) -> Result<OpNormEstimate> {
    let t = Commutator::new(b, backend)?;
    ascent(b.grid(), p, q, search, |v| t.apply(v), |y| t.apply_adjoint(y))
}

/// Probe restarts behind `beurling_norm_estimate`.
const PROBE: SearchBudget = SearchBudget { restarts: 4, steps: 30, tol: 1e-3, seed: 0x5eed };

/// Envelope for `‖S‖_{L^s→L^s}`: the larger of a witness search on the grid
/// and `max(s, s′) − 1`, the conjectured continuous norm.
pub fn beurling_norm_estimate(grid: &GridSpec, s: f64, backend: BeurlingBackend) -> Result<f64> {
    check_exponent(s)?;
    backend.check_grid(grid)?;
    let star = s.max(conjugate(s));
    if star.is_infinite() {
        return Err(LabError::InvalidExponent("the Beurling transform is unbounded at s = 1, ∞".into()));
    }
    let probe = ascent(grid, s, s, &PROBE, |v| beurling(v, backend), |y| beurling_adjoint(y, backend))?;
    Ok(probe.value.max(star - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperEnvelope {
    /// `‖b‖_r (C_p + C_q)`
    pub value: f64,
    pub b_lr: f64,
    pub c_p: f64,
    pub c_q: f64,
}

/// `‖b‖_r (C_p + C_q)` from `‖bSf‖_q + ‖S(bf)‖_q ≤ ‖b‖_r (C_p + C_q) ‖f‖_p`,
/// valid for `p > q` with `1/q = 1/r + 1/p`.
pub fn opnorm_upper_split(
    b: &ComplexField,
    p: f64,
    q: f64,
    r: f64,
    backend: BeurlingBackend,
) -> Result<UpperEnvelope> {
    check_exponent(q)?;
    if !(p > q) {
        return Err(LabError::ExponentMismatch(format!("the split envelope needs p > q, got p = {p}, q = {q}")));
    }
    let mismatch = 1.0 / q - 1.0 / r - 1.0 / p;
    if !(mismatch.abs() <= 1e-12) {
        return Err(LabError::ExponentMismatch(format!("1/q − 1/r − 1/p = {mismatch:e}")));
    }
    let b_lr = lp_norm(b, r)?;
    let c_p = beurling_norm_estimate(b.grid(), p, backend)?;
    let c_q = beurling_norm_estimate(b.grid(), q, backend)?;
    Ok(UpperEnvelope { value: b_lr * (c_p + c_q), b_lr, c_p, c_q })
}
