use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::signs::sign_row;
use super::witness::{witnesses_on, WitnessTriple};
use crate::dyadic::{block, centered_values, dual_weights, sparse_dominate, DyadicCube, SparseFamily};
use crate::error::{LabError, Result};
use crate::field::{conjugate, lp_norm_slice, ComplexField};
use crate::operators::{BeurlingBackend, BlockCommutator};

/// Stopping threshold of the sparse decomposition used by the pipeline.
pub const PIPELINE_THRESHOLD: f64 = 2.0;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// One sign sample: `Σᵢ ∫ Gⁱ [b,S] Fⁱ` and the three realised ratios
/// `|∫ Gⁱ [b,S] Fⁱ| / (‖Gⁱ‖_{q′} ‖Fⁱ‖_p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub sample: usize,
    pub value_re: f64,
    pub value_im: f64,
    pub ratios: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub backend: BeurlingBackend,
    pub samples: usize,
    pub seed: u64,
    pub threshold: f64,
    pub family_size: usize,
    pub depth: u32,
    /// `‖b − ⟨b⟩_{Q₀}‖_{L^r(Q₀)}`
    pub lr_local: f64,
    /// best realised ratio over samples and `i`
    pub certified_lb: f64,
    pub mc_mean: f64,
    pub mc_mean_im: f64,
    pub mc_stderr: f64,
    /// `Σ_Q λ_Q ∫_Q |b − ⟨b⟩_Q|`
    pub target: f64,
    /// the exact sign expectation `Σ_Q λ_Q Σᵢ ∫ g_Qⁱ [b,S] f_Qⁱ`
    pub expectation: f64,
    /// `|expectation − target| / target`
    pub identity_residual: f64,
    /// `‖Σ_Q λ_Q^{r′/p} 1_Q‖_p`
    pub holder_factor_p: f64,
    /// `‖Σ_Q λ_Q^{r′/q′} 1_Q‖_{q′}`
    pub holder_factor_q_dual: f64,
    /// `lr_local / certified_lb`, when the bound is positive
    pub k_constant: Option<f64>,
    #[serde(skip)]
    pub per_sample: Vec<SampleRecord>,
}

impl PipelineReport {
    /// Mean of the real sample values over samples `range`.
    pub fn batch_mean(&self, range: std::ops::Range<usize>) -> f64 {
        let n = range.len() as f64;
        self.per_sample[range].iter().map(|s| s.value_re).sum::<f64>() / n
    }
}

fn check_exponents(p: f64, q: f64) -> Result<f64> {
    for s in [p, q] {
        if !(s > 1.0 && s.is_finite()) {
            return Err(LabError::InvalidExponent(format!("exponent {s} must lie in (1, ∞)")));
        }
    }
    if !(p > q) {
        return Err(LabError::ExponentMismatch(format!("the pipeline needs p > q, got p = {p}, q = {q}")));
    }
    Ok(1.0 / (1.0 / q - 1.0 / p))
}

/// Witness data of one cube placed inside the root block.
struct Placed {
    witness: WitnessTriple,
    /// root-block indices of the cube's cells, in the cube's row-major order
    cells: Vec<usize>,
}

fn weighted_norm(family: &SparseFamily, weights: &[f64], s: f64) -> Result<f64> {
    let sum = family.weighted_indicator_sum(|i| weights[i]);
    let values: Vec<Complex64> = sum.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    lp_norm_slice(&values, family.grid.cell_area(), s)
}

/// Certified lower bound for `‖[b,S]‖_{L^p→L^q}`, `p > q`, on the cube `Q₀`.
///
/// Steps: sparse decomposition of `b − ⟨b⟩_{Q₀}`; dualising weights for
/// `1/r = 1/q − 1/p`; witnesses on every cube; for each sign sample `ε`,
/// `Fⁱ = Σ ε_Q λ_Q^{r′/p} f_Qⁱ` and `Gⁱ = Σ ε_Q λ_Q^{r′/q′} g_Qⁱ`, paired
/// through the commutator restricted to `Q₀`. The pairings are bilinear in
/// `ε`, so they are read off a precomputed matrix of cube-to-cube pairings.
pub fn lr_lower_pipeline(
    b: &ComplexField,
    q0: &DyadicCube,
    p: f64,
    q: f64,
    samples: usize,
    seed: u64,
    backend: BeurlingBackend,
) -> Result<PipelineReport> {
    let r = check_exponents(p, q)?;
    let grid = *b.grid();
    if grid.periodic() || !backend.is_quadrature() {
        return Err(LabError::BackendGridMismatch { backend: backend.name(), grid: grid.kind() });
    }
    if samples == 0 {
        return Err(LabError::InvalidParameter("need at least one sign sample".into()));
    }
    let root = q0.square();
    root.check(&grid)?;
    let cell = grid.cell_area();
    let (r_dual, q_dual) = (conjugate(r), conjugate(q));

    let root_block = block(b, &root);
    let (_, dev) = centered_values(&root_block);
    let lr_local = lp_norm_slice(&dev, cell, r)?;
    let family = sparse_dominate(b, *q0, PIPELINE_THRESHOLD)?;
    let mut report = PipelineReport {
        p,
        q,
        r,
        backend,
        samples,
        seed,
        threshold: PIPELINE_THRESHOLD,
        family_size: family.len(),
        depth: family.depth(),
        lr_local,
        certified_lb: 0.0,
        mc_mean: 0.0,
        mc_mean_im: 0.0,
        mc_stderr: 0.0,
        target: 0.0,
        expectation: 0.0,
        identity_residual: 0.0,
        holder_factor_p: 0.0,
        holder_factor_q_dual: 0.0,
        k_constant: None,
        per_sample: (0..samples)
            .map(|sample| SampleRecord { sample, value_re: 0.0, value_im: 0.0, ratios: [0.0; 3] })
            .collect(),
    };
    let lambda = match dual_weights(&family, r) {
        Ok(l) => l,
        Err(LabError::AllZeroOscillation) => return Ok(report),
        Err(e) => return Err(e),
    };
    let cf: Vec<f64> = lambda.iter().map(|l| l.powf(r_dual / p)).collect();
    let cg: Vec<f64> = lambda.iter().map(|l| l.powf(r_dual / q_dual)).collect();
    report.holder_factor_p = weighted_norm(&family, &cf, p)?;
    report.holder_factor_q_dual = weighted_norm(&family, &cg, q_dual)?;
    report.target =
        family.cubes.iter().enumerate().map(|(i, c)| lambda[i] * c.oscillation * family.area(i)).sum();

    let m0 = root.side;
    let placed: Vec<Placed> = family
        .cubes
        .iter()
        .map(|c| {
            let sq = c.cube.square();
            let (dx, dy) = (sq.x0 - root.x0, sq.y0 - root.y0);
            let cells = (0..sq.side * sq.side).map(|k| (dy + k / sq.side) * m0 + dx + k % sq.side).collect();
            Ok(Placed { witness: witnesses_on(b, sq)?, cells })
        })
        .collect::<Result<_>>()?;
    let op = BlockCommutator::new(m0, &root_block, backend);
    let k = family.len();
    // gram[i][a * k + c] = ∫ g_aⁱ [b,S] f_cⁱ
    let gram: Vec<Vec<Complex64>> = (0..3)
        .map(|i| {
            let columns: Vec<Vec<Complex64>> = placed
                .par_iter()
                .map(|pc| {
                    let mut f = vec![ZERO; m0 * m0];
                    for (v, &j) in pc.witness.f[i].iter().zip(&pc.cells) {
                        f[j] = *v;
                    }
                    let tf = op.apply(&f, false);
                    placed
                        .iter()
                        .map(|pa| {
                            cell * pa.witness.g[i].iter().zip(&pa.cells).map(|(g, &j)| g * tf[j]).sum::<Complex64>()
                        })
                        .collect()
                })
                .collect();
            let mut out = vec![ZERO; k * k];
            for (c, col) in columns.iter().enumerate() {
                for (a, v) in col.iter().enumerate() {
                    out[a * k + c] = *v;
                }
            }
            out
        })
        .collect();
    let expectation: Complex64 =
        (0..k).map(|a| lambda[a] * (0..3).map(|i| gram[i][a * k + a]).sum::<Complex64>()).sum();
    report.expectation = expectation.re;
    report.identity_residual = (expectation - report.target).norm() / report.target;

    let records: Vec<SampleRecord> = (0..samples)
        .into_par_iter()
        .map(|s| -> Result<SampleRecord> {
            let eps: Vec<f64> = sign_row(k, seed, s as u64).into_iter().map(f64::from).collect();
            let mut total = ZERO;
            let mut ratios = [0.0; 3];
            for i in 0..3 {
                let mut value = ZERO;
                for a in 0..k {
                    let row = &gram[i][a * k..(a + 1) * k];
                    let inner: Complex64 = (0..k).map(|c| row[c] * (eps[c] * cf[c])).sum();
                    value += inner * (eps[a] * cg[a]);
                }
                let mut f = vec![ZERO; m0 * m0];
                let mut g = vec![ZERO; m0 * m0];
                for (a, pc) in placed.iter().enumerate() {
                    let (wf, wg) = (eps[a] * cf[a], eps[a] * cg[a]);
                    for ((fv, gv), &j) in pc.witness.f[i].iter().zip(&pc.witness.g[i]).zip(&pc.cells) {
                        f[j] += fv * wf;
                        g[j] += gv * wg;
                    }
                }
                let den = lp_norm_slice(&f, cell, p)? * lp_norm_slice(&g, cell, q_dual)?;
                ratios[i] = if den > 0.0 { value.norm() / den } else { 0.0 };
                total += value;
            }
            Ok(SampleRecord { sample: s, value_re: total.re, value_im: total.im, ratios })
        })
        .collect::<Result<_>>()?;

    let m = samples as f64;
    report.mc_mean = records.iter().map(|s| s.value_re).sum::<f64>() / m;
    report.mc_mean_im = records.iter().map(|s| s.value_im).sum::<f64>() / m;
    report.mc_stderr = if samples > 1 {
        let var = records.iter().map(|s| (s.value_re - report.mc_mean).powi(2)).sum::<f64>() / (m - 1.0);
        (var / m).sqrt()
    } else {
        0.0
    };
    report.certified_lb = records.iter().flat_map(|s| s.ratios).fold(0.0, f64::max);
    report.k_constant = (report.certified_lb > 0.0).then(|| lr_local / report.certified_lb);
    report.per_sample = records;
    Ok(report)
}
