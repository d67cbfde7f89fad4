//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use jaclab::dyadic::DyadicCube;
use jaclab::lowerbound::{crw_identity_residual, lr_lower_pipeline};
use jaclab::norms::{generate_symbol, standard_corpus, BumpShape, SymbolClass, SymbolSpec};
use jaclab::operators::beurling;
use jaclab::{BeurlingBackend, Complex64, ComplexField, GridSpec};
use jaclab_cli::report::loglog_slope;
use jaclab_cli::{Experiment, ExperimentConfig, Outcome};

const FFT: BeurlingBackend = BeurlingBackend::QuadratureFft;

struct Verdict {
    pass: bool,
    detail: String,
}

fn experiment(exp: Experiment, sets: &[&str]) -> Outcome {
    let sets: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
    let config = ExperimentConfig::resolve(exp, None, &sets).expect("valid config");
    jaclab_cli::run(&config).expect("experiment runs")
}

/// Passes when every named check passed; the detail lists their values.
fn from_checks(outcome: &Outcome, names: &[&str]) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for name in names {
        match outcome.check(name) {
            Some(c) => {
                pass &= c.pass;
                parts.push(format!("{name}={:.3e}", c.value));
            }
            None => {
                pass = false;
                parts.push(format!("{name}=missing"));
            }
        }
    }
    Verdict { pass, detail: parts.join(" ") }
}

fn all_checks(outcome: &Outcome) -> Verdict {
    let failed: Vec<&str> = outcome.failed_checks().map(|c| c.name.as_str()).collect();
    Verdict {
        pass: failed.is_empty(),
        detail: if failed.is_empty() {
            format!("{} checks pass", outcome.checks.len())
        } else {
            format!("failed: {}", failed.join(", "))
        },
    }
}

fn criterion_1() -> Verdict {
    let o = experiment(Experiment::Identities, &[]);
    from_checks(&o, &["intertwining", "isometry", "adjoint_inverse", "polarization"])
}

fn criterion_2() -> Verdict {
    let o = experiment(Experiment::Identities, &["samples=20"]);
    from_checks(&o, &["jacobian_identity", "jacobian_integral"])
}

/// Max error of `S 1_B` against `0` on `|z| ≤ ½` and `−1/z²` on `1.5 ≤ |z| ≤ 1.9`.
fn disc_error(n: usize) -> f64 {
    let g = GridSpec::centered(n, 4.0).unwrap();
    let ind = ComplexField::from_fn(g, |z| Complex64::new(if z.norm() < 1.0 { 1.0 } else { 0.0 }, 0.0));
    let s = beurling(&ind, FFT).unwrap();
    g.nodes()
        .zip(s.samples())
        .filter_map(|(z, v)| {
            let r = z.norm();
            if r <= 0.5 {
                Some(v.norm())
            } else if (1.5..=1.9).contains(&r) {
                Some((v + 1.0 / (z * z)).norm())
            } else {
                None
            }
        })
        .fold(0.0, f64::max)
}

fn criterion_3() -> Verdict {
    let ns = [64.0, 128.0, 256.0];
    let errors: Vec<f64> = ns.iter().map(|&n| disc_error(n as usize)).collect();
    let order = -loglog_slope(&ns, &errors);
    let mut agreement = 0.0f64;
    for n in [32, 64, 128] {
        let g = GridSpec::centered(n, 4.0).unwrap();
        let v = ComplexField::from_fn(g, |z| (-(z * z.conj())).exp() * (z + 0.3));
        let a = beurling(&v, BeurlingBackend::QuadratureDirect).unwrap();
        let b = beurling(&v, FFT).unwrap();
        agreement = agreement.max((&a - &b).max_abs() / v.max_abs());
    }
    Verdict {
        pass: order >= 0.8 && agreement <= 1e-12,
        detail: format!(
            "errors {:.3e} {:.3e} {:.3e}, order {order:.3} (≥ 0.8), direct vs fft {agreement:.2e} (≤ 1e-12)",
            errors[0], errors[1], errors[2]
        ),
    }
}

fn criterion_4() -> Verdict {
    let g = GridSpec::centered(128, 4.0).unwrap();
    let cubes = DyadicCube::whole_grid(&g).tree(4);
    let mut worst = 0.0f64;
    for spec in standard_corpus() {
        let b = generate_symbol(&spec, &g).unwrap();
        for q in &cubes {
            worst = worst.max(crw_identity_residual(&b, q, FFT).unwrap());
        }
    }
    Verdict {
        pass: worst <= 1e-10,
        detail: format!("{} cubes x 10 symbols, max residual {worst:.2e} (≤ 1e-10)", cubes.len()),
    }
}

fn criterion_5() -> Verdict {
    all_checks(&experiment(Experiment::Sparse, &[]))
}

/// RMS deviation of batch means from `target` for batch size `m`.
fn batch_rms(rep: &jaclab::lowerbound::PipelineReport, m: usize) -> f64 {
    let batches = rep.samples / m;
    let ss: f64 = (0..batches).map(|k| (rep.batch_mean(k * m..(k + 1) * m) - rep.target).powi(2)).sum();
    (ss / batches as f64).sqrt()
}

pub const SLOPE_SAMPLES: usize = 16384;
pub const SLOPE_TOLERANCE: f64 = 0.15;

fn criterion_6() -> Verdict {
    let o = experiment(Experiment::Lowerbound, &["samples=256"]);
    let mc = from_checks(&o, &["mc_mean_vs_target", "identity_residual"]);

    let g = GridSpec::centered(128, 8.0).unwrap();
    let spec = SymbolSpec::new(SymbolClass::LrBump { shape: BumpShape::Gaussian, scale: 1.0, offset: 0.0 });
    let b = generate_symbol(&spec, &g).unwrap();
    let rep = lr_lower_pipeline(&b, &DyadicCube::whole_grid(&g), 4.0, 2.0, SLOPE_SAMPLES, 1, FFT).unwrap();
    let ms = [16.0, 64.0, 256.0, 1024.0];
    let rms: Vec<f64> = ms.iter().map(|&m| batch_rms(&rep, m as usize)).collect();
    let slope = loglog_slope(&ms, &rms);
    Verdict {
        pass: mc.pass && (slope + 0.5).abs() <= SLOPE_TOLERANCE,
        detail: format!("{}; error slope {slope:.3} (−0.5 ± {SLOPE_TOLERANCE})", mc.detail),
    }
}

fn criterion_7() -> Verdict {
    all_checks(&experiment(Experiment::Regimes, &[]))
}

fn criterion_8() -> Verdict {
    let o = experiment(Experiment::Scaling, &[]);
    from_checks(&o, &["homogeneous_drift", "nonhomogeneous_slope"])
}

fn run_binary(exp: &str, threads: usize, out: &Path) -> bool {
    Command::new(env!("CARGO_BIN_EXE_lab"))
        .args([exp, "--out", out.to_str().unwrap(), "--threads", &threads.to_string()])
        .output()
        .map(|o| o.status.code() == Some(0))
        .unwrap_or(false)
}

fn criterion_9() -> Verdict {
    let mut mismatched = Vec::new();
    for exp in ["identities", "regimes", "lowerbound", "jacobian", "sparse", "scaling"] {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let ran = run_binary(exp, 1, a.path()) && run_binary(exp, 2, b.path());
        let same = ran
            && ["json", "csv"].iter().all(|ext| {
                let name = format!("{exp}.{ext}");
                let x = std::fs::read(a.path().join(&name));
                let y = std::fs::read(b.path().join(&name));
                matches!((x, y), (Ok(x), Ok(y)) if x == y)
            });
        if !same {
            mismatched.push(exp);
        }
    }
    Verdict {
        pass: mismatched.is_empty(),
        detail: if mismatched.is_empty() {
            "six experiments byte-identical at 1 and 2 threads".into()
        } else {
            format!("differs or failed: {}", mismatched.join(", "))
        },
    }
}

/// Criterion number, check, runtime limit in seconds.
type Criterion = (u32, fn() -> Verdict, f64);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, criterion_1, 5.0),
        (2, criterion_2, 10.0),
        (3, criterion_3, 60.0),
        (4, criterion_4, 30.0),
        (5, criterion_5, 60.0),
        (6, criterion_6, 300.0),
        (7, criterion_7, 900.0),
        (8, criterion_8, 60.0),
        (9, criterion_9, f64::INFINITY),
    ];
    let mut all = true;
    for (k, f, limit) in criteria {
        let start = Instant::now();
        let v = f();
        let secs = start.elapsed().as_secs_f64();
        let pass = v.pass && secs < limit;
        all &= pass;
        let budget = if limit.is_finite() { format!(" < {limit} s") } else { String::new() };
        println!("criterion {k} {}: {} [{secs:.1} s{budget}]", if pass { "PASS" } else { "FAIL" }, v.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
