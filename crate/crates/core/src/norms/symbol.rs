use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::field::{ComplexField, GridSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BumpShape {
    /// `exp(−|x|²/s²)`
    Gaussian,
    /// `exp(1 − 1/(1 − |x/s|²))` inside the disc of radius `s`
    Compact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SymbolClass {
    Constant {
        value: f64,
    },
    /// `log|x − c|`, clamped below at `log h` unless `clamp` is false.
    BmoLog {
        #[serde(default = "yes")]
        clamp: bool,
    },
    /// `|x − c|^α`
    Holder {
        alpha: f64,
    },
    LrBump {
        shape: BumpShape,
        scale: f64,
        #[serde(default)]
        offset: f64,
    },
    /// `1_{x₁ > c₁}`
    Step {},
    /// independent uniform samples in `[0, 1)`
    Random {
        seed: u64,
    },
    /// `e^{i(k₁x₁ + k₂x₂)}`
    PlaneWave {
        k1: f64,
        k2: f64,
    },
}

fn yes() -> bool {
    true
}

/// A symbol `b` from one of the test classes, centred at `center` and
/// optionally multiplied by the Gaussian window `exp(−|x − c|²/R²)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolSpec {
    pub class: SymbolClass,
    #[serde(default)]
    pub center: [f64; 2],
    #[serde(default)]
    pub window: Option<f64>,
}

impl SymbolSpec {
    pub fn new(class: SymbolClass) -> Self {
        Self { class, center: [0.0, 0.0], window: None }
    }

    pub fn windowed(mut self, radius: f64) -> Self {
        self.window = Some(radius);
        self
    }

    pub fn centered_at(mut self, c: Complex64) -> Self {
        self.center = [c.re, c.im];
        self
    }

    pub fn label(&self) -> String {
        match &self.class {
            SymbolClass::Constant { .. } => "constant".into(),
            SymbolClass::BmoLog { .. } => "bmo_log".into(),
            SymbolClass::Holder { alpha } => format!("holder({alpha})"),
            SymbolClass::LrBump { shape, .. } => format!("lr_bump({shape:?})").to_lowercase(),
            SymbolClass::Step {} => "step".into(),
            SymbolClass::Random { .. } => "random".into(),
            SymbolClass::PlaneWave { .. } => "plane_wave".into(),
        }
    }
}

/// Ten symbols covering every class, sized for boxes of side about 4.
pub fn standard_corpus() -> Vec<SymbolSpec> {
    use SymbolClass::*;
    let off = |x: f64, y: f64| [x, y];
    vec![
        SymbolSpec::new(Constant { value: 1.5 }),
        SymbolSpec::new(BmoLog { clamp: true }).windowed(1.5),
        SymbolSpec::new(Holder { alpha: 0.5 }).windowed(1.0),
        SymbolSpec::new(Holder { alpha: 0.8 }),
        SymbolSpec::new(LrBump { shape: BumpShape::Gaussian, scale: 0.5, offset: 0.0 }),
        SymbolSpec { center: off(0.3, -0.2), ..SymbolSpec::new(LrBump { shape: BumpShape::Compact, scale: 1.0, offset: 2.0 }) },
        SymbolSpec::new(Step {}),
        SymbolSpec::new(Random { seed: 1 }),
        SymbolSpec::new(Random { seed: 2 }).windowed(0.8),
        SymbolSpec::new(PlaneWave { k1: 3.0, k2: -2.0 }).windowed(1.2),
    ]
}

pub fn generate_symbol(spec: &SymbolSpec, grid: &GridSpec) -> Result<ComplexField> {
    let c = Complex64::new(spec.center[0], spec.center[1]);
    let h = grid.spacing();
    if let Some(r) = spec.window {
        if !(r > 0.0 && r.is_finite()) {
            return Err(LabError::InvalidParameter(format!("window radius {r} must be positive")));
        }
    }
    let window = |z: Complex64| spec.window.map_or(1.0, |r| (-(z - c).norm_sqr() / (r * r)).exp());
    let real = |f: &dyn Fn(Complex64) -> f64| {
        ComplexField::from_fn(*grid, |z| Complex64::new(f(z) * window(z), 0.0))
    };
    let field = match &spec.class {
        SymbolClass::Constant { value } => ComplexField::constant(*grid, Complex64::new(*value, 0.0)),
        SymbolClass::BmoLog { clamp } => {
            if !clamp && grid.nodes().any(|z| (z - c).norm() <= 1e-12 * h) {
                return Err(LabError::SingularSample(format!("log|x − c| with c = {c} on a node")));
            }
            let floor = if *clamp { h.ln() } else { f64::NEG_INFINITY };
            real(&|z| (z - c).norm().ln().max(floor))
        }
        SymbolClass::Holder { alpha } => {
            if !(*alpha > 0.0 && *alpha <= 1.0) {
                return Err(LabError::InvalidParameter(format!("Hölder index {alpha} outside (0, 1]")));
            }
            real(&|z| (z - c).norm().powf(*alpha))
        }
        SymbolClass::LrBump { shape, scale, offset } => {
            if !(*scale > 0.0) {
                return Err(LabError::InvalidParameter(format!("bump scale {scale} must be positive")));
            }
            let s = *scale;
            let bump = move |z: Complex64| -> f64 {
                let t2 = (z - c).norm_sqr() / (s * s);
                match shape {
                    BumpShape::Gaussian => (-t2).exp(),
                    BumpShape::Compact if t2 < 1.0 => (1.0 - 1.0 / (1.0 - t2)).exp(),
                    BumpShape::Compact => 0.0,
                }
            };
            let w = ComplexField::from_fn(*grid, |z| Complex64::new(bump(z) * window(z), 0.0));
            w.map(|z| z + offset)
        }
        SymbolClass::Step {} => real(&|z| if z.re > c.re { 1.0 } else { 0.0 }),
        SymbolClass::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let base = ComplexField::from_fn(*grid, |_| Complex64::new(rng.random::<f64>(), 0.0));
            let win = ComplexField::from_fn(*grid, |z| Complex64::new(window(z), 0.0));
            &base * &win
        }
        SymbolClass::PlaneWave { k1, k2 } => ComplexField::from_fn(*grid, |z| {
            let x = z - c;
            Complex64::new(0.0, k1 * x.re + k2 * x.im).exp() * window(z)
        }),
    };
    ComplexField::new(*grid, field.into_samples())
}
