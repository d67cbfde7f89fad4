use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

pub const MIN_SIDE: usize = 8;
pub const MAX_SIDE: usize = 4096;

/// A uniform `n × n` grid covering the square `[origin, origin + L]²`.
///
/// Samples sit at cell midpoints, `origin + h·(j₁ + ½, j₂ + ½)` with
/// `h = L / n`, so every cell of a dyadic cube carries exactly one sample.
/// A periodic grid is a torus of side `L`; a bounded grid is a square in the
/// plane with the field taken to vanish outside it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    n: usize,
    length: f64,
    periodic: bool,
    origin: Complex64,
}

impl GridSpec {
    pub fn new(n: usize, length: f64, periodic: bool, origin: Complex64) -> Result<Self> {
        if !n.is_power_of_two() || !(MIN_SIDE..=MAX_SIDE).contains(&n) {
            return Err(LabError::InvalidGrid(format!(
                "n = {n} must be a power of two in [{MIN_SIDE}, {MAX_SIDE}]"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(LabError::InvalidGrid(format!("length = {length} must be positive")));
        }
        if !(origin.re.is_finite() && origin.im.is_finite()) {
            return Err(LabError::InvalidGrid("origin must be finite".into()));
        }
        Ok(Self { n, length, periodic, origin })
    }

    /// Bounded square of side `length` centred at the origin of the plane.
    pub fn centered(n: usize, length: f64) -> Result<Self> {
        Self::new(n, length, false, Complex64::new(-0.5 * length, -0.5 * length))
    }

    /// Torus `[0, length)²`.
    pub fn torus(n: usize, length: f64) -> Result<Self> {
        Self::new(n, length, true, Complex64::new(0.0, 0.0))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn periodic(&self) -> bool {
        self.periodic
    }

    pub fn origin(&self) -> Complex64 {
        self.origin
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn cell_area(&self) -> f64 {
        let h = self.spacing();
        h * h
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Row-major index; `j1` runs along the first coordinate.
    #[inline]
    pub fn index(&self, j1: usize, j2: usize) -> usize {
        j2 * self.n + j1
    }

    #[inline]
    pub fn node(&self, j1: usize, j2: usize) -> Complex64 {
        let h = self.spacing();
        self.origin + Complex64::new(h * (j1 as f64 + 0.5), h * (j2 as f64 + 0.5))
    }

    pub fn nodes(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.n).flat_map(move |j2| (0..self.n).map(move |j1| self.node(j1, j2)))
    }

    pub fn kind(&self) -> &'static str {
        if self.periodic {
            "periodic"
        } else {
            "bounded"
        }
    }

    /// Same geometry with the node count changed.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(n, self.length, self.periodic, self.origin)
    }
}
