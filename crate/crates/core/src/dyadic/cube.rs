use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::field::{ComplexField, GridSpec};

/// An axis-aligned square of whole grid cells: `[x0, x0 + side) × [y0, y0 + side)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellSquare {
    pub x0: usize,
    pub y0: usize,
    pub side: usize,
}

impl CellSquare {
    pub fn new(x0: usize, y0: usize, side: usize) -> Self {
        Self { x0, y0, side }
    }

    /// The whole grid.
    pub fn full(grid: &GridSpec) -> Self {
        Self::new(0, 0, grid.n())
    }

    pub fn cells(&self) -> usize {
        self.side * self.side
    }

    pub fn fits(&self, grid: &GridSpec) -> bool {
        self.side > 0 && self.x0 + self.side <= grid.n() && self.y0 + self.side <= grid.n()
    }

    pub fn check(&self, grid: &GridSpec) -> Result<()> {
        if self.fits(grid) {
            Ok(())
        } else {
            Err(LabError::CubeOutOfRange(format!("{self:?} on an n = {} grid", grid.n())))
        }
    }

    pub fn contains_square(&self, other: &CellSquare) -> bool {
        other.x0 >= self.x0
            && other.y0 >= self.y0
            && other.x0 + other.side <= self.x0 + self.side
            && other.y0 + other.side <= self.y0 + self.side
    }

    pub fn contains_cell(&self, j1: usize, j2: usize) -> bool {
        (self.x0..self.x0 + self.side).contains(&j1) && (self.y0..self.y0 + self.side).contains(&j2)
    }

    /// Grid indices of the cells, row-major within the square.
    pub fn indices<'a>(&'a self, grid: &'a GridSpec) -> impl Iterator<Item = usize> + 'a {
        (self.y0..self.y0 + self.side)
            .flat_map(move |j2| (self.x0..self.x0 + self.side).map(move |j1| grid.index(j1, j2)))
    }

    pub fn side_length(&self, grid: &GridSpec) -> f64 {
        self.side as f64 * grid.spacing()
    }

    pub fn area(&self, grid: &GridSpec) -> f64 {
        self.cells() as f64 * grid.cell_area()
    }

    /// Geometric centre.
    pub fn center(&self, grid: &GridSpec) -> Complex64 {
        let h = grid.spacing();
        grid.origin()
            + Complex64::new(
                h * (self.x0 as f64 + 0.5 * self.side as f64),
                h * (self.y0 as f64 + 0.5 * self.side as f64),
            )
    }
}

/// A cube of the dyadic family of a root square `Q₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicCube {
    pub level: u32,
    pub index: (usize, usize),
    pub root: CellSquare,
}

impl DyadicCube {
    pub fn root(root: CellSquare) -> Result<Self> {
        if !root.side.is_power_of_two() {
            return Err(LabError::CubeOutOfRange(format!("root side {} is not a power of two", root.side)));
        }
        Ok(Self { level: 0, index: (0, 0), root })
    }

    pub fn whole_grid(grid: &GridSpec) -> Self {
        Self { level: 0, index: (0, 0), root: CellSquare::full(grid) }
    }

    pub fn side_cells(&self) -> usize {
        self.root.side >> self.level
    }

    pub fn square(&self) -> CellSquare {
        let s = self.side_cells();
        CellSquare::new(self.root.x0 + self.index.0 * s, self.root.y0 + self.index.1 * s, s)
    }

    pub fn is_cell(&self) -> bool {
        self.side_cells() == 1
    }

    pub fn max_level(&self) -> u32 {
        self.root.side.trailing_zeros()
    }

    pub fn children(&self) -> Option<[DyadicCube; 4]> {
        if self.is_cell() {
            return None;
        }
        let (i, j) = self.index;
        let l = self.level + 1;
        let c = |a, b| DyadicCube { level: l, index: (2 * i + a, 2 * j + b), root: self.root };
        Some([c(0, 0), c(1, 0), c(0, 1), c(1, 1)])
    }

    pub fn parent(&self) -> Option<DyadicCube> {
        (self.level > 0).then(|| DyadicCube {
            level: self.level - 1,
            index: (self.index.0 / 2, self.index.1 / 2),
            root: self.root,
        })
    }

    /// All cubes of levels `0..=depth`, coarse to fine.
    pub fn tree(&self, depth: u32) -> Vec<DyadicCube> {
        let depth = depth.min(self.max_level());
        let mut out = Vec::new();
        let mut layer = vec![*self];
        for _ in 0..=depth {
            out.extend_from_slice(&layer);
            layer = layer.iter().filter_map(|c| c.children()).flatten().collect();
        }
        out
    }
}

/// Samples of `f` on the cells of `sq`, row-major within the square.
pub fn block(f: &ComplexField, sq: &CellSquare) -> Vec<Complex64> {
    sq.indices(f.grid()).map(|i| f.samples()[i]).collect()
}

/// Mean of `values` and the values minus that mean.
///
/// Everything is computed relative to the first sample, so a constant block
/// gives exactly zero deviations.
pub(crate) fn centered_values(values: &[Complex64]) -> (Complex64, Vec<Complex64>) {
    let reference = values[0];
    let shifted: Vec<Complex64> = values.iter().map(|z| z - reference).collect();
    let m = shifted.iter().sum::<Complex64>() / shifted.len() as f64;
    (reference + m, shifted.into_iter().map(|z| z - m).collect())
}

/// `(⟨b⟩_Q, ⨍_Q |b − ⟨b⟩_Q|)` over the cells of `sq`.
pub fn mean_and_oscillation(b: &ComplexField, sq: &CellSquare) -> Result<(Complex64, f64)> {
    sq.check(b.grid())?;
    let (mean, dev) = centered_values(&block(b, sq));
    let osc = dev.iter().map(|z| z.norm()).sum::<f64>() / dev.len() as f64;
    Ok((mean, osc))
}
