//! Calderón–Zygmund stopping time producing a sparse family that dominates
//! `|b − ⟨b⟩_{Q₀}|` pointwise by `Σ_Q a_Q 1_Q`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cube::{block, centered_values, CellSquare, DyadicCube};
use crate::error::{LabError, Result};
use crate::field::{ComplexField, GridSpec};

/// Pointwise domination constant `2^{d+1} + 1` for threshold 2 in the plane.
pub const DOMINATION_CONSTANT: f64 = 9.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseCube {
    pub cube: DyadicCube,
    pub mean: Complex64,
    /// `a_Q = ⨍_Q |b − ⟨b⟩_Q|`
    pub oscillation: f64,
    /// Cell mask of the major subset `E(Q)`, row-major within the cube.
    pub major: Vec<bool>,
    pub children: Vec<usize>,
    pub parent: Option<usize>,
}

impl SparseCube {
    pub fn major_cells(&self) -> usize {
        self.major.iter().filter(|&&m| m).count()
    }

    pub fn major_fraction(&self) -> f64 {
        self.major_cells() as f64 / self.major.len() as f64
    }
}

/// A sparse family of dyadic subcubes of `Q₀`, in canonical (level, index) order.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseFamily {
    pub root: DyadicCube,
    pub threshold: f64,
    pub grid: GridSpec,
    pub cubes: Vec<SparseCube>,
    pub lambda: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SparseInvariants {
    pub disjoint: bool,
    pub all_dyadic: bool,
    /// `min |E(Q)| / |Q|`
    pub min_major_fraction: f64,
    /// every `|E(Q)| ≥ ½|Q|`, checked on integer cell counts
    pub major_half: bool,
    /// `max_R Σ_{Q ⊆ R} |Q| / |R|`
    pub max_packing: f64,
    pub depth: u32,
}

impl SparseInvariants {
    pub fn ok(&self) -> bool {
        self.disjoint && self.all_dyadic && self.major_half && self.max_packing <= 2.0
    }
}

#[derive(Serialize)]
struct CubeRecord<'a> {
    level: u32,
    index: (usize, usize),
    #[serde(rename = "a_Q")]
    oscillation: f64,
    #[serde(rename = "lambda_Q")]
    lambda: Option<f64>,
    major_fraction: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    major_runs: Option<&'a [(usize, usize)]>,
}

impl SparseFamily {
    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn area(&self, i: usize) -> f64 {
        self.cubes[i].cube.square().area(&self.grid)
    }

    pub fn depth(&self) -> u32 {
        self.cubes.iter().map(|c| c.cube.level).max().unwrap_or(0)
    }

    pub fn with_lambda(mut self, lambda: Vec<f64>) -> Self {
        assert_eq!(lambda.len(), self.cubes.len());
        self.lambda = Some(lambda);
        self
    }

    /// Builds a family from explicit cubes of one dyadic tree. Each major
    /// subset is the cube minus its maximal proper subcubes in the family;
    /// oscillations are left at zero.
    pub fn from_cubes(grid: GridSpec, root: DyadicCube, mut cubes: Vec<DyadicCube>) -> Self {
        cubes.sort();
        cubes.dedup();
        let squares: Vec<CellSquare> = cubes.iter().map(|c| c.square()).collect();
        let mut parent = vec![None; cubes.len()];
        for i in 0..cubes.len() {
            // smallest strict container; canonical order puts finer cubes later
            parent[i] = (0..i).rev().find(|&k| squares[k] != squares[i] && squares[k].contains_square(&squares[i]));
        }
        let mut entries: Vec<SparseCube> = cubes
            .iter()
            .map(|&cube| SparseCube {
                cube,
                mean: Complex64::new(0.0, 0.0),
                oscillation: 0.0,
                major: vec![true; cube.square().cells()],
                children: Vec::new(),
                parent: None,
            })
            .collect();
        for i in 0..cubes.len() {
            if let Some(p) = parent[i] {
                entries[i].parent = Some(p);
                entries[p].children.push(i);
                let (outer, inner) = (squares[p], squares[i]);
                for y in 0..inner.side {
                    for x in 0..inner.side {
                        let lx = inner.x0 + x - outer.x0;
                        let ly = inner.y0 + y - outer.y0;
                        entries[p].major[ly * outer.side + lx] = false;
                    }
                }
            }
        }
        Self { root, threshold: 2.0, grid, cubes: entries, lambda: None }
    }

    /// Disjointness, dyadic membership, major-subset measure and Carleson packing.
    pub fn invariants(&self) -> SparseInvariants {
        let root_sq = self.root.square();
        let mut count = vec![0u8; root_sq.cells()];
        let mut all_dyadic = true;
        let mut major_half = true;
        let mut min_frac = 1.0f64;
        for c in &self.cubes {
            let sq = c.cube.square();
            all_dyadic &= c.cube.root == self.root.root
                && root_sq.contains_square(&sq)
                && c.cube.level >= self.root.level;
            let k = c.major_cells();
            major_half &= 2 * k >= sq.cells();
            min_frac = min_frac.min(k as f64 / sq.cells() as f64);
            for (local, &m) in c.major.iter().enumerate() {
                if m {
                    let gx = sq.x0 + local % sq.side - root_sq.x0;
                    let gy = sq.y0 + local / sq.side - root_sq.y0;
                    let slot = &mut count[gy * root_sq.side + gx];
                    *slot = slot.saturating_add(1);
                }
            }
        }
        // subtree areas; children always come after parents in canonical order
        let mut subtree: Vec<usize> = self.cubes.iter().map(|c| c.cube.square().cells()).collect();
        for i in (0..self.cubes.len()).rev() {
            if let Some(p) = self.cubes[i].parent {
                subtree[p] += subtree[i];
            }
        }
        let max_packing = self
            .cubes
            .iter()
            .zip(&subtree)
            .map(|(c, &s)| s as f64 / c.cube.square().cells() as f64)
            .fold(0.0, f64::max);
        SparseInvariants {
            disjoint: count.iter().all(|&c| c <= 1),
            all_dyadic,
            min_major_fraction: min_frac,
            major_half,
            max_packing,
            depth: self.depth(),
        }
    }

    /// `Σ_Q a_Q 1_Q` on the cells of `Q₀`, row-major.
    pub fn oscillation_sum(&self) -> Vec<f64> {
        self.weighted_indicator_sum(|i| self.cubes[i].oscillation)
    }

    /// `Σ_Q w(Q) 1_Q` on the cells of `Q₀`, row-major.
    pub fn weighted_indicator_sum(&self, weight: impl Fn(usize) -> f64) -> Vec<f64> {
        let root_sq = self.root.square();
        let mut out = vec![0.0; root_sq.cells()];
        for (i, c) in self.cubes.iter().enumerate() {
            let w = weight(i);
            if w == 0.0 {
                continue;
            }
            let sq = c.cube.square();
            for y in 0..sq.side {
                let row = (sq.y0 + y - root_sq.y0) * root_sq.side + sq.x0 - root_sq.x0;
                out[row..row + sq.side].iter_mut().for_each(|v| *v += w);
            }
        }
        out
    }

    /// JSON records `{level, index, a_Q, lambda_Q, major_fraction}`, optionally
    /// with run-length encoded major-subset masks as `(start, length)` pairs.
    pub fn to_json(&self, with_masks: bool) -> serde_json::Value {
        let runs: Vec<Vec<(usize, usize)>> =
            if with_masks { self.cubes.iter().map(|c| run_lengths(&c.major)).collect() } else { Vec::new() };
        let records: Vec<CubeRecord> = self
            .cubes
            .iter()
            .enumerate()
            .map(|(i, c)| CubeRecord {
                level: c.cube.level,
                index: c.cube.index,
                oscillation: c.oscillation,
                lambda: self.lambda.as_ref().map(|l| l[i]),
                major_fraction: c.major_fraction(),
                major_runs: runs.get(i).map(|r| r.as_slice()),
            })
            .collect();
        serde_json::to_value(records).expect("serialisable records")
    }
}

fn run_lengths(mask: &[bool]) -> Vec<(usize, usize)> {
    let mut runs = Vec::new();
    let mut i = 0;
    while i < mask.len() {
        if mask[i] {
            let start = i;
            while i < mask.len() && mask[i] {
                i += 1;
            }
            runs.push((start, i - start));
        } else {
            i += 1;
        }
    }
    runs
}

/// Sums of `values` (an `m × m` row-major block) over every dyadic subsquare,
/// finest level first: `pyramid[k]` has side `m >> k`.
fn pyramid(values: &[f64], m: usize) -> Vec<Vec<f64>> {
    let mut levels = vec![values.to_vec()];
    let mut side = m;
    while side > 1 {
        let prev = levels.last().unwrap();
        let half = side / 2;
        let mut next = vec![0.0; half * half];
        for y in 0..half {
            for x in 0..half {
                next[y * half + x] = prev[2 * y * side + 2 * x]
                    + prev[2 * y * side + 2 * x + 1]
                    + prev[(2 * y + 1) * side + 2 * x]
                    + prev[(2 * y + 1) * side + 2 * x + 1];
            }
        }
        levels.push(next);
        side = half;
    }
    levels
}

struct Selected {
    cube: DyadicCube,
    mean: Complex64,
    oscillation: f64,
    major: Vec<bool>,
    children: Vec<usize>,
    parent: Option<usize>,
}

/// Stopping-time sparse family for `b` on `Q₀` with threshold `Λ` (default 2).
///
/// The stopping children of a selected `Q` are the maximal dyadic `R ⊊ Q` with
/// `⨍_R |b − ⟨b⟩_Q| > Λ a_Q`; they cover at most `|Q|/Λ`.
pub fn sparse_dominate(b: &ComplexField, q0: DyadicCube, threshold: f64) -> Result<SparseFamily> {
    let grid = *b.grid();
    q0.square().check(&grid)?;
    if !(threshold >= 2.0 && threshold.is_finite()) {
        return Err(LabError::InvalidParameter(format!("stopping threshold {threshold} must be at least 2")));
    }
    let mut selected: Vec<Selected> = Vec::new();
    let mut queue = vec![(q0, None::<usize>)];
    while let Some((cube, parent)) = queue.pop() {
        let sq = cube.square();
        let m = sq.side;
        let (mean, dev) = centered_values(&block(b, &sq));
        let abs_dev: Vec<f64> = dev.iter().map(|z| z.norm()).collect();
        let osc = abs_dev.iter().sum::<f64>() / abs_dev.len() as f64;
        let mut major = vec![true; m * m];
        let mut stops = Vec::new();
        if osc > 0.0 {
            let sums = pyramid(&abs_dev, m);
            let cut = threshold * osc;
            // descend from the children of Q; k indexes pyramid levels from fine to coarse
            let top = sums.len() - 1;
            let mut stack: Vec<(usize, usize, usize)> = Vec::new();
            if top >= 1 {
                for (x, y) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                    stack.push((top - 1, x, y));
                }
            }
            while let Some((k, x, y)) = stack.pop() {
                let side = m >> k;
                let cells = (1usize << k) * (1usize << k);
                let avg = sums[k][y * side + x] / cells as f64;
                if avg > cut {
                    stops.push((k, x, y));
                } else if k > 0 {
                    for (dx, dy) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                        stack.push((k - 1, 2 * x + dx, 2 * y + dy));
                    }
                }
            }
            for &(k, x, y) in &stops {
                let s = 1usize << k;
                for yy in y * s..(y + 1) * s {
                    major[yy * m + x * s..yy * m + (x + 1) * s].iter_mut().for_each(|c| *c = false);
                }
            }
        }
        let idx = selected.len();
        selected.push(Selected { cube, mean, oscillation: osc, major, children: Vec::new(), parent });
        if let Some(p) = parent {
            selected[p].children.push(idx);
        }
        for (k, x, y) in stops {
            let level = cube.level + (m.trailing_zeros() - k as u32);
            let s = 1usize << k;
            let child = DyadicCube {
                level,
                index: ((sq.x0 - cube.root.x0) / s + x, (sq.y0 - cube.root.y0) / s + y),
                root: cube.root,
            };
            queue.push((child, Some(idx)));
        }
    }
    // canonical order
    let mut order: Vec<usize> = (0..selected.len()).collect();
    order.sort_by_key(|&i| (selected[i].cube.level, selected[i].cube.index.1, selected[i].cube.index.0));
    let mut rank = vec![0; selected.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let mut slots: Vec<Option<Selected>> = selected.into_iter().map(Some).collect();
    let cubes = order
        .iter()
        .map(|&old| {
            let s = slots[old].take().unwrap();
            let mut children: Vec<usize> = s.children.iter().map(|&c| rank[c]).collect();
            children.sort_unstable();
            SparseCube {
                cube: s.cube,
                mean: s.mean,
                oscillation: s.oscillation,
                major: s.major,
                children,
                parent: s.parent.map(|p| rank[p]),
            }
        })
        .collect();
    Ok(SparseFamily { root: q0, threshold, grid, cubes, lambda: None })
}

/// Empirical constant `max_x |b(x) − ⟨b⟩_{Q₀}| / Σ_Q a_Q 1_Q(x)` over the
/// cells of `Q₀` (`0/0` counts as 0), and whether it is at most
/// [`DOMINATION_CONSTANT`].
pub fn verify_domination(b: &ComplexField, family: &SparseFamily) -> (bool, f64) {
    let sq = family.root.square();
    let (_, dev) = centered_values(&block(b, &sq));
    let rhs = family.oscillation_sum();
    let mut worst = 0.0f64;
    for (d, r) in dev.iter().zip(&rhs) {
        let lhs = d.norm();
        if lhs == 0.0 {
            continue;
        }
        worst = worst.max(if *r > 0.0 { lhs / r } else { f64::INFINITY });
    }
    (worst <= DOMINATION_CONSTANT, worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid(n: usize) -> GridSpec {
        GridSpec::centered(n, 1.0).unwrap()
    }

    #[test]
    fn constant_symbol_gives_root_only() {
        let g = grid(32);
        let b = ComplexField::constant(g, Complex64::new(0.3, 0.0));
        let fam = sparse_dominate(&b, DyadicCube::whole_grid(&g), 2.0).unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(fam.cubes[0].oscillation, 0.0);
        assert_eq!(fam.cubes[0].major_cells(), 32 * 32);
        assert_eq!(verify_domination(&b, &fam), (true, 0.0));
    }

    #[test]
    fn half_indicator_has_no_stopping_cubes() {
        let g = grid(32);
        let b = ComplexField::from_real_fn(g, |x, _| if x < 0.0 { 1.0 } else { 0.0 });
        let fam = sparse_dominate(&b, DyadicCube::whole_grid(&g), 2.0).unwrap();
        assert_eq!(fam.len(), 1);
        assert!((fam.cubes[0].oscillation - 0.5).abs() < 1e-15);
    }

    #[test]
    fn linear_symbol_is_singleton_and_dominated() {
        let g = grid(64);
        let b = ComplexField::from_real_fn(g, |x, _| x);
        let fam = sparse_dominate(&b, DyadicCube::whole_grid(&g), 2.0).unwrap();
        assert_eq!(fam.len(), 1);
        let (ok, c) = verify_domination(&b, &fam);
        assert!(ok && c <= 9.0, "C = {c}");
    }

    #[test]
    fn spike_is_isolated() {
        let g = grid(64);
        let mut b = ComplexField::zeros(g);
        b.samples_mut()[g.index(37, 12)] = Complex64::new(1.0, 0.0);
        let fam = sparse_dominate(&b, DyadicCube::whole_grid(&g), 2.0).unwrap();
        let finest = fam.cubes.iter().filter(|c| c.cube.square().contains_cell(37, 12)).map(|c| c.cube.side_cells()).min();
        assert!(finest.unwrap() <= 2);
        let (ok, c) = verify_domination(&b, &fam);
        assert!(ok, "C = {c}");
        assert!(fam.invariants().ok());
    }

    #[test]
    fn random_symbols_satisfy_invariants() {
        let g = grid(64);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let b = ComplexField::from_fn(g, |_| Complex64::new(rng.random::<f64>().powi(6), rng.random::<f64>() - 0.5));
            let fam = sparse_dominate(&b, DyadicCube::whole_grid(&g), 2.0).unwrap();
            let inv = fam.invariants();
            assert!(inv.ok(), "{inv:?}");
            let (ok, c) = verify_domination(&b, &fam);
            assert!(ok, "C = {c}");
        }
    }

    #[test]
    fn larger_threshold_gives_larger_major_subsets() {
        let g = grid(64);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let b = ComplexField::from_fn(g, |_| Complex64::new(rng.random::<f64>().powi(8), 0.0));
        let fam = sparse_dominate(&b, DyadicCube::whole_grid(&g), 4.0).unwrap();
        assert!(fam.len() > 1);
        assert!(fam.invariants().min_major_fraction >= 0.75);
    }

    #[test]
    fn from_cubes_builds_major_subsets() {
        let g = grid(16);
        let root = DyadicCube::whole_grid(&g);
        let kids = root.children().unwrap();
        let fam = SparseFamily::from_cubes(g, root, vec![root, kids[3], kids[3].children().unwrap()[0]]);
        assert_eq!(fam.cubes[0].major_cells(), 256 - 64);
        assert_eq!(fam.cubes[1].major_cells(), 64 - 16);
        assert_eq!(fam.cubes[2].major_cells(), 16);
        let inv = fam.invariants();
        assert!(inv.disjoint && inv.major_half);
        assert!((inv.max_packing - (256.0 + 64.0 + 16.0) / 256.0).abs() < 1e-15);
    }

    #[test]
    fn json_records() {
        let g = grid(16);
        let b = ComplexField::from_real_fn(g, |x, y| (x * y).abs().powi(3));
        let fam = sparse_dominate(&b, DyadicCube::whole_grid(&g), 2.0).unwrap();
        let js = fam.to_json(true);
        let arr = js.as_array().unwrap();
        assert_eq!(arr.len(), fam.len());
        assert!(arr[0].get("a_Q").is_some() && arr[0].get("major_runs").is_some());
    }
}
