use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dyadic::SparseFamily;
use crate::error::{LabError, Result};

/// Row `k` of the sign matrix: `len` independent fair signs from ChaCha
/// stream `k` of `seed`, so each row can be drawn on its own.
pub fn sign_row(len: usize, seed: u64, k: u64) -> Vec<i8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    (0..len).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect()
}

/// `m` independent `±1` vectors indexed by the cubes of `family`.
pub fn random_signs(family: &SparseFamily, seed: u64, m: usize) -> Result<Vec<Vec<i8>>> {
    if m == 0 {
        return Err(LabError::InvalidParameter("need at least one sign sample".into()));
    }
    Ok((0..m as u64).map(|k| sign_row(family.len(), seed, k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::DyadicCube;
    use crate::field::GridSpec;

    fn family(size: usize) -> SparseFamily {
        let g = GridSpec::centered(16, 1.0).unwrap();
        let root = DyadicCube::whole_grid(&g);
        let cubes: Vec<DyadicCube> = root.tree(2).into_iter().take(size).collect();
        let fam = SparseFamily::from_cubes(g, root, cubes);
        assert_eq!(fam.len(), size);
        fam
    }

    #[test]
    fn single_sample() {
        let s = random_signs(&family(3), 1, 1).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s[0].iter().all(|e| *e == 1 || *e == -1));
        assert!(random_signs(&family(3), 1, 0).is_err());
    }

    #[test]
    fn empirical_orthogonality() {
        let m = 10_000;
        let s = random_signs(&family(8), 42, m).unwrap();
        let bound = 4.0 / (m as f64).sqrt();
        for a in 0..8 {
            for c in 0..8 {
                let corr = s.iter().map(|row| f64::from(row[a] * row[c])).sum::<f64>() / m as f64;
                if a == c {
                    assert_eq!(corr, 1.0);
                } else {
                    assert!(corr.abs() <= bound, "{a},{c}: {corr}");
                }
            }
        }
    }

    #[test]
    fn deterministic_rows() {
        let fam = family(5);
        assert_eq!(random_signs(&fam, 7, 50).unwrap(), random_signs(&fam, 7, 50).unwrap());
        assert_eq!(random_signs(&fam, 7, 50).unwrap()[31], sign_row(5, 7, 31));
        assert_ne!(random_signs(&fam, 7, 50).unwrap(), random_signs(&fam, 8, 50).unwrap());
    }
}
