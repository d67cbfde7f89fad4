//! Plain-text field files.
//!
//! ```text
//! n=8,length=1.0000000000000000e0,periodic=false,origin_re=-5.0000000000000000e-1,origin_im=-5.0000000000000000e-1
//! re,im
//! 1.0000000000000000e0,0.0000000000000000e0
//! ...
//! ```
//!
//! Samples follow in row-major order. Floats carry 17 significant digits, so
//! a write/read cycle reproduces every bit.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use super::{ComplexField, GridSpec};
use crate::error::{LabError, Result};

const KEYS: [&str; 5] = ["n", "length", "periodic", "origin_re", "origin_im"];

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_field<W: Write>(field: &ComplexField, mut out: W) -> Result<()> {
    let g = field.grid();
    writeln!(
        out,
        "n={},length={},periodic={},origin_re={},origin_im={}",
        g.n(),
        fmt(g.length()),
        g.periodic(),
        fmt(g.origin().re),
        fmt(g.origin().im)
    )?;
    writeln!(out, "re,im")?;
    for z in field.samples() {
        writeln!(out, "{},{}", fmt(z.re), fmt(z.im))?;
    }
    Ok(())
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| LabError::Parse(format!("not a number: {s:?}")))
}

pub fn read_field<R: BufRead>(input: R) -> Result<ComplexField> {
    let mut lines = input.lines();
    let mut next = || -> Result<String> {
        lines.next().ok_or_else(|| LabError::Parse("unexpected end of file".into()))?.map_err(Into::into)
    };
    let meta = next()?;
    let mut values = Vec::with_capacity(5);
    for (part, key) in meta.trim().split(',').zip(KEYS) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| LabError::Parse(format!("expected key=value, got {part:?}")))?;
        if k.trim() != key {
            return Err(LabError::Parse(format!("expected key {key}, got {k:?}")));
        }
        values.push(v.trim().to_string());
    }
    if values.len() != 5 {
        return Err(LabError::Parse("metadata line needs five entries".into()));
    }
    let n: usize = values[0].parse().map_err(|_| LabError::Parse("bad n".into()))?;
    let periodic: bool = values[2].parse().map_err(|_| LabError::Parse("bad periodic flag".into()))?;
    let grid = GridSpec::new(
        n,
        parse_f64(&values[1])?,
        periodic,
        Complex64::new(parse_f64(&values[3])?, parse_f64(&values[4])?),
    )?;
    if next()?.trim() != "re,im" {
        return Err(LabError::Parse("second header line must be `re,im`".into()));
    }
    let mut samples = Vec::with_capacity(grid.len());
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (re, im) = line
            .split_once(',')
            .ok_or_else(|| LabError::Parse(format!("bad sample line {line:?}")))?;
        samples.push(Complex64::new(parse_f64(re)?, parse_f64(im)?));
    }
    ComplexField::new(grid, samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn round_trip_is_bit_exact(
            vals in proptest::collection::vec((-1e300f64..1e300, -1e-300f64..1e-300), 64),
            len in 1e-3f64..1e3,
            ox in -1e3f64..1e3,
        ) {
            let g = GridSpec::new(8, len, false, Complex64::new(ox, -ox / 3.0)).unwrap();
            let f = ComplexField::new(g, vals.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).unwrap();
            let mut buf = Vec::new();
            write_field(&f, &mut buf).unwrap();
            let back = read_field(buf.as_slice()).unwrap();
            prop_assert_eq!(back.grid(), f.grid());
            for (a, b) in back.samples().iter().zip(f.samples()) {
                prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
                prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
    }

    #[test]
    fn rejects_short_files() {
        let text = "n=8,length=1,periodic=true,origin_re=0,origin_im=0\nre,im\n1,0\n";
        assert!(read_field(text.as_bytes()).is_err());
        assert!(read_field("".as_bytes()).is_err());
    }
}
