use std::fmt::Write as _;
use std::path::Path;

use super::Cube;
use crate::error::{Error, Result};
use crate::interval::{ComplexInterval, Interval};

/// Cubes sharing one mode count and decay exponent.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CubeCollection {
    cubes: Vec<Cube>,
}

impl CubeCollection {
    pub fn new() -> Self {
        CubeCollection { cubes: Vec::new() }
    }

    pub fn from_cubes(cubes: Vec<Cube>) -> Result<Self> {
        let mut c = CubeCollection::new();
        for x in cubes {
            c.push(x)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, x: Cube) -> Result<()> {
        if let Some(first) = self.cubes.first()
            && (first.m() != x.m() || first.decay_s != x.decay_s)
        {
            return Err(Error::ShapeMismatch(format!(
                "collection holds (M={}, s={}), got (M={}, s={})",
                first.m(),
                first.decay_s,
                x.m(),
                x.decay_s
            )));
        }
        self.cubes.push(x);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn into_cubes(self) -> Vec<Cube> {
        self.cubes
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Cube> {
        self.cubes.iter()
    }
}

impl Cube {
    /// One comma-separated record: `alpha, omega, s, C0, M`, then `a_lo,a_hi,b_lo,b_hi` per mode.
    pub fn to_record(&self) -> String {
        let head = [self.alpha.lo(), self.alpha.hi(), self.omega.lo(), self.omega.hi(), self.decay_s, self.tail_c0];
        let mut out = head.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",");
        write!(out, ",{}", self.m()).unwrap();
        for c in &self.coeffs {
            for x in [c.re.lo(), c.re.hi(), c.im.lo(), c.im.hi()] {
                write!(out, ",{x:?}").unwrap();
            }
        }
        out
    }
}

/// Header line describing the record layout for `m` modes.
pub fn record_header(m: usize) -> String {
    let mut h = String::from("# alpha_lo,alpha_hi,omega_lo,omega_hi,s,C0,M");
    for k in 1..=m {
        write!(h, ",a{k}_lo,a{k}_hi,b{k}_lo,b{k}_hi").unwrap();
    }
    h
}

/// Parses one record; `line` is the 1-based line number used in errors.
pub fn parse_cube_record(text: &str, line: usize) -> Result<Cube> {
    let err = |msg: String| Error::Parse { line, msg };
    let fields: Vec<&str> = text.trim().split(',').map(str::trim).collect();
    if fields.len() < 7 {
        return Err(err(format!("expected at least 7 fields, found {}", fields.len())));
    }
    let num = |i: usize| -> Result<f64> { fields[i].parse::<f64>().map_err(|e| err(format!("field {}: {e}", i + 1))) };
    let m: usize = fields[6].parse().map_err(|e| err(format!("mode count: {e}")))?;
    if fields.len() != 7 + 4 * m {
        return Err(err(format!("M = {m} needs {} fields, found {}", 7 + 4 * m, fields.len())));
    }
    let pair = |i: usize| -> Result<Interval> { Interval::new(num(i)?, num(i + 1)?).map_err(|e| err(e.to_string())) };
    let alpha = pair(0)?;
    let omega = pair(2)?;
    let s = num(4)?;
    let c0 = num(5)?;
    let coeffs =
        (0..m).map(|k| Ok(ComplexInterval::new(pair(7 + 4 * k)?, pair(9 + 4 * k)?))).collect::<Result<Vec<_>>>()?;
    Cube::new(alpha, omega, coeffs, c0, s).map_err(|e| err(e.to_string()))
}

/// Writes cubes with a header line; an empty collection writes only the header.
pub fn write_cubes(path: &Path, cubes: &[Cube]) -> Result<()> {
    let m = cubes.first().map_or(0, Cube::m);
    let mut text = record_header(m);
    text.push('\n');
    for x in cubes {
        text.push_str(&x.to_record());
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Reads cubes, skipping blank lines and lines starting with `#`.
pub fn read_cubes(path: &Path) -> Result<Vec<Cube>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_cubes(&text)
}

pub fn parse_cubes(text: &str) -> Result<Vec<Cube>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| parse_cube_record(l, i + 1))
        .collect()
}
