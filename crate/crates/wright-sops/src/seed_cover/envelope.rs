//! Piecewise-constant envelopes on a periodic solution and its derivatives.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::interval::round::{add_down, add_up, sub_down, sub_up};

/// Where an envelope came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Produced by a validated envelope generator.
    Rigorous,
    /// Produced by the non-rigorous fixture generator.
    Fixture,
}

impl Provenance {
    pub fn tag(self) -> &'static str {
        match self {
            Provenance::Rigorous => "RIGOROUS",
            Provenance::Fixture => "FIXTURE",
        }
    }

    pub fn parse(tag: &str) -> Option<Provenance> {
        match tag {
            "RIGOROUS" => Some(Provenance::Rigorous),
            "FIXTURE" => Some(Provenance::Fixture),
            _ => None,
        }
    }
}

/// Interval-valued step function on a uniform partition of `[0, L_hi]`.
///
/// Cell `j` covers `[t_j, t_{j+1}]` with `t_j = j * L_hi / n` evaluated in
/// floating point and `t_n = L_hi` exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundingFunction {
    pub period: Interval,
    pub order: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoundingFunction {
    pub fn new(period: Interval, order: usize, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::ShapeMismatch(format!(
                "envelope needs matching non-empty bounds, got {} lower and {} upper",
                lower.len(),
                upper.len()
            )));
        }
        if period.is_empty() || !(period.lo() > 0.0) || !period.is_bounded() {
            return Err(Error::Argument(format!("period interval must be positive and bounded, got {period}")));
        }
        if let Some(j) =
            (0..lower.len()).find(|&j| !(lower[j] <= upper[j]) || !lower[j].is_finite() || !upper[j].is_finite())
        {
            return Err(Error::Argument(format!("cell {j} has invalid bounds [{}, {}]", lower[j], upper[j])));
        }
        Ok(BoundingFunction { period, order, lower, upper })
    }

    /// Constant envelope `[lo, hi]` on every cell.
    pub fn constant(period: Interval, order: usize, n_time: usize, value: Interval) -> Result<Self> {
        Self::new(period, order, vec![value.lo(); n_time], vec![value.hi(); n_time])
    }

    pub fn n_time(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Left boundary of cell `j`; `boundary(n_time)` is `L_hi`.
    pub fn boundary(&self, j: usize) -> f64 {
        let n = self.n_time();
        if j >= n { self.period.hi() } else { (j as f64 * self.period.hi()) / n as f64 }
    }

    pub fn cell(&self, j: usize) -> Interval {
        Interval::spanning(self.lower[j], self.upper[j])
    }

    pub fn cell_span(&self, j: usize) -> (f64, f64) {
        (self.boundary(j), self.boundary(j + 1))
    }

    /// Hull of every cell meeting `[lo, hi]`, clipped to `[0, L_hi]`.
    pub fn query(&self, lo: f64, hi: f64) -> Interval {
        let n = self.n_time();
        let lo = lo.max(0.0);
        let hi = hi.min(self.period.hi());
        if lo > hi {
            return Interval::EMPTY;
        }
        let guess = ((lo / self.period.hi()) * n as f64).floor();
        let mut j = if guess.is_finite() && guess > 0.0 { (guess as usize).min(n - 1) } else { 0 };
        while j > 0 && self.boundary(j) >= lo {
            j -= 1;
        }
        while j + 1 < n && self.boundary(j + 1) < lo {
            j += 1;
        }
        let mut out = Interval::EMPTY;
        while j < n && self.boundary(j) <= hi {
            out = out.hull(self.cell(j));
            j += 1;
        }
        out
    }

    /// Hull of every cell.
    pub fn range(&self) -> Interval {
        (0..self.n_time()).fold(Interval::EMPTY, |acc, j| acc.hull(self.cell(j)))
    }

    /// Encloses `y(t - 1)` for every `t` in cell `j`, wrapping negative times by one period.
    pub fn delayed(&self, j: usize) -> Interval {
        let (t0, t1) = self.cell_span(j);
        let lo = sub_down(t0, 1.0);
        let hi = sub_up(t1, 1.0);
        let mut out = Interval::EMPTY;
        if hi >= 0.0 {
            out = out.hull(self.query(lo, hi));
        }
        if lo < 0.0 {
            let wrap_lo = add_down(lo, self.period.lo());
            let wrap_hi = add_up(hi.min(0.0), self.period.hi());
            if wrap_lo < 0.0 {
                return self.range();
            }
            out = out.hull(self.query(wrap_lo, wrap_hi));
        }
        out
    }
}

/// Envelopes for orders `0..=S` of one candidate solution.
#[derive(Clone, Debug, PartialEq)]
pub struct EnvelopeSet {
    orders: Vec<BoundingFunction>,
    pub provenance: Provenance,
}

impl EnvelopeSet {
    pub fn new(orders: Vec<BoundingFunction>, provenance: Provenance) -> Result<Self> {
        let first = orders.first().ok_or_else(|| Error::Argument("envelope set needs order 0".into()))?;
        for (s, f) in orders.iter().enumerate() {
            if f.order != s || f.n_time() != first.n_time() || f.period != first.period {
                return Err(Error::ShapeMismatch(format!("order {s} does not share the grid and period of order 0")));
            }
        }
        Ok(EnvelopeSet { orders, provenance })
    }

    /// Highest derivative order `S`.
    pub fn max_order(&self) -> usize {
        self.orders.len() - 1
    }

    pub fn order(&self, s: usize) -> &BoundingFunction {
        &self.orders[s]
    }

    pub fn orders(&self) -> &[BoundingFunction] {
        &self.orders
    }

    pub fn period(&self) -> Interval {
        self.orders[0].period
    }

    pub fn n_time(&self) -> usize {
        self.orders[0].n_time()
    }

    /// Keeps orders `0..=s`.
    pub fn truncated(&self, s: usize) -> EnvelopeSet {
        EnvelopeSet { orders: self.orders[..=s.min(self.max_order())].to_vec(), provenance: self.provenance }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Bounds derivatives up to order `S` from a bound on the solution itself.
///
/// Differentiating `y' = -alpha y(t-1) (1 + y(t))` gives
/// `y^(s) = -alpha Σ_r C(s-1, r) y^(r)(t-1) v^(s-1-r)(t)` with `v = 1 + y`,
/// which only involves lower orders at `t` and `t - 1`.
pub fn bootstrap_envelopes(y0: &BoundingFunction, alpha: Interval, max_order: usize) -> Result<EnvelopeSet> {
    let n = y0.n_time();
    let mut orders = vec![BoundingFunction { order: 0, ..y0.clone() }];
    let mut delayed: Vec<Vec<Interval>> = vec![(0..n).map(|j| y0.delayed(j)).collect()];
    for s in 1..=max_order {
        let mut lower = Vec::with_capacity(n);
        let mut upper = Vec::with_capacity(n);
        for j in 0..n {
            let mut acc = Interval::ZERO;
            for r in 0..s {
                let lagged = delayed[r][j];
                let q = s - 1 - r;
                let current = if q == 0 { Interval::ONE + orders[0].cell(j) } else { orders[q].cell(j) };
                // Binomial coefficients are small integers, exact in f64.
                acc += lagged * current * binomial(s - 1, r);
            }
            let v = -(alpha * acc);
            lower.push(v.lo());
            upper.push(v.hi());
        }
        let f = BoundingFunction::new(y0.period, s, lower, upper)?;
        delayed.push((0..n).map(|j| f.delayed(j)).collect());
        orders.push(f);
    }
    EnvelopeSet::new(orders, Provenance::Rigorous)
}

/// Serializes envelope sets; each block starts with `n_time S L_lo L_hi TAG`.
pub fn write_envelopes(path: &Path, sets: &[EnvelopeSet]) -> Result<()> {
    let mut out = String::from("# n_time S L_lo L_hi provenance, then n_time rows of lower upper per order\n");
    for set in sets {
        let p = set.period();
        writeln!(out, "{} {} {:?} {:?} {}", set.n_time(), set.max_order(), p.lo(), p.hi(), set.provenance.tag())
            .unwrap();
        for f in set.orders() {
            for j in 0..f.n_time() {
                writeln!(out, "{:?} {:?}", f.lower[j], f.upper[j]).unwrap();
            }
        }
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Parses envelope sets from text and validates every invariant.
pub fn parse_envelopes(text: &str) -> Result<Vec<EnvelopeSet>> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let mut sets = Vec::new();
    while let Some((line, header)) = lines.next() {
        let parse_err = |msg: String| Error::Parse { line, msg };
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(parse_err(format!("expected `n_time S L_lo L_hi TAG`, got {header:?}")));
        }
        let n_time: usize = fields[0].parse().map_err(|_| parse_err(format!("bad n_time {:?}", fields[0])))?;
        let max_order: usize = fields[1].parse().map_err(|_| parse_err(format!("bad order {:?}", fields[1])))?;
        let l_lo: f64 = fields[2].parse().map_err(|_| parse_err(format!("bad L_lo {:?}", fields[2])))?;
        let l_hi: f64 = fields[3].parse().map_err(|_| parse_err(format!("bad L_hi {:?}", fields[3])))?;
        let provenance =
            Provenance::parse(fields[4]).ok_or_else(|| parse_err(format!("unknown provenance {:?}", fields[4])))?;
        if n_time == 0 {
            return Err(parse_err("n_time must be positive".into()));
        }
        let period = Interval::new(l_lo, l_hi).map_err(|e| parse_err(e.to_string()))?;
        let mut orders = Vec::with_capacity(max_order + 1);
        for s in 0..=max_order {
            let mut lower = Vec::with_capacity(n_time);
            let mut upper = Vec::with_capacity(n_time);
            for _ in 0..n_time {
                let (row_line, row) = lines
                    .next()
                    .ok_or_else(|| Error::Parse { line, msg: format!("order {s} ends before {n_time} rows") })?;
                let vals: Vec<f64> = row
                    .split_whitespace()
                    .map(|v| v.parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::Parse { line: row_line, msg: format!("bad row {row:?}") })?;
                if vals.len() != 2 {
                    return Err(Error::Parse { line: row_line, msg: format!("expected `lower upper`, got {row:?}") });
                }
                lower.push(vals[0]);
                upper.push(vals[1]);
            }
            orders.push(BoundingFunction::new(period, s, lower, upper).map_err(|e| parse_err(e.to_string()))?);
        }
        sets.push(EnvelopeSet::new(orders, provenance)?);
    }
    Ok(sets)
}

pub fn read_envelopes(path: &Path) -> Result<Vec<EnvelopeSet>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_envelopes(&text).map_err(|e| match e {
        Error::Parse { line, msg } => {
            Error::Io { path: path.display().to_string(), msg: format!("line {line}: {msg}") }
        }
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn zero_envelope_stays_zero() {
        let y0 = BoundingFunction::constant(iv(4.0, 4.1), 0, 64, Interval::ZERO).unwrap();
        let set = bootstrap_envelopes(&y0, iv(1.8, 1.9), 3).unwrap();
        for s in 0..=3 {
            assert_eq!(set.order(s).range(), Interval::ZERO);
        }
    }

    #[test]
    fn constant_envelope_worst_case_product() {
        let (a, m) = (1.7, 0.3);
        let y0 = BoundingFunction::constant(iv(4.0, 4.2), 0, 50, iv(-m, m)).unwrap();
        let set = bootstrap_envelopes(&y0, Interval::point(a), 1).unwrap();
        let bound = a * m * (1.0 + m);
        let r = set.order(1).range();
        assert!(r.lo() >= -bound * (1.0 + 1e-15) && r.hi() <= bound * (1.0 + 1e-15), "{r}");
    }

    #[test]
    fn query_hulls_overlapping_cells() {
        let lower: Vec<f64> = (0..10).map(|j| j as f64).collect();
        let upper: Vec<f64> = (0..10).map(|j| j as f64 + 0.5).collect();
        let f = BoundingFunction::new(iv(9.0, 10.0), 0, lower, upper).unwrap();
        assert_eq!(f.query(2.5, 3.5), iv(2.0, 3.5));
        assert_eq!(f.query(3.0, 3.0), iv(2.0, 3.5));
        assert_eq!(f.query(-1.0, 0.1), iv(0.0, 0.5));
        assert_eq!(f.query(9.9, 20.0), iv(9.0, 9.5));
    }

    #[test]
    fn delayed_wraps_by_period() {
        let lower: Vec<f64> = (0..10).map(|j| j as f64).collect();
        let upper = lower.clone();
        let f = BoundingFunction::new(iv(9.5, 10.0), 0, lower, upper).unwrap();
        // cell 0 is [0, 1]; t - 1 lies in [-1, 0], which wraps to [8.5, 10].
        let d = f.delayed(0);
        assert!(d.contains(0.0) && d.contains(8.0) && d.contains(9.0));
        // cell 5 is [5, 6]; t - 1 lies in [4, 5].
        assert_eq!(f.delayed(5), iv(3.0, 5.0));
    }

    #[test]
    fn forcing_check_on_trig_fixture() {
        let omega = 1.4;
        let period = 2.0 * std::f64::consts::PI / omega;
        let n = 400;
        let alpha = 1.9;
        let y = |t: f64| 0.2 * (omega * t).cos();
        let p = iv(period, period * (1.0 + 1e-12));
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        let probe = BoundingFunction::constant(p, 0, n, Interval::ZERO).unwrap();
        for j in 0..n {
            let (t0, t1) = probe.cell_span(j);
            let ys: Vec<f64> = (0..=16).map(|i| y(t0 + (t1 - t0) * i as f64 / 16.0)).collect();
            let lo = ys.iter().cloned().fold(f64::INFINITY, f64::min) - 5e-3;
            let hi = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 5e-3;
            lower.push(lo);
            upper.push(hi);
        }
        let y0 = BoundingFunction::new(p, 0, lower, upper).unwrap();
        let set = bootstrap_envelopes(&y0, Interval::point(alpha), 3).unwrap();
        for j in 0..n {
            let (t0, t1) = y0.cell_span(j);
            let t = 0.5 * (t0 + t1);
            let forced = -alpha * y(t - 1.0) * (1.0 + y(t));
            assert!(set.order(1).cell(j).contains(forced), "cell {j}");
        }
    }

    #[test]
    fn envelope_file_round_trip() {
        let y0 = BoundingFunction::new(iv(4.0, 4.5), 0, vec![-0.1, 0.2, 0.3], vec![0.1, 0.25, 1.0 / 3.0]).unwrap();
        let mut set = bootstrap_envelopes(&y0, iv(1.8, 1.9), 2).unwrap();
        set.provenance = Provenance::Fixture;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("env.txt");
        write_envelopes(&path, &[set.clone(), set.clone()]).unwrap();
        let back = read_envelopes(&path).unwrap();
        assert_eq!(back, vec![set.clone(), set]);
    }

    #[test]
    fn parse_rejects_inverted_cell() {
        let text = "2 0 4.0 4.5 FIXTURE\n0.0 1.0\n1.0 0.5\n";
        assert!(parse_envelopes(text).is_err());
        let bad_tag = "1 0 4.0 4.5 MAYBE\n0.0 1.0\n";
        assert!(parse_envelopes(bad_tag).is_err());
    }
}
