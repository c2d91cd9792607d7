//! Non-rigorous envelope fixtures built around oracle solutions.
//!
//! These stand in for a validated envelope generator. Every envelope produced
//! here is tagged `Provenance::Fixture`, and so is everything derived from it.

use num_complex::Complex64;

use super::envelope::{BoundingFunction, EnvelopeSet, Provenance, bootstrap_envelopes};
use crate::error::{Error, Result};
use crate::functional::CenterPoint;
use crate::interval::Interval;
use crate::oracle::{newton, slowly_oscillating_solution};

#[derive(Clone, Debug, PartialEq)]
pub struct FixtureParams {
    /// Parameter range the envelopes must cover.
    pub alpha: Interval,
    /// Number of envelope sets; each covers an equal share of `alpha`.
    pub pieces: usize,
    /// Oracle solutions sampled per piece, endpoints included.
    pub samples: usize,
    pub n_time: usize,
    /// Highest derivative order `S`.
    pub max_order: usize,
    /// Inflation of the solution envelope, applied to `x = ln(1 + y)`.
    pub margin: f64,
    /// Relative inflation of the period interval.
    pub period_margin: f64,
    /// Modes used by the oracle.
    pub modes: usize,
}

impl Default for FixtureParams {
    fn default() -> Self {
        FixtureParams {
            alpha: Interval::spanning(1.88, 1.89),
            pieces: 4,
            samples: 5,
            n_time: 1024,
            max_order: 3,
            margin: 1e-3,
            period_margin: 1e-4,
            modes: 24,
        }
    }
}

fn eval(x: &CenterPoint, order: u32, t: f64) -> f64 {
    x.coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let w = x.omega * (i + 1) as f64;
            2.0 * (c * Complex64::new(0.0, w).powu(order) * Complex64::from_polar(1.0, w * t)).re
        })
        .sum()
}

/// Time-shifts a solution so that `y(0) = 0` and `y'(0) > 0`.
pub fn aligned_profile(x: &CenterPoint) -> CenterPoint {
    let period = 2.0 * std::f64::consts::PI / x.omega;
    // The first harmonic crosses zero upward a quarter period before its peak.
    let mut t = -0.25 * period;
    let samples = 64;
    for i in 0..samples {
        let a = -0.5 * period + period * i as f64 / samples as f64;
        let b = a + period / samples as f64;
        if eval(x, 0, a) <= 0.0 && eval(x, 0, b) > 0.0 {
            t = 0.5 * (a + b);
            break;
        }
    }
    for _ in 0..50 {
        let d = eval(x, 1, t);
        if d == 0.0 {
            break;
        }
        let step = eval(x, 0, t) / d;
        t -= step;
        if step.abs() < 1e-15 * period {
            break;
        }
    }
    let coeffs = x
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c * Complex64::from_polar(1.0, x.omega * (i + 1) as f64 * t))
        .collect();
    CenterPoint { alpha: x.alpha, omega: x.omega, coeffs }
}

fn branch_samples(alphas: &[f64], modes: usize) -> Result<Vec<CenterPoint>> {
    let mut out: Vec<CenterPoint> = Vec::with_capacity(alphas.len());
    for &a in alphas {
        let next = match out.last() {
            Some(prev) => {
                let mut guess = prev.clone();
                guess.alpha = a;
                newton(&guess, 1e-13, 60)?
            }
            None => slowly_oscillating_solution(a, modes, 0.02)?,
        };
        out.push(next);
    }
    Ok(out)
}

fn envelope_piece(alpha: Interval, p: &FixtureParams) -> Result<EnvelopeSet> {
    let samples = p.samples.max(2);
    let alphas: Vec<f64> =
        (0..samples).map(|i| alpha.lo() + (alpha.hi() - alpha.lo()) * i as f64 / (samples - 1) as f64).collect();
    let sols: Vec<CenterPoint> = branch_samples(&alphas, p.modes)?.iter().map(aligned_profile).collect();
    let periods: Vec<f64> = sols.iter().map(|x| 2.0 * std::f64::consts::PI / x.omega).collect();
    let l_lo = periods.iter().cloned().fold(f64::INFINITY, f64::min) * (1.0 - p.period_margin);
    let l_hi = periods.iter().cloned().fold(f64::NEG_INFINITY, f64::max) * (1.0 + p.period_margin);
    let period = Interval::new(l_lo, l_hi)?;
    let probe = BoundingFunction::constant(period, 0, p.n_time, Interval::ZERO)?;
    let q = 8;
    let mut lower = Vec::with_capacity(p.n_time);
    let mut upper = Vec::with_capacity(p.n_time);
    for j in 0..p.n_time {
        let (t0, t1) = probe.cell_span(j);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for x in &sols {
            let mut slope: f64 = 0.0;
            for i in 0..=q {
                let t = t0 + (t1 - t0) * i as f64 / q as f64;
                let y = eval(x, 0, t);
                lo = lo.min(y);
                hi = hi.max(y);
                slope = slope.max(eval(x, 1, t).abs());
            }
            let slack = slope * (t1 - t0) / q as f64;
            lo -= slack;
            hi += slack;
        }
        if !(lo > -1.0) {
            return Err(Error::Argument(format!("oracle profile reaches y <= -1 in cell {j}")));
        }
        // y = e^x - 1 with the margin applied to x.
        let x_lo = Interval::point(1.0 + lo).ln()? - p.margin;
        let x_hi = Interval::point(1.0 + hi).ln()? + p.margin;
        lower.push((x_lo.exp() - 1.0).lo());
        upper.push((x_hi.exp() - 1.0).hi());
    }
    let y0 = BoundingFunction::new(period, 0, lower, upper)?;
    let mut set = bootstrap_envelopes(&y0, alpha, p.max_order)?;
    set.provenance = Provenance::Fixture;
    Ok(set)
}

/// Envelope sets around the oracle branch, one per equal share of the parameter range.
pub fn fixture_envelopes(p: &FixtureParams) -> Result<Vec<EnvelopeSet>> {
    if p.pieces == 0 || p.n_time == 0 {
        return Err(Error::Argument("fixture needs at least one piece and one cell".into()));
    }
    let (lo, hi) = (p.alpha.lo(), p.alpha.hi());
    (0..p.pieces)
        .map(|i| {
            let a = if i == 0 { lo } else { lo + (hi - lo) * i as f64 / p.pieces as f64 };
            let b = if i + 1 == p.pieces { hi } else { lo + (hi - lo) * (i + 1) as f64 / p.pieces as f64 };
            envelope_piece(Interval::spanning(a, b), p)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aligned_profile_starts_on_upward_zero() {
        let x = slowly_oscillating_solution(1.85, 16, 0.02).unwrap();
        let y = aligned_profile(&x);
        assert!(eval(&y, 0, 0.0).abs() < 1e-12);
        assert!(eval(&y, 1, 0.0) > 0.0);
    }

    #[test]
    fn fixture_contains_sampled_solutions() {
        let p = FixtureParams { pieces: 1, samples: 3, n_time: 256, ..FixtureParams::default() };
        let sets = fixture_envelopes(&p).unwrap();
        assert_eq!(sets.len(), 1);
        let set = &sets[0];
        assert_eq!(set.provenance, Provenance::Fixture);
        let x = aligned_profile(&slowly_oscillating_solution(1.885, 24, 0.02).unwrap());
        let l = 2.0 * std::f64::consts::PI / x.omega;
        assert!(set.period().contains(l));
        for s in 0..=3 {
            let f = set.order(s);
            for j in 0..f.n_time() {
                let (t0, t1) = f.cell_span(j);
                let v = eval(&x, s as u32, 0.5 * (t0 + t1));
                assert!(f.cell(j).contains(v), "order {s} cell {j}: {v} not in {}", f.cell(j));
            }
        }
    }
}
