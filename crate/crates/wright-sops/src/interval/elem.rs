//! Elementary functions with rigorous range enclosures.
//!
//! Endpoint values come from the platform libm (accurate to within one ulp
//! on the supported targets) and are widened by two ulps. Periodic functions
//! locate their extrema with an enclosure of pi.

use super::Interval;
use super::round::{sqrt_down, sqrt_up, step_down, step_up};
use crate::error::{Error, Result};

/// Enclosure of pi.
pub const PI: Interval = Interval::raw(std::f64::consts::PI, 3.1415926535897936);
/// Enclosure of pi/2.
pub const HALF_PI: Interval = Interval::raw(std::f64::consts::FRAC_PI_2, 1.5707963267948968);
/// Enclosure of 2 pi.
pub const TWO_PI: Interval = Interval::raw(std::f64::consts::TAU, 6.283185307179587);

/// Largest argument magnitude accepted by `sin` and `cos`.
pub const TRIG_ARG_LIMIT: f64 = 32768.0;

const WIDEN: u32 = 2;

fn widen(lo: f64, hi: f64) -> (f64, f64) {
    (step_down(lo, WIDEN), step_up(hi, WIDEN))
}

/// Value at a point, widened; exact inputs with known exact images stay exact.
fn point_enclosure(x: f64, f: fn(f64) -> f64, exact: Option<(f64, f64)>) -> (f64, f64) {
    if let Some((x0, y0)) = exact
        && x == x0
    {
        return (y0, y0);
    }
    let y = f(x);
    widen(y, y)
}

/// Kind of periodic function handled by `Interval::trig`.
#[derive(Clone, Copy)]
enum Trig {
    Sin,
    Cos,
}

impl Interval {
    pub fn exp(self) -> Interval {
        if self.is_empty() {
            return self;
        }
        let (lo, _) = point_enclosure(self.lo(), f64::exp, Some((0.0, 1.0)));
        let (_, hi) = point_enclosure(self.hi(), f64::exp, Some((0.0, 1.0)));
        Interval::raw(lo.max(0.0), hi)
    }

    pub fn ln(self) -> Result<Interval> {
        if self.is_empty() {
            return Ok(self);
        }
        if self.lo() < 0.0 {
            return Err(Error::Domain { func: "ln", lo: self.lo(), hi: self.hi() });
        }
        if self.hi() == 0.0 {
            return Err(Error::Domain { func: "ln", lo: self.lo(), hi: self.hi() });
        }
        let lo =
            if self.lo() == 0.0 { f64::NEG_INFINITY } else { point_enclosure(self.lo(), f64::ln, Some((1.0, 0.0))).0 };
        let (_, hi) = point_enclosure(self.hi(), f64::ln, Some((1.0, 0.0)));
        Ok(Interval::raw(lo, hi))
    }

    pub fn sqrt(self) -> Result<Interval> {
        if self.is_empty() {
            return Ok(self);
        }
        if self.lo() < 0.0 {
            return Err(Error::Domain { func: "sqrt", lo: self.lo(), hi: self.hi() });
        }
        Ok(Interval::raw(sqrt_down(self.lo()), sqrt_up(self.hi())))
    }

    pub fn atan(self) -> Interval {
        if self.is_empty() {
            return self;
        }
        let (lo, _) = point_enclosure(self.lo(), f64::atan, Some((0.0, 0.0)));
        let (_, hi) = point_enclosure(self.hi(), f64::atan, Some((0.0, 0.0)));
        Interval::raw(lo.max(-HALF_PI.hi()), hi.min(HALF_PI.hi()))
    }

    pub fn sin(self) -> Result<Interval> {
        self.trig(Trig::Sin)
    }

    pub fn cos(self) -> Result<Interval> {
        self.trig(Trig::Cos)
    }

    /// `(cos x, sin x)` in one call.
    pub fn cos_sin(self) -> Result<(Interval, Interval)> {
        Ok((self.cos()?, self.sin()?))
    }

    /// Real power `x^s`; integral `s` goes through `powi`, otherwise `x >= 0` is required.
    pub fn powf(self, s: f64) -> Result<Interval> {
        if s.fract() == 0.0 && s.abs() < 1.0e9 {
            return self.powi(s as i32);
        }
        if self.is_empty() {
            return Ok(self);
        }
        if self.lo() < 0.0 {
            return Err(Error::Domain { func: "powf", lo: self.lo(), hi: self.hi() });
        }
        Ok((self.ln()? * Interval::point(s)).exp())
    }

    fn trig(self, kind: Trig) -> Result<Interval> {
        if self.is_empty() {
            return Ok(self);
        }
        if self.mag() > TRIG_ARG_LIMIT {
            let func = match kind {
                Trig::Sin => "sin",
                Trig::Cos => "cos",
            };
            return Err(Error::Domain { func, lo: self.lo(), hi: self.hi() });
        }
        let (f, exact): (fn(f64) -> f64, (f64, f64)) = match kind {
            Trig::Sin => (f64::sin, (0.0, 0.0)),
            Trig::Cos => (f64::cos, (0.0, 1.0)),
        };
        if self.width() >= TWO_PI.lo() {
            return Ok(Interval::raw(-1.0, 1.0));
        }
        let (a_lo, a_hi) = point_enclosure(self.lo(), f, Some(exact));
        let (b_lo, b_hi) = point_enclosure(self.hi(), f, Some(exact));
        let mut lo = a_lo.min(b_lo);
        let mut hi = a_hi.max(b_hi);

        // Extrema sit at x_j = (2j + offset) * pi/2; even j is a maximum.
        let offset = match kind {
            Trig::Sin => 1.0,
            Trig::Cos => 0.0,
        };
        let half = std::f64::consts::FRAC_PI_2;
        let j_first = ((self.lo() / half - offset) / 2.0).floor() as i64 - 1;
        let j_last = ((self.hi() / half - offset) / 2.0).ceil() as i64 + 1;
        for j in j_first..=j_last {
            let x = HALF_PI * Interval::point((2 * j) as f64 + offset);
            if x.overlaps(self) {
                if j.rem_euclid(2) == 0 {
                    hi = 1.0;
                } else {
                    lo = -1.0;
                }
            }
        }
        Ok(Interval::raw(lo.max(-1.0), hi.min(1.0)))
    }
}
