//! Outward-rounded interval arithmetic over binary64.

mod complex;
mod elem;
pub(crate) mod matrix;
pub(crate) mod round;

pub use complex::ComplexInterval;
pub use elem::{HALF_PI, PI, TWO_PI};
pub use matrix::{IntervalMatrix, approx_mid_inverse};

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};
use round::*;

/// A closed interval `[lo, hi]` of extended reals, or the empty set.
///
/// Non-empty intervals never hold NaN and satisfy `lo <= hi`, `lo < +inf`, `hi > -inf`.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const EMPTY: Interval = Interval { lo: f64::INFINITY, hi: f64::NEG_INFINITY };
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };
    pub const ENTIRE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(Error::Argument(format!("invalid interval endpoints [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    /// Builds `[lo, hi]`; the caller guarantees validity.
    #[inline]
    pub(crate) const fn raw(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    #[inline]
    pub fn point(x: f64) -> Self {
        assert!(x.is_finite(), "point interval needs a finite value, got {x}");
        Interval { lo: x, hi: x }
    }

    /// `[m - r, m + r]` rounded outward.
    pub fn centered(m: f64, r: f64) -> Self {
        let r = r.abs();
        Interval { lo: sub_down(m, r), hi: add_up(m, r) }
    }

    /// Smallest interval holding both values, in either order.
    pub fn spanning(a: f64, b: f64) -> Self {
        Interval { lo: a.min(b), hi: a.max(b) }
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        !(self.lo <= self.hi)
    }

    #[inline]
    pub fn is_point(self) -> bool {
        self.lo == self.hi
    }

    pub fn is_bounded(self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Midpoint, a float inside the interval (not rigorous).
    pub fn mid(self) -> f64 {
        if self.is_empty() {
            return f64::NAN;
        }
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => {
                let m = 0.5 * self.lo + 0.5 * self.hi;
                m.clamp(self.lo, self.hi)
            }
            (false, false) => 0.0,
            (true, false) => f64::MAX,
            (false, true) => -f64::MAX,
        }
    }

    /// Upper bound on `hi - lo`.
    pub fn width(self) -> f64 {
        if self.is_empty() { 0.0 } else { sub_up(self.hi, self.lo) }
    }

    /// Upper bound on the half width.
    pub fn rad(self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let m = self.mid();
        sub_up(self.hi, m).max(sub_up(m, self.lo))
    }

    /// `max |x|` over the interval.
    pub fn mag(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// `min |x|` over the interval.
    pub fn mig(self) -> f64 {
        if self.lo > 0.0 {
            self.lo
        } else if self.hi < 0.0 {
            -self.hi
        } else {
            0.0
        }
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(self) -> bool {
        self.contains(0.0)
    }

    /// `self ⊆ other`.
    pub fn subset_of(self, other: Interval) -> bool {
        self.is_empty() || (other.lo <= self.lo && self.hi <= other.hi)
    }

    /// `self` lies in the interior of `other`, keeping at least one
    /// representable value of clearance at each end.
    pub fn strictly_inside(self, other: Interval) -> bool {
        !self.is_empty() && other.lo < self.lo.next_down() && self.hi.next_up() < other.hi
    }

    pub fn hull(self, other: Interval) -> Interval {
        if self.is_empty() {
            return other;
        }
        if other.is_empty() {
            return self;
        }
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn hull_point(self, x: f64) -> Interval {
        self.hull(Interval::point(x))
    }

    pub fn intersect(self, other: Interval) -> Interval {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo <= hi { Interval { lo, hi } } else { Interval::EMPTY }
    }

    pub fn overlaps(self, other: Interval) -> bool {
        !self.intersect(other).is_empty()
    }

    /// Splits at the midpoint.
    pub fn bisect(self) -> (Interval, Interval) {
        let m = self.mid();
        (Interval { lo: self.lo, hi: m }, Interval { lo: m, hi: self.hi })
    }

    pub fn abs(self) -> Interval {
        if self.is_empty() {
            return self;
        }
        Interval { lo: self.mig(), hi: self.mag() }
    }

    pub fn sqr(self) -> Interval {
        if self.is_empty() {
            return self;
        }
        let (m, g) = (self.mig(), self.mag());
        Interval { lo: mul_down(m, m), hi: mul_up(g, g) }
    }

    /// Integer power; negative exponents go through `recip`.
    pub fn powi(self, n: i32) -> Result<Interval> {
        if self.is_empty() {
            return Ok(self);
        }
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        let n = n as u32;
        if n == 0 {
            return Ok(Interval::ONE);
        }
        if n.is_multiple_of(2) {
            return Ok(Interval { lo: powi_down(self.mig(), n), hi: powi_up(self.mag(), n) });
        }
        let signed_down = |x: f64| if x >= 0.0 { powi_down(x, n) } else { -powi_up(-x, n) };
        let signed_up = |x: f64| if x >= 0.0 { powi_up(x, n) } else { -powi_down(-x, n) };
        Ok(Interval { lo: signed_down(self.lo), hi: signed_up(self.hi) })
    }

    pub fn recip(self) -> Result<Interval> {
        Interval::ONE.div(self)
    }

    /// Interval quotient; divisors containing zero are rejected.
    pub fn div(self, rhs: Interval) -> Result<Interval> {
        if self.is_empty() || rhs.is_empty() {
            return Ok(Interval::EMPTY);
        }
        if rhs.contains_zero() {
            return Err(Error::DivByZeroSpan { lo: rhs.lo, hi: rhs.hi });
        }
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        let lo = div_down(a, c).min(div_down(a, d)).min(div_down(b, c)).min(div_down(b, d));
        let hi = div_up(a, c).max(div_up(a, d)).max(div_up(b, c)).max(div_up(b, d));
        Ok(Interval { lo, hi })
    }

    /// Division by a positive scalar.
    pub fn div_scalar(self, d: f64) -> Result<Interval> {
        self.div(Interval::point(d))
    }

    pub fn scale(self, k: f64) -> Interval {
        self * Interval::point(k)
    }

    /// Lower endpoint clamped at zero (for quantities known to be non-negative).
    pub fn clamp_nonneg(self) -> Interval {
        if self.is_empty() {
            return self;
        }
        Interval { lo: self.lo.max(0.0), hi: self.hi.max(0.0) }
    }

    /// Range of `max(x, y)` over both intervals.
    pub fn max(self, other: Interval) -> Interval {
        Interval { lo: self.lo.max(other.lo), hi: self.hi.max(other.hi) }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() { write!(f, "[empty]") } else { write!(f, "[{:?}, {:?}]", self.lo, self.hi) }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: Interval) -> Interval {
        if self.is_empty() || rhs.is_empty() {
            return Interval::EMPTY;
        }
        Interval { lo: add_down(self.lo, rhs.lo), hi: add_up(self.hi, rhs.hi) }
    }
}

impl AddAssign for Interval {
    #[inline]
    fn add_assign(&mut self, rhs: Interval) {
        *self = *self + rhs;
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, rhs: Interval) -> Interval {
        if self.is_empty() || rhs.is_empty() {
            return Interval::EMPTY;
        }
        Interval { lo: sub_down(self.lo, rhs.hi), hi: sub_up(self.hi, rhs.lo) }
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        if self.is_empty() {
            return self;
        }
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Mul for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, rhs: Interval) -> Interval {
        if self.is_empty() || rhs.is_empty() {
            return Interval::EMPTY;
        }
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        if a >= 0.0 && c >= 0.0 {
            return Interval { lo: mul_down(a, c), hi: mul_up(b, d) };
        }
        if b <= 0.0 && d <= 0.0 {
            return Interval { lo: mul_down(b, d), hi: mul_up(a, c) };
        }
        let lo = mul_down(a, c).min(mul_down(a, d)).min(mul_down(b, c)).min(mul_down(b, d));
        let hi = mul_up(a, c).max(mul_up(a, d)).max(mul_up(b, c)).max(mul_up(b, d));
        Interval { lo, hi }
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, rhs: f64) -> Interval {
        self + Interval::point(rhs)
    }
}

impl Sub<f64> for Interval {
    type Output = Interval;
    fn sub(self, rhs: f64) -> Interval {
        self - Interval::point(rhs)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, rhs: f64) -> Interval {
        self * Interval::point(rhs)
    }
}

impl std::iter::Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ZERO, |acc, x| acc + x)
    }
}

/// Upper bound of a sum of non-negative floats.
pub fn sum_up(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, add_up)
}
