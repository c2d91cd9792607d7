use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use super::Interval;
use super::round::{add_down, add_up, mul_down, mul_up, sqrt_down, sqrt_up};
use crate::error::Result;

/// Axis-aligned rectangle `re × im` in the complex plane.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexInterval {
    pub const ZERO: ComplexInterval = ComplexInterval { re: Interval::ZERO, im: Interval::ZERO };
    pub const ONE: ComplexInterval = ComplexInterval { re: Interval::ONE, im: Interval::ZERO };
    pub const I: ComplexInterval = ComplexInterval { re: Interval::ZERO, im: Interval::ONE };

    pub fn new(re: Interval, im: Interval) -> Self {
        ComplexInterval { re, im }
    }

    pub fn point(re: f64, im: f64) -> Self {
        ComplexInterval { re: Interval::point(re), im: Interval::point(im) }
    }

    pub fn real(re: Interval) -> Self {
        ComplexInterval { re, im: Interval::ZERO }
    }

    /// Rectangle hull of `{e^{iφ} : φ ∈ theta}`.
    pub fn expi(theta: Interval) -> Result<Self> {
        let (c, s) = theta.cos_sin()?;
        Ok(ComplexInterval { re: c, im: s })
    }

    pub fn is_empty(self) -> bool {
        self.re.is_empty() || self.im.is_empty()
    }

    pub fn conj(self) -> Self {
        ComplexInterval { re: self.re, im: -self.im }
    }

    /// Multiplies by every unit vector with angle in `theta`.
    pub fn scale_by_unit(self, theta: Interval) -> Result<Self> {
        Ok(self * ComplexInterval::expi(theta)?)
    }

    pub fn scale(self, k: Interval) -> Self {
        ComplexInterval { re: self.re * k, im: self.im * k }
    }

    /// Multiplication by `i`.
    pub fn mul_i(self) -> Self {
        ComplexInterval { re: -self.im, im: self.re }
    }

    /// Upper bound on `|z|` over the rectangle.
    pub fn modulus_upper(self) -> f64 {
        let (a, b) = (self.re.mag(), self.im.mag());
        sqrt_up(add_up(mul_up(a, a), mul_up(b, b)))
    }

    /// Lower bound on `|z|` over the rectangle (distance to the origin).
    pub fn mignitude(self) -> f64 {
        let (a, b) = (self.re.mig(), self.im.mig());
        sqrt_down(add_down(mul_down(a, a), mul_down(b, b)))
    }

    pub fn hull(self, other: Self) -> Self {
        ComplexInterval { re: self.re.hull(other.re), im: self.im.hull(other.im) }
    }

    /// Componentwise intersection; `None` when the rectangles are disjoint.
    pub fn intersect(self, other: Self) -> Option<Self> {
        let re = self.re.intersect(other.re);
        let im = self.im.intersect(other.im);
        if re.is_empty() || im.is_empty() { None } else { Some(ComplexInterval { re, im }) }
    }

    pub fn contains(self, re: f64, im: f64) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn subset_of(self, other: Self) -> bool {
        self.re.subset_of(other.re) && self.im.subset_of(other.im)
    }

    pub fn mid(self) -> (f64, f64) {
        (self.re.mid(), self.im.mid())
    }
}

impl fmt::Debug for ComplexInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + i{:?}", self.re, self.im)
    }
}

impl Add for ComplexInterval {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        ComplexInterval { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl AddAssign for ComplexInterval {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for ComplexInterval {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        ComplexInterval { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Neg for ComplexInterval {
    type Output = Self;
    fn neg(self) -> Self {
        ComplexInterval { re: -self.re, im: -self.im }
    }
}

impl Mul for ComplexInterval {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        ComplexInterval { re: self.re * rhs.re - self.im * rhs.im, im: self.re * rhs.im + self.im * rhs.re }
    }
}

impl Mul<Interval> for ComplexInterval {
    type Output = Self;
    fn mul(self, rhs: Interval) -> Self {
        self.scale(rhs)
    }
}

impl std::iter::Sum for ComplexInterval {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(ComplexInterval::ZERO, |acc, z| acc + z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::HALF_PI;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn unit_rotation_is_exact() {
        assert_eq!(ComplexInterval::ONE * ComplexInterval::I, ComplexInterval::I);
    }

    #[test]
    fn conj_flips_imaginary_rectangle() {
        let z = ComplexInterval::new(iv(1.0, 2.0), iv(-3.0, 4.0));
        assert_eq!(z.conj(), ComplexInterval::new(iv(1.0, 2.0), iv(-4.0, 3.0)));
    }

    #[test]
    fn three_four_five() {
        let z = ComplexInterval::point(3.0, 4.0);
        assert_eq!(z.modulus_upper(), 5.0);
        assert_eq!(z.mignitude(), 5.0);
    }

    #[test]
    fn mignitude_is_zero_when_origin_inside() {
        let z = ComplexInterval::new(iv(-1.0, 2.0), iv(-3.0, 1.0));
        assert_eq!(z.mignitude(), 0.0);
        assert!(z.modulus_upper() >= 13f64.sqrt());
    }

    #[test]
    fn quarter_arc_enclosed() {
        let arc = ComplexInterval::ONE.scale_by_unit(iv(0.0, HALF_PI.hi())).unwrap();
        assert!(arc.re.contains(0.0) && arc.re.contains(1.0));
        assert!(arc.im.contains(0.0) && arc.im.contains(1.0));
        assert!(arc.re.lo() >= -1e-15 && arc.im.hi() <= 1.0);
    }
}
