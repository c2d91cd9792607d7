//! Cubes in parameter × frequency × Fourier-coefficient space.

mod convolution;
mod gamma;
mod record;

pub(crate) use convolution::square_with_phases;
pub use convolution::{convolve_truncated, unit_phases};
pub use gamma::{gamma_brute_force, gamma_constant};
pub use record::{CubeCollection, parse_cube_record, parse_cubes, read_cubes, record_header, write_cubes};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::interval::round::{add_up, div_up, mul_up};
use crate::interval::{ComplexInterval, Interval};

/// Addresses a scalar coordinate of a cube.
///
/// The finite vector is ordered `(omega, a_1, a_2, b_2, ..., a_M, b_M)`; `b_1`
/// is absent because the phase condition pins it to zero. Split dimensions
/// put `alpha` in front of that vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coord {
    Alpha,
    Omega,
    /// Real part of mode `k` (1-based).
    Re(usize),
    /// Imaginary part of mode `k` (1-based).
    Im(usize),
}

impl Coord {
    /// Coordinate at position `i` of the finite vector.
    pub fn from_vector_index(i: usize) -> Coord {
        match i {
            0 => Coord::Omega,
            1 => Coord::Re(1),
            _ if i.is_multiple_of(2) => Coord::Re(i / 2 + 1),
            _ => Coord::Im(i / 2 + 1),
        }
    }

    /// Position in the finite vector; `None` for `alpha` and `b_1`.
    pub fn vector_index(self) -> Option<usize> {
        match self {
            Coord::Alpha | Coord::Im(1) => None,
            Coord::Omega => Some(0),
            Coord::Re(1) => Some(1),
            Coord::Re(k) => Some(2 * k - 2),
            Coord::Im(k) => Some(2 * k - 1),
        }
    }

    /// Split dimension `d`: 0 is `alpha`, `d >= 1` is vector position `d - 1`.
    pub fn from_dim(d: usize) -> Coord {
        if d == 0 { Coord::Alpha } else { Coord::from_vector_index(d - 1) }
    }
}

/// A cube `X_M × X_∞`: interval parameter, frequency and modes `1..=M`,
/// plus the tail `{|c_k| <= C0 / k^s : k > M}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cube {
    pub alpha: Interval,
    pub omega: Interval,
    pub coeffs: Vec<ComplexInterval>,
    pub tail_c0: f64,
    pub decay_s: f64,
}

/// A cube without a parameter interval, as produced from envelopes.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectedCube {
    pub omega: Interval,
    pub coeffs: Vec<ComplexInterval>,
    pub tail_c0: f64,
    pub decay_s: f64,
}

impl ProjectedCube {
    pub fn with_alpha(&self, alpha: Interval) -> Result<Cube> {
        Cube::new(alpha, self.omega, self.coeffs.clone(), self.tail_c0, self.decay_s)
    }

    pub fn m(&self) -> usize {
        self.coeffs.len()
    }

    /// `b_1 = 0` and `a_1 >= 0`.
    pub fn phase_fixed(&self) -> bool {
        phase_fixed(&self.coeffs)
    }
}

fn phase_fixed(coeffs: &[ComplexInterval]) -> bool {
    coeffs.first().is_some_and(|c| c.im == Interval::ZERO && c.re.lo() >= 0.0)
}

impl Cube {
    pub fn new(
        alpha: Interval,
        omega: Interval,
        coeffs: Vec<ComplexInterval>,
        tail_c0: f64,
        decay_s: f64,
    ) -> Result<Cube> {
        if coeffs.is_empty() {
            return Err(Error::Argument("a cube needs at least one mode".into()));
        }
        if !(decay_s > 1.0) || !decay_s.is_finite() {
            return Err(Error::Argument(format!("decay exponent must exceed 1, got {decay_s}")));
        }
        if !(tail_c0 >= 0.0) || !tail_c0.is_finite() {
            return Err(Error::Argument(format!("tail constant must be finite and >= 0, got {tail_c0}")));
        }
        let bounded = |x: Interval| !x.is_empty() && x.is_bounded();
        if !bounded(alpha) || !bounded(omega) || !coeffs.iter().all(|c| bounded(c.re) && bounded(c.im)) {
            return Err(Error::Argument("cube components must be bounded and non-empty".into()));
        }
        Ok(Cube { alpha, omega, coeffs, tail_c0, decay_s })
    }

    /// Number of explicit modes.
    pub fn m(&self) -> usize {
        self.coeffs.len()
    }

    /// Whether the cube lies in the phase-fixed subspace (`b_1 = 0`, `a_1 >= 0`).
    pub fn phase_fixed(&self) -> bool {
        phase_fixed(&self.coeffs)
    }

    pub fn get(&self, c: Coord) -> Interval {
        match c {
            Coord::Alpha => self.alpha,
            Coord::Omega => self.omega,
            Coord::Re(k) => self.coeffs[k - 1].re,
            Coord::Im(k) => self.coeffs[k - 1].im,
        }
    }

    pub fn set(&mut self, c: Coord, v: Interval) {
        match c {
            Coord::Alpha => self.alpha = v,
            Coord::Omega => self.omega = v,
            Coord::Re(k) => self.coeffs[k - 1].re = v,
            Coord::Im(k) => self.coeffs[k - 1].im = v,
        }
    }

    /// The ordered finite vector `(omega, a_1, a_2, b_2, ..., a_M, b_M)`.
    pub fn vector(&self) -> Vec<Interval> {
        (0..2 * self.m()).map(|i| self.get(Coord::from_vector_index(i))).collect()
    }

    pub fn set_vector(&mut self, v: &[Interval]) {
        assert_eq!(v.len(), 2 * self.m(), "vector length must be 2M");
        for (i, &x) in v.iter().enumerate() {
            self.set(Coord::from_vector_index(i), x);
        }
    }

    /// Upper bound for `sup |c_k|` over the rectangle of mode `k`.
    pub fn abs_sup(&self, k: usize) -> Result<f64> {
        if k == 0 || k > self.m() {
            return Err(Error::IndexOutOfRange { index: k, max: self.m() });
        }
        Ok(self.coeffs[k - 1].modulus_upper())
    }

    /// `|X|_k` for every mode, index 0 holding mode 1.
    pub fn abs_sups(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.modulus_upper()).collect()
    }

    /// Upper bound of `2 Σ|c_k|` over the cube, tail included.
    pub fn l1_upper_bound(&self) -> f64 {
        let finite = self.abs_sups().into_iter().fold(0.0, add_up);
        let tail = tail_sum_upper(self.tail_c0, self.decay_s, self.m());
        mul_up(2.0, add_up(finite, tail))
    }

    /// Bisects coordinate `c` at its midpoint.
    pub fn split(&self, c: Coord) -> Result<(Cube, Cube)> {
        if let Coord::Re(k) | Coord::Im(k) = c
            && (k == 0 || k > self.m())
        {
            return Err(Error::IndexOutOfRange { index: k, max: self.m() });
        }
        let x = self.get(c);
        if !(x.lo() < x.hi()) {
            return Err(Error::DegenerateDimension(format!("{c:?} = {x}")));
        }
        let (l, r) = x.bisect();
        let mut a = self.clone();
        let mut b = self.clone();
        a.set(c, l);
        b.set(c, r);
        Ok((a, b))
    }

    /// Bisects split dimension `d` (0 = alpha, then the finite vector).
    pub fn split_dim(&self, d: usize) -> Result<(Cube, Cube)> {
        if d > 2 * self.m() {
            return Err(Error::IndexOutOfRange { index: d, max: 2 * self.m() });
        }
        self.split(Coord::from_dim(d))
    }

    fn check_shape(&self, other: &Cube) -> Result<()> {
        if self.m() != other.m() || self.decay_s != other.decay_s {
            return Err(Error::ShapeMismatch(format!(
                "(M={}, s={}) vs (M={}, s={})",
                self.m(),
                self.decay_s,
                other.m(),
                other.decay_s
            )));
        }
        Ok(())
    }

    /// Componentwise interval hull; the tail constant takes the larger value.
    pub fn hull(&self, other: &Cube) -> Result<Cube> {
        self.check_shape(other)?;
        Ok(Cube {
            alpha: self.alpha.hull(other.alpha),
            omega: self.omega.hull(other.omega),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.hull(*b)).collect(),
            tail_c0: self.tail_c0.max(other.tail_c0),
            decay_s: self.decay_s,
        })
    }

    /// Componentwise intersection, `None` when some component is empty.
    pub fn intersect(&self, other: &Cube) -> Result<Option<Cube>> {
        self.check_shape(other)?;
        let alpha = self.alpha.intersect(other.alpha);
        let omega = self.omega.intersect(other.omega);
        if alpha.is_empty() || omega.is_empty() {
            return Ok(None);
        }
        let mut coeffs = Vec::with_capacity(self.m());
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            match a.intersect(*b) {
                Some(c) => coeffs.push(c),
                None => return Ok(None),
            }
        }
        Ok(Some(Cube { alpha, omega, coeffs, tail_c0: self.tail_c0.min(other.tail_c0), decay_s: self.decay_s }))
    }

    /// `self ⊆ other` as sets, tails included.
    pub fn subset_of(&self, other: &Cube) -> bool {
        self.m() == other.m()
            && self.decay_s == other.decay_s
            && self.alpha.subset_of(other.alpha)
            && self.omega.subset_of(other.omega)
            && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.subset_of(*b))
            && self.tail_c0 <= other.tail_c0
    }

    /// Membership of a point whose modes beyond `coeffs.len()` are zero.
    pub fn contains_point(&self, alpha: f64, omega: f64, coeffs: &[Complex64]) -> bool {
        if !self.alpha.contains(alpha) || !self.omega.contains(omega) {
            return false;
        }
        for (k, c) in coeffs.iter().enumerate() {
            let k = k + 1;
            if k <= self.m() {
                if !self.coeffs[k - 1].contains(c.re, c.im) {
                    return false;
                }
            } else {
                let bound = self.tail_c0 / (k as f64).powf(self.decay_s);
                if c.norm() > bound * (1.0 + 1e-12) {
                    return false;
                }
            }
        }
        true
    }

    /// Log of the product of the widths of the first `m` vector coordinates;
    /// zero widths count as one ulp.
    pub fn leading_log_volume(&self, m: usize) -> f64 {
        (0..m.min(2 * self.m()))
            .map(|i| {
                let x = self.get(Coord::from_vector_index(i));
                let w = x.hi() - x.lo();
                if w > 0.0 { w.ln() } else { ulp(x.mid()).ln() }
            })
            .sum()
    }
}

/// Distance to the next representable value above `|x|`.
fn ulp(x: f64) -> f64 {
    let a = x.abs();
    a.next_up() - a
}

/// Upper bound of `Σ_{k>M} C0/k^s <= C0 / ((s-1) M^{s-1})`.
pub fn tail_sum_upper(c0: f64, s: f64, m: usize) -> f64 {
    if c0 == 0.0 {
        return 0.0;
    }
    let mpow = Interval::point(m as f64).powf(s - 1.0).expect("positive base");
    let denom = mpow * (s - 1.0);
    div_up(c0, denom.lo())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    pub(crate) fn zero_cube(m: usize) -> Cube {
        Cube::new(iv(1.0, 2.0), iv(2.0, 4.0), vec![ComplexInterval::ZERO; m], 0.0, 3.0).unwrap()
    }

    #[test]
    fn coordinate_ordering() {
        assert_eq!(Coord::from_vector_index(0), Coord::Omega);
        assert_eq!(Coord::from_vector_index(1), Coord::Re(1));
        assert_eq!(Coord::from_vector_index(2), Coord::Re(2));
        assert_eq!(Coord::from_vector_index(3), Coord::Im(2));
        assert_eq!(Coord::from_vector_index(19), Coord::Im(10));
        for i in 0..20 {
            assert_eq!(Coord::from_vector_index(i).vector_index(), Some(i));
        }
        assert_eq!(Coord::Im(1).vector_index(), None);
        assert_eq!(Coord::from_dim(0), Coord::Alpha);
        assert_eq!(Coord::from_dim(1), Coord::Omega);
    }

    #[test]
    fn abs_sup_examples() {
        let mut x = zero_cube(5);
        assert_eq!(x.abs_sup(1).unwrap(), 0.0);
        x.coeffs[1] = ComplexInterval::point(3.0, 4.0);
        assert_eq!(x.abs_sup(2).unwrap(), 5.0);
        x.coeffs[2] = ComplexInterval::new(iv(-1.0, 2.0), iv(-3.0, 1.0));
        let v = x.abs_sup(3).unwrap();
        assert!(v >= 13f64.sqrt() && v <= 13f64.sqrt() * (1.0 + 1e-15));
        assert!(matches!(x.abs_sup(6), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(x.abs_sup(0), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn l1_bound_examples() {
        let mut x = zero_cube(5);
        assert_eq!(x.l1_upper_bound(), 0.0);
        x.tail_c0 = 1.0;
        let d = x.l1_upper_bound();
        assert!((0.04..=0.04 * (1.0 + 1e-14)).contains(&d));
    }

    #[test]
    fn split_examples() {
        let x = zero_cube(5);
        let (a, b) = x.split_dim(0).unwrap();
        assert_eq!((a.alpha, b.alpha), (iv(1.0, 1.5), iv(1.5, 2.0)));
        let (a, b) = x.split_dim(1).unwrap();
        assert_eq!((a.omega, b.omega), (iv(2.0, 3.0), iv(3.0, 4.0)));
        assert!(matches!(x.split(Coord::Im(1)), Err(Error::DegenerateDimension(_))));
        assert!(matches!(x.split_dim(11), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn hull_and_intersect_examples() {
        let mut x = zero_cube(5);
        x.tail_c0 = 0.3;
        let mut y = zero_cube(5);
        y.alpha = iv(3.0, 4.0);
        y.tail_c0 = 0.7;
        assert_eq!(x.hull(&x).unwrap(), x);
        let h = x.hull(&y).unwrap();
        assert_eq!(h.alpha, iv(1.0, 4.0));
        assert_eq!(h.tail_c0, 0.7);
        assert_eq!(x.intersect(&x).unwrap(), Some(x.clone()));
        assert_eq!(x.intersect(&y).unwrap(), None);
        let mut z = zero_cube(5);
        z.tail_c0 = 0.7;
        assert_eq!(x.intersect(&z).unwrap().unwrap().tail_c0, 0.3);
        let w = zero_cube(6);
        assert!(matches!(x.hull(&w), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn phase_fixed_is_derived() {
        let mut x = zero_cube(5);
        assert!(x.phase_fixed());
        x.coeffs[0].im = iv(-0.1, 0.1);
        assert!(!x.phase_fixed());
    }

    #[test]
    fn leading_log_volume_uses_ulp_for_points() {
        let x = zero_cube(5);
        assert!(x.leading_log_volume(3).is_finite());
        assert_eq!(x.leading_log_volume(1), 2f64.ln());
    }
}
