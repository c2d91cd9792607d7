//! Floating-point evaluation at single points, for Newton iterations and test oracles.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{CenterPoint, galerkin_jacobian};
use crate::interval::Interval;

/// `F` for a finitely supported sequence `c` (zero beyond `c.len()`), modes `1..=kmax`.
pub fn full_residual(alpha: f64, omega: f64, c: &[Complex64], kmax: usize) -> Vec<Complex64> {
    let n = c.len();
    let phase: Vec<Complex64> = (0..=n + kmax).map(|j| Complex64::from_polar(1.0, -omega * j as f64)).collect();
    let at = |j: usize| if j >= 1 && j <= n { c[j - 1] } else { Complex64::new(0.0, 0.0) };
    (1..=kmax)
        .map(|k| {
            let lin = Complex64::new(phase[k].re, phase[k].im + omega / alpha * k as f64) * at(k);
            let mut acc = lin;
            for j in k.saturating_sub(n).max(1)..k.min(n + 1) {
                acc += phase[j] * at(j) * at(k - j);
            }
            for j in 1..=n.saturating_sub(k) {
                acc += (phase[j + k] + phase[j].conj()) * at(j).conj() * at(j + k);
            }
            acc
        })
        .collect()
}

/// Galerkin residual `F_M` at a point, `M = c.len()`.
pub fn point_residual(alpha: f64, omega: f64, c: &[Complex64]) -> Vec<Complex64> {
    full_residual(alpha, omega, c, c.len())
}

/// Midpoint of the Jacobian enclosure at a point; same layout as `galerkin_jacobian`.
pub fn point_jacobian(x: &CenterPoint) -> DMatrix<f64> {
    let cube = x.to_cube(Interval::point(x.alpha), 3.0).expect("finite center point");
    galerkin_jacobian(&cube).expect("positive parameter").mid()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agrees_with_interval_residual() {
        let c: Vec<Complex64> = (1..=7).map(|k| Complex64::new(0.2 / k as f64, 0.05 * k as f64)).collect();
        let p = CenterPoint { alpha: 1.7, omega: 1.4, coeffs: c.clone() };
        let f = point_residual(1.7, 1.4, &c);
        let g = super::super::galerkin_residual(&p.to_cube(Interval::point(1.7), 3.0).unwrap()).unwrap();
        for (a, b) in f.iter().zip(&g) {
            assert!((a.re - b.re.mid()).abs() < 1e-13 && (a.im - b.im.mid()).abs() < 1e-13);
            assert!(b.re.width() < 1e-12);
        }
    }

    #[test]
    fn full_residual_beyond_support_is_pure_convolution() {
        let c = vec![Complex64::new(1.0, 0.0)];
        let f = full_residual(1.0, 0.0, &c, 3);
        assert_eq!(f[1], Complex64::new(1.0, 0.0));
        assert_eq!(f[2], Complex64::new(0.0, 0.0));
    }
}
