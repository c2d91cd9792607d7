//! Wright's functional in Fourier space: `F_k = (iωk/α + e^{-iωk}) c_k + [(U_ω c) * c]_k`.

mod point;
mod tail;

pub use point::{full_residual, point_jacobian, point_residual};
pub use tail::{TailBounds, tail_bounds};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::interval::{ComplexInterval, Interval, IntervalMatrix};
use crate::sequence::{Coord, Cube, square_with_phases, unit_phases};

/// A point of the finite-dimensional part with zero tail.
#[derive(Clone, Debug, PartialEq)]
pub struct CenterPoint {
    pub alpha: f64,
    pub omega: f64,
    pub coeffs: Vec<Complex64>,
}

impl CenterPoint {
    /// Midpoint of the cube, with `b_1 = 0` when the cube is phase-fixed.
    pub fn of_cube(x: &Cube) -> CenterPoint {
        let mut coeffs: Vec<Complex64> = x
            .coeffs
            .iter()
            .map(|c| {
                let (re, im) = c.mid();
                Complex64::new(re, im)
            })
            .collect();
        if x.phase_fixed() {
            coeffs[0].im = 0.0;
        }
        CenterPoint { alpha: x.alpha.mid(), omega: x.omega.mid(), coeffs }
    }

    pub fn m(&self) -> usize {
        self.coeffs.len()
    }

    /// Degenerate cube at this point, with the given parameter interval.
    pub fn to_cube(&self, alpha: Interval, decay_s: f64) -> Result<Cube> {
        let coeffs = self.coeffs.iter().map(|c| ComplexInterval::point(c.re, c.im)).collect();
        Cube::new(alpha, Interval::point(self.omega), coeffs, 0.0, decay_s)
    }

    /// Ordered finite vector `(omega, a_1, a_2, b_2, ...)`.
    pub fn vector(&self) -> Vec<f64> {
        (0..2 * self.m())
            .map(|i| match Coord::from_vector_index(i) {
                Coord::Omega => self.omega,
                Coord::Re(k) => self.coeffs[k - 1].re,
                Coord::Im(k) => self.coeffs[k - 1].im,
                Coord::Alpha => unreachable!(),
            })
            .collect()
    }

    /// Inverse of `vector`, keeping `alpha` and `b_1`.
    pub fn set_vector(&mut self, v: &[f64]) {
        for (i, &x) in v.iter().enumerate() {
            match Coord::from_vector_index(i) {
                Coord::Omega => self.omega = x,
                Coord::Re(k) => self.coeffs[k - 1].re = x,
                Coord::Im(k) => self.coeffs[k - 1].im = x,
                Coord::Alpha => unreachable!(),
            }
        }
    }

    pub fn inside(&self, x: &Cube) -> bool {
        x.m() == self.m() && x.contains_point(self.alpha, self.omega, &self.coeffs)
    }
}

/// Enclosure of the Galerkin residual `F_M` over every `(alpha, omega, c)` in the cube.
pub fn galerkin_residual(x: &Cube) -> Result<Vec<ComplexInterval>> {
    let m = x.m();
    let phase = unit_phases(x.omega, 2 * m)?;
    let ratio = x.omega.div(x.alpha)?;
    let quad = square_with_phases(&x.coeffs, &phase);
    Ok((1..=m).map(|k| linear_factor(&phase, ratio, k) * x.coeffs[k - 1] + quad[k - 1]).collect())
}

/// `iωk/α + e^{-iωk}`.
fn linear_factor(phase: &[ComplexInterval], ratio: Interval, k: usize) -> ComplexInterval {
    ComplexInterval::new(phase[k].re, phase[k].im + ratio * k as f64)
}

/// Interleaves complex components as `(Re F_1, Im F_1, Re F_2, ...)`.
pub fn split_components(f: &[ComplexInterval]) -> Vec<Interval> {
    f.iter().flat_map(|z| [z.re, z.im]).collect()
}

/// Enclosure of the `2M × 2M` Jacobian of `F_M` over the cube.
///
/// Rows are `(Re F_1, Im F_1, ..., Re F_M, Im F_M)`; columns follow the
/// finite vector `(omega, a_1, a_2, b_2, ..., a_M, b_M)`.
pub fn galerkin_jacobian(x: &Cube) -> Result<IntervalMatrix> {
    let m = x.m();
    let phase = unit_phases(x.omega, 2 * m)?;
    let inv_alpha = x.alpha.recip()?;
    let mut jac = IntervalMatrix::zeros(2 * m, 2 * m);
    put_column(&mut jac, 0, &omega_column(&phase, inv_alpha, &x.coeffs));
    coeff_columns(&mut jac, &phase, x.omega * inv_alpha, &x.coeffs, true);
    Ok(jac)
}

fn put_column(jac: &mut IntervalMatrix, col: usize, z: &[ComplexInterval]) {
    for (k, v) in z.iter().enumerate() {
        jac[(2 * k, col)] = v.re;
        jac[(2 * k + 1, col)] = v.im;
    }
}

/// `dF_k/domega = ik(1/α - e^{-iωk}) c_k - i Σ j e^{-iωj} c_j c_{k-j} - i Σ ((j+k) e^{-iω(j+k)} - j e^{iωj}) c_j* c_{j+k}`.
fn omega_column(phase: &[ComplexInterval], inv_alpha: Interval, c: &[ComplexInterval]) -> Vec<ComplexInterval> {
    let m = c.len();
    let c = |j: usize| c[j - 1];
    (1..=m)
        .map(|k| {
            let kf = Interval::point(k as f64);
            let lin = (ComplexInterval::real(inv_alpha) - phase[k]).mul_i().scale(kf) * c(k);
            let mut quad = ComplexInterval::ZERO;
            for j in 1..k {
                quad += (phase[j] * c(j) * c(k - j)).scale(Interval::point(j as f64));
            }
            for j in 1..=m - k {
                let w = phase[j + k].scale(Interval::point((j + k) as f64))
                    - phase[j].conj().scale(Interval::point(j as f64));
                quad += w * (c(j).conj() * c(j + k));
            }
            lin - quad.mul_i()
        })
        .collect()
}

/// `d²F_k/domega² = -k² e^{-iωk} c_k - Σ j² e^{-iωj} c_j c_{k-j} - Σ ((j+k)² e^{-iω(j+k)} + j² e^{iωj}) c_j* c_{j+k}`.
fn omega_second_column(phase: &[ComplexInterval], c: &[ComplexInterval]) -> Vec<ComplexInterval> {
    let m = c.len();
    let c = |j: usize| c[j - 1];
    let sq = |j: usize| Interval::point((j * j) as f64);
    (1..=m)
        .map(|k| {
            let mut acc = (phase[k] * c(k)).scale(sq(k));
            for j in 1..k {
                acc += (phase[j] * c(j) * c(k - j)).scale(sq(j));
            }
            for j in 1..=m - k {
                let w = phase[j + k].scale(sq(j + k)) + phase[j].conj().scale(sq(j));
                acc += w * (c(j).conj() * c(j + k));
            }
            -acc
        })
        .collect()
}

/// Writes the `a_n`, `b_n` columns. Every entry is linear in the phase table
/// and in `ratio = ω/α`, so passing their derivatives yields the derivative
/// of these columns.
fn coeff_columns(
    jac: &mut IntervalMatrix,
    phase: &[ComplexInterval],
    ratio: Interval,
    c: &[ComplexInterval],
    with_linear: bool,
) {
    let m = c.len();
    let c = |j: usize| c[j - 1];
    for k in 1..=m {
        let lk = linear_factor(phase, ratio, k);
        let row = 2 * (k - 1);
        for n in 1..=m {
            let diag = if n == k && with_linear { lk } else { ComplexInterval::ZERO };
            let up = if n + k <= m { (phase[n + k] + phase[n].conj()) * c(n + k) } else { ComplexInterval::ZERO };
            let down = if n < k {
                (phase[n] + phase[k - n]) * c(k - n)
            } else if n > k {
                (phase[n] + phase[n - k].conj()) * c(n - k).conj()
            } else {
                ComplexInterval::ZERO
            };
            let da = diag + up + down;
            let col = Coord::Re(n).vector_index().unwrap();
            jac[(row, col)] = da.re;
            jac[(row + 1, col)] = da.im;
            if n >= 2 {
                let db = (diag - up + down).mul_i();
                let col = Coord::Im(n).vector_index().unwrap();
                jac[(row, col)] = db.re;
                jac[(row + 1, col)] = db.im;
            }
        }
    }
}

/// Derivatives of the Jacobian along each split dimension, enclosed over the cube.
///
/// Entry 0 is the derivative in `alpha`; entry `d >= 1` is the derivative in
/// finite-vector coordinate `d - 1`.
pub fn jacobian_slices(x: &Cube) -> Result<Vec<IntervalMatrix>> {
    let m = x.m();
    let n = 2 * m;
    let phase = unit_phases(x.omega, 2 * m)?;
    let dphase: Vec<ComplexInterval> =
        phase.iter().enumerate().map(|(j, p)| p.mul_i().scale(Interval::point(-(j as f64)))).collect();
    let inv_alpha = x.alpha.recip()?;
    let inv_alpha_sq = inv_alpha.sqr();

    let mut d_alpha = IntervalMatrix::zeros(n, n);
    let col: Vec<ComplexInterval> =
        (1..=m).map(|k| (x.coeffs[k - 1] * inv_alpha_sq).mul_i().scale(Interval::point(-(k as f64)))).collect();
    put_column(&mut d_alpha, 0, &col);
    let zeros = vec![ComplexInterval::ZERO; 2 * m + 1];
    coeff_columns(&mut d_alpha, &zeros, -(x.omega * inv_alpha_sq), &vec![ComplexInterval::ZERO; m], true);

    let mut d_omega = IntervalMatrix::zeros(n, n);
    put_column(&mut d_omega, 0, &omega_second_column(&phase, &x.coeffs));
    coeff_columns(&mut d_omega, &dphase, inv_alpha, &x.coeffs, true);

    let mut slices = vec![d_alpha, d_omega.clone()];
    for v in 1..n {
        let mut unit = vec![ComplexInterval::ZERO; m];
        match Coord::from_vector_index(v) {
            Coord::Re(k) => unit[k - 1] = ComplexInterval::ONE,
            Coord::Im(k) => unit[k - 1] = ComplexInterval::I,
            _ => unreachable!(),
        }
        let mut s = IntervalMatrix::zeros(n, n);
        for r in 0..n {
            s[(r, 0)] = d_omega[(r, v)];
        }
        coeff_columns(&mut s, &phase, Interval::ZERO, &unit, false);
        slices.push(s);
    }
    Ok(slices)
}

/// Period rescaling between rapidly and slowly oscillating solutions.
///
/// A slowly oscillating solution with period `L0` at parameter `alpha0`
/// maps to a rapidly oscillating one of lap index `N` at `r * alpha0`, where
/// `r = 1 - (N-1)/2 * L0`. Requires `2/N < L0 < 2/(N-1)`.
pub fn rescale_rapid_to_slow(alpha0: f64, l0: f64, n: u32) -> Result<(f64, f64)> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::Argument(format!("lap index must be odd and positive, got {n}")));
    }
    let lower = 2.0 / n as f64;
    let upper = if n == 1 { f64::INFINITY } else { 2.0 / (n - 1) as f64 };
    if !(l0 > lower && l0 < upper) {
        return Err(Error::Argument(format!("period {l0} outside ({lower}, {upper}) for N = {n}")));
    }
    let r = 1.0 - (n - 1) as f64 / 2.0 * l0;
    Ok((r, r * alpha0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::HALF_PI;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    fn point_cube(alpha: f64, omega: f64, c: &[Complex64]) -> Cube {
        CenterPoint { alpha, omega, coeffs: c.to_vec() }.to_cube(Interval::point(alpha), 3.0).unwrap()
    }

    #[test]
    fn zero_sequence_is_a_root() {
        let x = Cube::new(iv(1.0, 2.0), iv(1.0, 2.0), vec![ComplexInterval::ZERO; 6], 0.0, 3.0).unwrap();
        for z in galerkin_residual(&x).unwrap() {
            assert_eq!(z, ComplexInterval::ZERO);
        }
    }

    #[test]
    fn hopf_linear_factor_vanishes() {
        let eps = 1e-6;
        let mut c = [Complex64::new(0.0, 0.0); 5];
        c[0].re = eps;
        let x = Cube::new(HALF_PI, HALF_PI, c.iter().map(|z| ComplexInterval::point(z.re, z.im)).collect(), 0.0, 3.0)
            .unwrap();
        let f = galerkin_residual(&x).unwrap();
        assert!(f[0].modulus_upper() < 1e-11, "{:?}", f[0]);
    }

    #[test]
    fn jacobian_at_zero_is_block_diagonal() {
        let x = point_cube(2.0, 2.0, &[Complex64::new(0.0, 0.0); 5]);
        let j = galerkin_jacobian(&x).unwrap();
        for k in 1..=5 {
            let lk = Complex64::new((2.0 * k as f64).cos(), k as f64 - (2.0 * k as f64).sin());
            let col = Coord::Re(k).vector_index().unwrap();
            assert!(j[(2 * k - 2, col)].contains(lk.re) || (j[(2 * k - 2, col)].mid() - lk.re).abs() < 1e-14);
            assert!((j[(2 * k - 1, col)].mid() - lk.im).abs() < 1e-14);
            for row in 0..10 {
                if row / 2 != k - 1 {
                    assert_eq!(j[(row, col)].mag(), 0.0, "row {row} col {col}");
                }
            }
        }
    }

    #[test]
    fn gamma_factors_at_zero_frequency() {
        let mut c = vec![Complex64::new(0.0, 0.0); 5];
        c[0] = Complex64::new(0.5, 0.0);
        c[2] = Complex64::new(0.25, 0.0);
        let x = point_cube(1.0, 0.0, &c);
        let j = galerkin_jacobian(&x).unwrap();
        // d Re F_2 / d a_1 = 2 c_1 (from c_1^2) + 2 c_3 (from c_1* c_3) at omega = 0.
        let v = j[(2, Coord::Re(1).vector_index().unwrap())];
        assert!(v.contains(1.5) && v.width() < 1e-14, "{v:?}");
    }

    #[test]
    fn jacobian_matches_central_differences() {
        let c: Vec<Complex64> = (1..=6)
            .map(|k| Complex64::new(0.3 / (k * k) as f64, if k == 1 { 0.0 } else { -0.1 / (k * k * k) as f64 }))
            .collect();
        let base = CenterPoint { alpha: 1.9, omega: 1.3, coeffs: c };
        let j = galerkin_jacobian(&base.to_cube(Interval::point(1.9), 3.0).unwrap()).unwrap();
        let h = 1e-6;
        let v0 = base.vector();
        for col in 0..12 {
            let mut plus = base.clone();
            let mut minus = base.clone();
            let mut vp = v0.clone();
            let mut vm = v0.clone();
            vp[col] += h;
            vm[col] -= h;
            plus.set_vector(&vp);
            minus.set_vector(&vm);
            let fp = point_residual(plus.alpha, plus.omega, &plus.coeffs);
            let fm = point_residual(minus.alpha, minus.omega, &minus.coeffs);
            for k in 0..6 {
                let d = (fp[k] - fm[k]) / (2.0 * h);
                let re = j[(2 * k, col)];
                let im = j[(2 * k + 1, col)];
                assert!((re.mid() - d.re).abs() < 1e-8 + 1e-6 * d.re.abs(), "row {} col {col}", 2 * k);
                assert!((im.mid() - d.im).abs() < 1e-8 + 1e-6 * d.im.abs(), "row {} col {col}", 2 * k + 1);
            }
        }
    }

    #[test]
    fn slices_match_jacobian_differences() {
        let c: Vec<Complex64> = (1..=6)
            .map(|k| Complex64::new(0.3 / (k * k) as f64, if k == 1 { 0.0 } else { 0.07 / (k * k * k) as f64 }))
            .collect();
        let base = CenterPoint { alpha: 1.9, omega: 1.3, coeffs: c };
        let slices = jacobian_slices(&base.to_cube(Interval::point(1.9), 3.0).unwrap()).unwrap();
        let h = 1e-6;
        for dim in 0..=12 {
            let shifted = |sign: f64| {
                let mut p = base.clone();
                if dim == 0 {
                    p.alpha += sign * h;
                } else {
                    let mut v = p.vector();
                    v[dim - 1] += sign * h;
                    p.set_vector(&v);
                }
                point_jacobian(&p)
            };
            let diff = (shifted(1.0) - shifted(-1.0)) / (2.0 * h);
            for r in 0..12 {
                for col in 0..12 {
                    let got = slices[dim][(r, col)].mid();
                    let want = diff[(r, col)];
                    assert!(
                        (got - want).abs() < 1e-7 + 1e-6 * want.abs(),
                        "dim {dim} entry ({r}, {col}): {got} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn rescale_examples() {
        assert_eq!(rescale_rapid_to_slow(2.5, 4.2, 1).unwrap(), (1.0, 2.5));
        let (r, a) = rescale_rapid_to_slow(3.0, 0.8, 3).unwrap();
        assert!((r - 0.2).abs() < 1e-15 && (a - 0.6).abs() < 1e-15);
        let (r, _) = rescale_rapid_to_slow(1.0, 0.45, 5).unwrap();
        assert!((r - 0.1).abs() < 1e-15);
        assert!(rescale_rapid_to_slow(1.0, 0.5, 3).is_err());
        assert!(rescale_rapid_to_slow(1.0, 0.5, 4).is_err());
    }
}
