//! Analytic bounds on everything the Galerkin truncation discards.

use super::CenterPoint;
use crate::error::{Error, Result};
use crate::interval::round::sub_up;
use crate::interval::{ComplexInterval, Interval};
use crate::sequence::{Cube, gamma_constant};

/// Bounds on the truncated parts of `F` and its derivative over a cube.
///
/// `H = X - xbar` denotes the cube recentred at the center point.
#[derive(Clone, Debug, PartialEq)]
pub struct TailBounds {
    /// Per-mode bound on the discarded part of `F` for `k <= M`.
    pub residual_tail: Vec<f64>,
    /// Per-mode bound on the discarded part of `dF/domega * h_omega`.
    pub omega_defect: Vec<f64>,
    /// Per-mode bound on the discarded part of `dF/dc * h_c`.
    pub coeff_defect: Vec<f64>,
    /// `k^s |F(xbar)|_k` bound for `k > M`.
    pub center_tail: f64,
    /// `k^s |h_c * x_c|_k` bound for `k > M`.
    pub product_tail: f64,
    /// `k^{s-1} |(K^{-1} x_1) * x_2|_k` bound for `k > M`.
    pub weighted_product_tail: f64,
    /// Upper bound of the weighted sup norm `sup_k k^s |c_k|` over the cube.
    pub weighted_norm: f64,
    /// Upper bound of `|omega - omega_bar|` over the cube.
    pub omega_radius: f64,
}

impl TailBounds {
    /// Combined finite-mode defect `g_M = omega_defect + coeff_defect`, per complex mode.
    pub fn finite_defect(&self) -> Vec<f64> {
        self.omega_defect
            .iter()
            .zip(&self.coeff_defect)
            .map(|(a, b)| (Interval::point(*a) + Interval::point(*b)).hi())
            .collect()
    }
}

/// Evaluates every tail bound with outward rounding.
pub fn tail_bounds(x: &Cube, center: &CenterPoint) -> Result<TailBounds> {
    let m = x.m();
    let s = x.decay_s;
    if m < 5 || !(s > 2.0) {
        return Err(Error::HypothesisViolation(format!("tail bounds need M >= 5 and s > 2, got M = {m}, s = {s}")));
    }
    if center.m() != m || !center.inside(x) {
        return Err(Error::Argument("center point must lie in the cube".into()));
    }
    let p = Interval::point;
    let xs: Vec<Interval> = x.abs_sups().into_iter().map(p).collect();
    let hs: Vec<Interval> = x
        .coeffs
        .iter()
        .zip(&center.coeffs)
        .map(|(c, z)| p((*c - ComplexInterval::point(z.re, z.im)).modulus_upper()))
        .collect();
    let c0 = p(x.tail_c0);
    let c0sq = c0.sqr();
    let dw = p(sub_up(x.omega.hi(), center.omega).max(sub_up(center.omega, x.omega.lo())));

    // pow_s[n] = n^s and pow_s1[n] = n^{s-1} for n up to 2M + 1.
    let table = |e: f64| -> Result<Vec<Interval>> { (0..=2 * m + 1).map(|n| p(n as f64).powf(e)).collect() };
    let pow_s = table(s)?;
    let pow_s1 = table(s - 1.0)?;
    let m_s1 = pow_s1[m];
    let m_s2 = p(m as f64).powf(s - 2.0)?;
    let sm1 = p(s - 1.0);
    let sm2 = p(s - 2.0);

    let mut residual_tail = Vec::with_capacity(m);
    let mut omega_defect = Vec::with_capacity(m);
    let mut coeff_defect = Vec::with_capacity(m);
    for k in 1..=m {
        let edge = m + k + 1;
        let mut sum_x_s = Interval::ZERO;
        let mut sum_x_s1 = Interval::ZERO;
        let mut sum_h_s = Interval::ZERO;
        for j in m - k + 1..=m {
            sum_x_s += xs[j - 1].div(pow_s[j + k])?;
            sum_x_s1 += xs[j - 1].div(pow_s1[j + k])?;
            sum_h_s += hs[j - 1].div(pow_s[j + k])?;
        }
        let h = (c0sq * 2.0).div(sm1 * m_s1 * pow_s[edge])? + c0 * sum_x_s * 2.0;
        let gi = c0 * dw * sum_x_s1 * 2.0
            + (c0sq * dw).div(sm2 * pow_s[edge] * m_s2)?
            + (c0sq * dw).div(sm1 * pow_s1[edge] * m_s1)?;
        // The tail of h meets the head of c as well as the tail of c meeting the head of h.
        let gii = (c0sq * 4.0).div(sm1 * pow_s[edge] * m_s1)? + c0 * (sum_h_s + sum_x_s) * 2.0;
        residual_tail.push(h.hi());
        omega_defect.push(gi.hi());
        coeff_defect.push(gii.hi());
    }

    let cbar: Vec<Interval> =
        center.coeffs.iter().map(|z| p(ComplexInterval::point(z.re, z.im).modulus_upper())).collect();
    let mut center_tail = Interval::ZERO;
    let mut product_max = Interval::ZERO;
    for k in m + 1..=2 * m {
        let mut sc = Interval::ZERO;
        let mut sp = Interval::ZERO;
        for j in k - m..=m {
            sc += cbar[j - 1] * cbar[k - j - 1];
            sp += hs[j - 1] * xs[k - j - 1];
        }
        center_tail = center_tail.max(pow_s[k] * sc);
        product_max = product_max.max(pow_s[k] * sp);
    }
    let two_s = p(2.0).powf(s)?;
    let mut edge_sum = Interval::ZERO;
    let m1 = p((m + 1) as f64);
    for j in 1..=m {
        let ratio = p((m + j + 1) as f64).div(m1)?.powf(s)?;
        edge_sum += (xs[j - 1] + hs[j - 1]) * (ratio + 1.0);
    }
    let product_tail = product_max + (c0sq * 2.0 * (two_s + 1.0)).div(sm1 * m_s1)? + c0 * edge_sum;

    let mut c1 = c0;
    for k in 1..=m {
        c1 = c1.max(pow_s[k] * xs[k - 1]);
    }
    let gamma = p(gamma_constant(m + 1, s)?);
    let weighted_product_tail =
        (c1.sqr() * gamma).div_scalar(2.0)? + c0 * c1 * (sm1.div(p((m + 2) as f64) * sm2)? + p(s).div(sm1)?);

    Ok(TailBounds {
        residual_tail,
        omega_defect,
        coeff_defect,
        center_tail: center_tail.hi(),
        product_tail: product_tail.hi(),
        weighted_product_tail: weighted_product_tail.hi(),
        weighted_norm: c1.hi(),
        omega_radius: dw.hi(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::full_residual;
    use num_complex::Complex64;

    fn zero_cube(m: usize, c0: f64) -> Cube {
        Cube::new(
            Interval::new(1.8, 1.9).unwrap(),
            Interval::new(1.4, 1.5).unwrap(),
            vec![ComplexInterval::ZERO; m],
            c0,
            3.0,
        )
        .unwrap()
    }

    #[test]
    fn zero_cube_has_zero_bounds() {
        let x = zero_cube(6, 0.0);
        let t = tail_bounds(&x, &CenterPoint::of_cube(&x)).unwrap();
        assert!(t.residual_tail.iter().chain(&t.omega_defect).chain(&t.coeff_defect).all(|&v| v == 0.0));
        assert_eq!((t.center_tail, t.product_tail, t.weighted_product_tail), (0.0, 0.0, 0.0));
    }

    #[test]
    fn residual_tail_formula_instance() {
        let x = zero_cube(10, 1.0);
        let t = tail_bounds(&x, &CenterPoint::of_cube(&x)).unwrap();
        for k in 1..=10 {
            let want = 2.0 / (2.0 * 100.0 * ((11 + k) as f64).powi(3));
            let got = t.residual_tail[k - 1];
            assert!(got >= want && got <= want * (1.0 + 1e-13), "k={k}");
        }
    }

    #[test]
    fn coeff_defect_covers_tail_direction_against_head() {
        // h lives only on mode M + 1 at the tail limit, c only on the head,
        // so the head-of-h sum vanishes and the coupling comes from |X|_M alone.
        let m = 6;
        let c0 = 0.5;
        let mut coeffs = vec![ComplexInterval::ZERO; m];
        coeffs[m - 1] = ComplexInterval::point(0.2, 0.0);
        let mut x = zero_cube(m, c0);
        x.coeffs = coeffs;
        let mut center = CenterPoint::of_cube(&x);
        center.coeffs[m - 1] = Complex64::new(0.2, 0.0);
        let t = tail_bounds(&x, &center).unwrap();

        let (alpha, omega) = (1.85, 1.45);
        let mut c = vec![Complex64::new(0.0, 0.0); m + 1];
        c[m - 1] = Complex64::new(0.2, 0.0);
        let mut h = vec![Complex64::new(0.0, 0.0); m + 1];
        h[m] = Complex64::new(c0 / ((m + 1) as f64).powi(3), 0.0);
        let plus: Vec<Complex64> = c.iter().zip(&h).map(|(a, b)| a + b).collect();
        let minus: Vec<Complex64> = c.iter().zip(&h).map(|(a, b)| a - b).collect();
        let (fp, fm) = (full_residual(alpha, omega, &plus, 1), full_residual(alpha, omega, &minus, 1));
        // The functional is quadratic and h has no mode 1, so this difference is exactly dF/dc h.
        let derivative = ((fp[0] - fm[0]) / 2.0).norm();
        assert!(derivative > 0.0);
        assert!(derivative <= t.coeff_defect[0], "{derivative} > {}", t.coeff_defect[0]);
    }

    #[test]
    fn hypotheses_checked() {
        let x = zero_cube(4, 1.0);
        assert!(matches!(tail_bounds(&x, &CenterPoint::of_cube(&x)), Err(Error::HypothesisViolation(_))));
        let mut y = zero_cube(6, 1.0);
        y.decay_s = 2.0;
        assert!(matches!(tail_bounds(&y, &CenterPoint::of_cube(&y)), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn center_outside_rejected() {
        let x = zero_cube(6, 1.0);
        let mut c = CenterPoint::of_cube(&x);
        c.coeffs[2] = Complex64::new(1.0, 0.0);
        assert!(tail_bounds(&x, &c).is_err());
    }
}
