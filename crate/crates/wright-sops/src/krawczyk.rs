//! Outer enclosure of the Krawczyk operator and the verdicts it supports.

use nalgebra::DMatrix;

use crate::error::Result;
use crate::functional::{
    CenterPoint, TailBounds, galerkin_jacobian, galerkin_residual, jacobian_slices, split_components,
};
use crate::interval::matrix::abs_mul_upper;
use crate::interval::round::{add_up, mul_up, sub_down, sub_up};
use crate::interval::{Interval, IntervalMatrix, approx_mid_inverse};
use crate::sequence::Cube;

/// Approximate Jacobian at the center and its numerical inverse.
#[derive(Clone, Debug)]
pub struct Preconditioner {
    pub jacobian: DMatrix<f64>,
    pub inverse: DMatrix<f64>,
    pub alpha_bar: f64,
    pub omega_bar: f64,
    /// `max_i Σ_j |(I - A† A)_ij|` in floating point.
    pub residual: f64,
}

/// Builds the preconditioner at a center point.
pub fn build_preconditioner(center: &CenterPoint, decay_s: f64) -> Result<Preconditioner> {
    let jac = galerkin_jacobian(&center.to_cube(Interval::point(center.alpha), decay_s)?)?;
    let inverse = approx_mid_inverse(&jac)?;
    let jacobian = jac.mid();
    let n = jacobian.nrows();
    let defect = DMatrix::identity(n, n) - &inverse * &jacobian;
    let residual = defect.row_iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    Ok(Preconditioner { jacobian, inverse, alpha_bar: center.alpha, omega_bar: center.omega, residual })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Exactly one zero per parameter value in the cube.
    Unique,
    /// No zero in the cube.
    Excluded,
    Inconclusive,
}

/// Finite block and tail radius of the outer Krawczyk image.
#[derive(Clone, Debug)]
pub struct KrawczykImage {
    /// Finite block in the ordered vector layout.
    pub finite: Vec<Interval>,
    /// Center plus the contraction term, without the Newton step.
    pub shifted: Vec<Interval>,
    /// Tail radius: modes `k > M` satisfy `|c_k| < tail_radius / k^s`.
    pub tail_radius: f64,
    pub verdict: Verdict,
    /// Smallest gap between the shifted block and the cube boundary (negative when outside).
    pub contraction_margin: f64,
}

/// Tail radius of the Krawczyk image.
pub fn tail_radius(x: &Cube, center: &CenterPoint, t: &TailBounds) -> Result<f64> {
    let p = Interval::point;
    let m1 = p((x.m() + 1) as f64);
    let ratio = p(center.alpha).div(p(center.omega))?;
    let c0 = p(x.tail_c0);
    let first = ratio.div(m1)? * p(t.center_tail);
    let a = (ratio * 2.0).div(m1)? * p(t.product_tail);
    let b = p(t.omega_radius) * ratio * ((x.alpha.recip()? + 1.0) * c0 + p(t.weighted_product_tail));
    let shift = (Interval::ONE - ratio.div(x.alpha)? * x.omega).abs() + ratio.div(m1)?;
    Ok((first + a + b + shift * c0).hi())
}

/// Computes the outer Krawczyk image of `x` around `center` and its verdict.
///
/// The residual at the center is enclosed over the full parameter interval.
pub fn krawczyk_outer(x: &Cube, center: &CenterPoint, pre: &Preconditioner, t: &TailBounds) -> Result<KrawczykImage> {
    let n = 2 * x.m();
    let xbar = center.vector();
    let offset: Vec<Interval> = x.vector().iter().zip(&xbar).map(|(v, c)| *v - Interval::point(*c)).collect();

    let newton = newton_step(x, center, pre)?;

    let moved = contraction_term(x, center, pre, &offset)?;

    let defect: Vec<f64> = t.finite_defect().iter().flat_map(|g| [*g, *g]).collect();
    let spread = abs_mul_upper(&pre.inverse, &defect);

    let shifted: Vec<Interval> =
        (0..n).map(|i| Interval::point(xbar[i]) + moved[i] + Interval::centered(0.0, spread[i])).collect();
    let finite: Vec<Interval> = (0..n).map(|i| shifted[i] - newton[i]).collect();
    let tail = tail_radius(x, center, t)?;

    let mut image =
        KrawczykImage { finite, shifted, tail_radius: tail, verdict: Verdict::Inconclusive, contraction_margin: 0.0 };
    image.contraction_margin = interior_gap(&image.shifted, &x.vector());
    image.verdict = check_theorem_conditions(x, &image);
    Ok(image)
}

/// Enclosure of `(I - A† DF(xi)) h` over `xi` in the cube and `h` in `offset`.
///
/// Two enclosures are intersected. The direct one evaluates `I - A† DF(X)`
/// as a single interval matrix, which equals `(I - A† A) + A† (A - DF(X))`.
/// The second expands `DF(xi) = DF(xbar) + Σ_l (xi - xbar)_l ∂_l DF(zeta)`
/// and multiplies each derivative slice by `A†` before taking magnitudes, so
/// cancellations inside `A†` are kept.
pub fn contraction_term(
    x: &Cube,
    center: &CenterPoint,
    pre: &Preconditioner,
    offset: &[Interval],
) -> Result<Vec<Interval>> {
    let n = offset.len();
    let inv = &pre.inverse;
    let identity = IntervalMatrix::identity(n);
    let direct = identity.sub(&IntervalMatrix::left_mul_point(inv, &galerkin_jacobian(x)?)).mul_vec(offset);

    let at_center = galerkin_jacobian(&center.to_cube(Interval::point(center.alpha), x.decay_s)?)?;
    let base = identity.sub(&IntervalMatrix::left_mul_point(inv, &at_center)).mul_vec(offset);
    let radius: Vec<f64> = offset.iter().map(|h| h.mag()).collect();
    let alpha_radius = sub_up(x.alpha.hi(), center.alpha).max(sub_up(center.alpha, x.alpha.lo()));
    let mut spread = vec![0.0; n];
    for (l, slice) in jacobian_slices(x)?.iter().enumerate() {
        let r_l = if l == 0 { alpha_radius } else { radius[l - 1] };
        if r_l == 0.0 {
            continue;
        }
        let scaled = IntervalMatrix::left_mul_point(inv, slice);
        for (i, s) in spread.iter_mut().enumerate() {
            let row = (0..n).fold(0.0, |acc, j| add_up(acc, mul_up(scaled[(i, j)].mag(), radius[j])));
            *s = add_up(*s, mul_up(r_l, row));
        }
    }
    Ok((0..n)
        .map(|i| {
            let second = base[i] + Interval::centered(0.0, spread[i]);
            let both = direct[i].intersect(second);
            if both.is_empty() { direct[i].hull(second) } else { both }
        })
        .collect())
}

/// Enclosure of `A† F_M(xbar)` over every parameter value in the cube.
///
/// The parameter enters only through `iωk c_k / alpha`, so the image is the
/// value at `alpha_bar` plus `(1/alpha - 1/alpha_bar)` times the fixed vector
/// `A† (iωk c_k)`; evaluating it in that form avoids treating the residual
/// components as independent intervals.
pub fn newton_step(x: &Cube, center: &CenterPoint, pre: &Preconditioner) -> Result<Vec<Interval>> {
    let inv = IntervalMatrix::from_point(&pre.inverse);
    let at_center = split_components(&galerkin_residual(&center.to_cube(Interval::point(center.alpha), x.decay_s)?)?);
    let omega = Interval::point(center.omega);
    let direction: Vec<Interval> = center
        .coeffs
        .iter()
        .enumerate()
        .flat_map(|(i, c)| {
            let w = omega * (i + 1) as f64;
            // i * w * (re + i im) = -w im + i w re
            [-(w * c.im), w * c.re]
        })
        .collect();
    let shift = x.alpha.recip()? - Interval::point(center.alpha).recip()?;
    let base = inv.mul_vec(&at_center);
    let dir = inv.mul_vec(&direction);
    Ok(base.iter().zip(&dir).map(|(b, d)| *b + *d * shift).collect())
}

fn interior_gap(inner: &[Interval], outer: &[Interval]) -> f64 {
    inner
        .iter()
        .zip(outer)
        .map(|(a, b)| sub_down(a.lo(), b.lo()).min(sub_down(b.hi(), a.hi())))
        .fold(f64::INFINITY, f64::min)
}

/// Unique when the image lies in the cube, the tail radius is strictly below
/// `C0` and the shifted block is strictly interior; Excluded when some
/// coordinate of the image misses the cube.
pub fn check_theorem_conditions(x: &Cube, k: &KrawczykImage) -> Verdict {
    let xv = x.vector();
    if k.finite.iter().zip(&xv).any(|(a, b)| a.intersect(*b).is_empty()) {
        return Verdict::Excluded;
    }
    let inside = k.finite.iter().zip(&xv).all(|(a, b)| a.subset_of(*b));
    let tail_ok = k.tail_radius < x.tail_c0;
    let interior = k.shifted.iter().zip(&xv).all(|(a, b)| a.strictly_inside(*b));
    if inside && tail_ok && interior { Verdict::Unique } else { Verdict::Inconclusive }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn preconditioner_at_zero_inverts_rotation_blocks() {
        let c = CenterPoint { alpha: 2.0, omega: 2.0, coeffs: vec![Complex64::new(0.0, 0.0); 5] };
        let p = build_preconditioner(&c, 3.0);
        // The omega column vanishes at c = 0, so the linearization is singular there.
        assert!(p.is_err());
    }

    #[test]
    fn preconditioner_residual_small_at_solution() {
        let c = crate::oracle::slowly_oscillating_solution(1.9, 10, 0.02).unwrap();
        let p = build_preconditioner(&c, 3.0).unwrap();
        assert!(p.residual < 1e-10, "{}", p.residual);
    }

    fn sample_image(finite: Vec<Interval>, shifted: Vec<Interval>, tail: f64) -> KrawczykImage {
        KrawczykImage { finite, shifted, tail_radius: tail, verdict: Verdict::Inconclusive, contraction_margin: 0.0 }
    }

    fn cube() -> Cube {
        use crate::interval::ComplexInterval;
        let b = Interval::new(-1.0, 1.0).unwrap();
        let mut coeffs = vec![ComplexInterval::new(b, b); 5];
        coeffs[0] = ComplexInterval::new(Interval::new(0.0, 1.0).unwrap(), Interval::ZERO);
        Cube::new(Interval::new(1.8, 1.9).unwrap(), b, coeffs, 1.0, 3.0).unwrap()
    }

    #[test]
    fn verdict_rules() {
        let x = cube();
        let small: Vec<Interval> = x.vector().iter().map(|v| Interval::centered(v.mid(), 0.1)).collect();
        assert_eq!(check_theorem_conditions(&x, &sample_image(small.clone(), small.clone(), 0.5)), Verdict::Unique);
        assert_eq!(
            check_theorem_conditions(&x, &sample_image(small.clone(), small.clone(), 1.0)),
            Verdict::Inconclusive
        );
        let mut far = small.clone();
        far[3] = Interval::new(5.0, 6.0).unwrap();
        assert_eq!(check_theorem_conditions(&x, &sample_image(far, small.clone(), 0.5)), Verdict::Excluded);
        let touching = x.vector();
        assert_eq!(check_theorem_conditions(&x, &sample_image(small, touching, 0.5)), Verdict::Inconclusive);
    }
}
