//! Fourier bounds from envelopes, and the time translation that fixes the phase.

use super::envelope::EnvelopeSet;
use crate::error::{Error, Result};
use crate::interval::{ComplexInterval, Interval, PI, TWO_PI};
use crate::sequence::ProjectedCube;

/// Trigonometric enclosures for one mode `k` on the envelope grid.
struct ModeTrig {
    /// `sin(ωk t_j)` and `cos(ωk t_j)` at every boundary.
    sin_at: Vec<Interval>,
    cos_at: Vec<Interval>,
    /// `cos` and `sin` over each whole cell.
    cos_on: Vec<Interval>,
    sin_on: Vec<Interval>,
    /// `sin`, `cos` at `L_lo` and over the cell pieces `[L_lo, t_{j+1}]`.
    sin_cut: Interval,
    cos_cut: Interval,
    freq: Interval,
}

fn mode_trig(env: &EnvelopeSet, omega: Interval, k: usize, cut: f64) -> Result<ModeTrig> {
    let f = env.order(0);
    let n = f.n_time();
    let freq = omega * k as f64;
    let mut sin_at = Vec::with_capacity(n + 1);
    let mut cos_at = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let (c, s) = (freq * f.boundary(j)).cos_sin()?;
        cos_at.push(c);
        sin_at.push(s);
    }
    let mut cos_on = Vec::with_capacity(n);
    let mut sin_on = Vec::with_capacity(n);
    for j in 0..n {
        let (t0, t1) = f.cell_span(j);
        let (c, s) = (freq * Interval::spanning(t0, t1)).cos_sin()?;
        cos_on.push(c);
        sin_on.push(s);
    }
    let (cos_cut, sin_cut) = (freq * cut).cos_sin()?;
    Ok(ModeTrig { sin_at, cos_at, cos_on, sin_on, sin_cut, cos_cut, freq })
}

/// Encloses `(∫_0^{L_lo} cos(ωkt) y dt, ∫_0^{L_lo} sin(ωkt) y dt)` over all `y` in
/// the envelope and `ω` in the frequency interval, widened by the tail terms
/// over `[L_lo, L_hi]`.
///
/// Each cell value is split into midpoint and radius. The midpoint step function
/// is integrated exactly through summation by parts, which keeps the frequency
/// dependence of neighboring cells correlated. The radius part is bounded by
/// cell length times the largest `|cos|` (or `|sin|`) on the cell.
fn inner_products(env: &EnvelopeSet, s: usize, trig: &ModeTrig, cut: f64, end: f64) -> (Interval, Interval) {
    let f = env.order(s);
    let n = f.n_time();
    let mut cos_sum = Interval::ZERO;
    let mut sin_sum = Interval::ZERO;
    let mut cos_spread = Interval::ZERO;
    let mut sin_spread = Interval::ZERO;
    let mut tail_c = Interval::ZERO;
    let mut tail_s = Interval::ZERO;
    let mut prev_mid = 0.0;
    let mut last_mid = 0.0;
    for j in 0..n {
        let (t0, t1) = f.cell_span(j);
        let cell = f.cell(j);
        let (mid, rad) = (cell.mid(), cell.rad());
        if t0 < cut {
            let jump = Interval::point(mid) - Interval::point(prev_mid);
            // ∫ m cos = [m_last sin(L_lo) - Σ_{j>=1} (m_j - m_{j-1}) sin(t_j)] / ωk
            // ∫ m sin = [m_0 - m_last cos(L_lo) + Σ_{j>=1} (m_j - m_{j-1}) cos(t_j)] / ωk
            if j == 0 {
                sin_sum += Interval::point(mid);
            } else {
                cos_sum = cos_sum - jump * trig.sin_at[j];
                sin_sum += jump * trig.cos_at[j];
            }
            prev_mid = mid;
            last_mid = mid;
            let len = Interval::point(t1.min(cut)) - Interval::point(t0);
            cos_spread += len * (rad * trig.cos_on[j].mag());
            sin_spread += len * (rad * trig.sin_on[j].mag());
        }
        if t1 > cut && t0 < end {
            let len = Interval::point(t1.min(end)) - Interval::point(t0.max(cut));
            let m = cell.mag();
            tail_c += len * (m * trig.cos_on[j].mag());
            tail_s += len * (m * trig.sin_on[j].mag());
        }
    }
    cos_sum += Interval::point(last_mid) * trig.sin_cut;
    sin_sum = sin_sum - Interval::point(last_mid) * trig.cos_cut;
    let inv = trig.freq.recip().expect("positive frequency");
    let radius_c = (cos_spread + tail_c).hi();
    let radius_s = (sin_spread + tail_s).hi();
    (cos_sum * inv + Interval::centered(0.0, radius_c), sin_sum * inv + Interval::centered(0.0, radius_s))
}

/// Converts envelopes on `y, y', ..., y^(S)` into a cube containing the
/// frequency and Fourier coefficients of every periodic function that obeys
/// them with a period in `period`.
///
/// Coefficients are intersected over derivative orders; the tail constant
/// bounds `k^S |c_k|` for `k > M` through the order-`S` envelope minus the
/// order-`S` derivative of the midpoint trigonometric polynomial.
pub fn fourier_projection(m: usize, period: Interval, env: &EnvelopeSet) -> Result<ProjectedCube> {
    if m == 0 {
        return Err(Error::Argument("projection needs at least one mode".into()));
    }
    if period.is_empty() || !(period.lo() > 0.0) || period.hi() > env.period().hi() {
        return Err(Error::Argument(format!(
            "period {period} must be positive and within the envelope grid [0, {}]",
            env.period().hi()
        )));
    }
    let max_order = env.max_order();
    let omega = TWO_PI.div(period)?;
    let cut = period.lo();
    let mut coeffs = Vec::with_capacity(m);
    let mut top_order = Vec::with_capacity(m);
    let mut trigs = Vec::with_capacity(m);
    for k in 1..=m {
        let trig = mode_trig(env, omega, k, cut)?;
        let mut re = Interval::ENTIRE;
        let mut im = Interval::ENTIRE;
        let mut last = (Interval::ZERO, Interval::ZERO);
        for s in 0..=max_order {
            let (a, b) = inner_products(env, s, &trig, cut, period.hi());
            let scale = (TWO_PI * Interval::point(k as f64).powi(s as i32)?).recip()?;
            let w = omega.powi(s as i32 - 1)?;
            let a_prime = a.div(w)? * scale;
            let b_prime = b.div(w)? * scale;
            let (a_s, b_s) = match s % 4 {
                0 => (a_prime, -b_prime),
                1 => (-b_prime, -a_prime),
                2 => (-a_prime, b_prime),
                _ => (b_prime, a_prime),
            };
            re = re.intersect(a_s);
            im = im.intersect(b_s);
            if re.is_empty() {
                return Err(Error::EmptyIntersection { mode: k, part: "re" });
            }
            if im.is_empty() {
                return Err(Error::EmptyIntersection { mode: k, part: "im" });
            }
            last = (a_s, b_s);
        }
        coeffs.push(ComplexInterval::new(re, im));
        top_order.push((last.0.mid(), last.1.mid()));
        trigs.push(trig);
    }
    let tail_c0 = tail_constant(env, omega, period.hi(), &top_order, &trigs)?;
    Ok(ProjectedCube { omega, coeffs, tail_c0, decay_s: max_order as f64 })
}

/// `sup_ω (2π ω^{S-1})^{-1} ∫_0^{L_hi} |y^(S) - y_M^(S)(t, ω)| dt`, cell by cell.
fn tail_constant(env: &EnvelopeSet, omega: Interval, end: f64, mids: &[(f64, f64)], trigs: &[ModeTrig]) -> Result<f64> {
    let order = env.max_order();
    let f = env.order(order);
    let mut integral = Interval::ZERO;
    // i^S rotates (re, im) by quarter turns.
    let rotate = |re: Interval, im: Interval| match order % 4 {
        0 => (re, im),
        1 => (-im, re),
        2 => (-re, -im),
        _ => (im, -re),
    };
    for j in (0..f.n_time()).take_while(|&j| f.boundary(j) < end) {
        let mut poly = Interval::ZERO;
        for (&(a, b), trig) in mids.iter().zip(trigs) {
            let scale = trig.freq.powi(order as i32)?;
            let (re, im) = rotate(Interval::point(a) * scale, Interval::point(b) * scale);
            // 2 Re[(re + i im)(cos + i sin)] = 2 (re cos - im sin)
            poly += (re * trig.cos_on[j] - im * trig.sin_on[j]) * 2.0;
        }
        let (t0, t1) = f.cell_span(j);
        let len = Interval::point(t1.min(end)) - Interval::point(t0);
        integral += len * (f.cell(j) - poly).mag();
    }
    let denom = TWO_PI * omega.powi(order as i32 - 1)?;
    Ok(integral.div(denom)?.hi())
}

/// Rotates every mode so that the first coefficient becomes real and non-negative.
///
/// Mode `k` is rotated by `-kΘ`, where `Θ` encloses the argument of every
/// first coefficient in the cube. Rotations preserve modulus, so each mode is
/// also clipped to the square of its modulus bound.
pub fn time_translate(x: &ProjectedCube) -> Result<ProjectedCube> {
    let c1 = x.coeffs[0];
    let (a, b) = (c1.re, c1.im);
    let theta = if a.lo() > 0.0 {
        b.div(a)?.atan()
    } else if a.hi() < 0.0 {
        b.div(a)?.atan() + PI
    } else if b.lo() > 0.0 {
        crate::interval::HALF_PI - a.div(b)?.atan()
    } else if b.hi() < 0.0 {
        -a.div(b)?.atan() - crate::interval::HALF_PI
    } else {
        Interval::spanning(-PI.hi(), PI.hi())
    };
    let mut coeffs = Vec::with_capacity(x.m());
    coeffs.push(ComplexInterval::new(Interval::spanning(c1.mignitude(), c1.modulus_upper()), Interval::ZERO));
    for (i, c) in x.coeffs.iter().enumerate().skip(1) {
        let k = (i + 1) as f64;
        let (cos, sin) = (theta * k).cos_sin()?;
        let re = cos * c.re + sin * c.im;
        let im = cos * c.im - sin * c.re;
        let r = c.modulus_upper();
        let square = Interval::spanning(-r, r);
        coeffs.push(ComplexInterval::new(re.intersect(square), im.intersect(square)));
    }
    Ok(ProjectedCube { omega: x.omega, coeffs, tail_c0: x.tail_c0, decay_s: x.decay_s })
}
