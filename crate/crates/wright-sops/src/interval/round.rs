//! Directed rounding on top of round-to-nearest.
//!
//! Each helper computes the nearest result and inspects the exact rounding
//! error (two-sum or fused multiply-add residual). The result is nudged one
//! representable step only when the nearest value sits on the wrong side.
//! Where an error-free transform could lose exactness (very small or
//! overflowing magnitudes) the result is nudged unconditionally.

/// Below this magnitude fma residuals may be subnormal and therefore inexact.
const TINY: f64 = 1.0e-270;
/// Operand magnitudes outside `[TINY_ARG, 1/TINY_ARG]` also take the conservative path.
const TINY_ARG: f64 = 1.0e-250;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn overflow_down(s: f64) -> f64 {
    if s > 0.0 { f64::MAX } else { s }
}

#[inline]
fn overflow_up(s: f64) -> f64 {
    if s < 0.0 { -f64::MAX } else { s }
}

#[inline]
pub(crate) fn add_down(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if s.is_infinite() {
        return if a.is_finite() && b.is_finite() { overflow_down(s) } else { s };
    }
    if e < 0.0 { s.next_down() } else { s }
}

#[inline]
pub(crate) fn add_up(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if s.is_infinite() {
        return if a.is_finite() && b.is_finite() { overflow_up(s) } else { s };
    }
    if e > 0.0 { s.next_up() } else { s }
}

#[inline]
pub(crate) fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub(crate) fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

#[inline]
pub(crate) fn mul_down(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if p.is_infinite() {
        return if a.is_finite() && b.is_finite() { overflow_down(p) } else { p };
    }
    if p.abs() < TINY {
        return p.next_down();
    }
    let e = a.mul_add(b, -p);
    if e < 0.0 { p.next_down() } else { p }
}

#[inline]
pub(crate) fn mul_up(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if p.is_infinite() {
        return if a.is_finite() && b.is_finite() { overflow_up(p) } else { p };
    }
    if p.abs() < TINY {
        return p.next_up();
    }
    let e = a.mul_add(b, -p);
    if e > 0.0 { p.next_up() } else { p }
}

/// Sign of `a/b - fl(a/b)`: +1, -1, 0, or `None` when the residual is unreliable.
#[inline]
fn div_error_sign(a: f64, b: f64, q: f64) -> Option<f64> {
    let ok = |x: f64| x.is_finite() && (x.abs() >= TINY_ARG) && (x.abs() <= 1.0 / TINY_ARG);
    if !(ok(a) && ok(b) && ok(q)) {
        return None;
    }
    let r = (-q).mul_add(b, a);
    Some(if r == 0.0 { 0.0 } else { r.signum() * b.signum() })
}

#[inline]
pub(crate) fn div_down(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    if q.is_infinite() {
        return if a.is_finite() && b.is_finite() { overflow_down(q) } else { q };
    }
    if b.is_infinite() || a.is_infinite() {
        return q;
    }
    match div_error_sign(a, b, q) {
        Some(s) if s >= 0.0 => q,
        Some(_) => q.next_down(),
        None => q.next_down(),
    }
}

#[inline]
pub(crate) fn div_up(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    if q.is_infinite() {
        return if a.is_finite() && b.is_finite() { overflow_up(q) } else { q };
    }
    if b.is_infinite() || a.is_infinite() {
        return q;
    }
    match div_error_sign(a, b, q) {
        Some(s) if s <= 0.0 => q,
        Some(_) => q.next_up(),
        None => q.next_up(),
    }
}

#[inline]
pub(crate) fn sqrt_down(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let r = x.sqrt();
    if x.is_infinite() {
        return f64::MAX;
    }
    if x < TINY_ARG {
        return r.next_down().max(0.0);
    }
    let e = (-r).mul_add(r, x);
    if e < 0.0 { r.next_down() } else { r }
}

#[inline]
pub(crate) fn sqrt_up(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let r = x.sqrt();
    if x.is_infinite() {
        return r;
    }
    if x < TINY_ARG {
        return r.next_up();
    }
    let e = (-r).mul_add(r, x);
    if e > 0.0 { r.next_up() } else { r }
}

/// Integer power of a non-negative base, rounded down.
pub(crate) fn powi_down(x: f64, n: u32) -> f64 {
    debug_assert!(x >= 0.0);
    let mut acc = 1.0;
    let mut base = x;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_down(acc, base);
        }
        e >>= 1;
        if e > 0 {
            base = mul_down(base, base);
        }
    }
    acc
}

/// Integer power of a non-negative base, rounded up.
pub(crate) fn powi_up(x: f64, n: u32) -> f64 {
    debug_assert!(x >= 0.0);
    let mut acc = 1.0;
    let mut base = x;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_up(acc, base);
        }
        e >>= 1;
        if e > 0 {
            base = mul_up(base, base);
        }
    }
    acc
}

pub(crate) fn step_down(x: f64, n: u32) -> f64 {
    (0..n).fold(x, |v, _| v.next_down())
}

pub(crate) fn step_up(x: f64, n: u32) -> f64 {
    (0..n).fold(x, |v, _| v.next_up())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_sums_are_not_nudged() {
        assert_eq!(add_down(1.0, 3.0), 4.0);
        assert_eq!(add_up(2.0, 4.0), 6.0);
    }

    #[test]
    fn inexact_sum_brackets() {
        let lo = add_down(0.1, 0.2);
        let hi = add_up(0.1, 0.2);
        assert!(lo < hi);
        assert_eq!(hi, lo.next_up());
    }

    #[test]
    fn overflow_keeps_finite_lower_bound() {
        assert_eq!(add_down(f64::MAX, f64::MAX), f64::MAX);
        assert_eq!(add_up(f64::MAX, f64::MAX), f64::INFINITY);
        assert_eq!(mul_down(1e300, 1e300), f64::MAX);
    }

    #[test]
    fn third_brackets() {
        let lo = div_down(1.0, 3.0);
        let hi = div_up(1.0, 3.0);
        assert_eq!(hi, lo.next_up());
        assert!(3.0 * lo < 1.0 || (3.0f64).mul_add(lo, -1.0) < 0.0);
    }

    #[test]
    fn sqrt_of_square_is_exact() {
        assert_eq!(sqrt_down(16.0), 4.0);
        assert_eq!(sqrt_up(16.0), 4.0);
        assert!(sqrt_down(2.0) < sqrt_up(2.0));
    }

    #[test]
    fn tiny_products_are_widened() {
        let lo = mul_down(1e-200, 1e-200);
        let hi = mul_up(1e-200, 1e-200);
        assert!(lo < hi);
    }
}
