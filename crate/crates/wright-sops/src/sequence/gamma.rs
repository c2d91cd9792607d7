use crate::error::{Error, Result};
use crate::interval::{Interval, PI};

/// Upper bound `γ_k` for `Σ_{j=1}^{k-1} k^s / (j^s (k-j)^s)`, valid for `k >= 4`.
///
/// `γ_k = 2 (k/(k-1))^s + (4 ln(k-2)/k + (π²-6)/3) (2/k + 1/2)^{⌊s⌋-2}`.
pub fn gamma_constant(k: usize, s: f64) -> Result<f64> {
    if k < 4 {
        return Err(Error::Argument(format!("gamma needs k >= 4, got {k}")));
    }
    if !(s >= 2.0) || !s.is_finite() {
        return Err(Error::Argument(format!("gamma needs s >= 2, got {s}")));
    }
    let kk = Interval::point(k as f64);
    let ratio = kk.div(Interval::point((k - 1) as f64))?;
    let first = ratio.powf(s)? * 2.0;
    let log_term = Interval::point((k - 2) as f64).ln()? * 4.0;
    let zeta_part = (PI.sqr() - 6.0).div_scalar(3.0)?;
    let bracket = log_term.div(kk)? + zeta_part;
    let base = Interval::point(2.0).div(kk)? + 0.5;
    let second = bracket * base.powi(s.floor() as i32 - 2)?;
    Ok((first + second).hi())
}

/// Direct evaluation of `Σ_{j=1}^{k-1} k^s / (j^s (k-j)^s)` in floating point.
pub fn gamma_brute_force(k: usize, s: f64) -> f64 {
    let kf = k as f64;
    (1..k)
        .map(|j| {
            let j = j as f64;
            (kf / (j * (kf - j))).powf(s)
        })
        .sum()
}
