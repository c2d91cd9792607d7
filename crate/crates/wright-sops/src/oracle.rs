//! Non-rigorous floating-point solver for slowly oscillating periodic solutions.
//!
//! Used to seed centers, to generate fixtures and as a reference in tests.
//! Nothing here is validated.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::functional::{CenterPoint, point_jacobian, point_residual};

/// Residual in the ordered real layout `(Re F_1, Im F_1, ...)`.
fn residual_vector(x: &CenterPoint) -> DVector<f64> {
    let f = point_residual(x.alpha, x.omega, &x.coeffs);
    DVector::from_iterator(2 * f.len(), f.iter().flat_map(|z| [z.re, z.im]))
}

/// Largest residual modulus over the explicit modes.
pub fn residual_norm(x: &CenterPoint) -> f64 {
    point_residual(x.alpha, x.omega, &x.coeffs).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Damped Newton iteration on `F_M = 0` with `b_1 = 0`, at fixed `alpha`.
pub fn newton(start: &CenterPoint, tol: f64, max_iter: usize) -> Result<CenterPoint> {
    let mut x = start.clone();
    x.coeffs[0].im = 0.0;
    let mut r = residual_vector(&x);
    let mut norm = r.amax();
    for _ in 0..max_iter {
        if norm < tol {
            return Ok(normalize_phase(x));
        }
        let jac: DMatrix<f64> = point_jacobian(&x);
        let step = jac.lu().solve(&(-&r)).ok_or(Error::SingularMidpoint)?;
        let v0 = DVector::from_vec(x.vector());
        let mut damping = 1.0;
        loop {
            let mut trial = x.clone();
            trial.set_vector((&v0 + &step * damping).as_slice());
            let rt = residual_vector(&trial);
            let nt = rt.amax();
            if nt.is_finite() && (nt < norm || damping < 1e-3) {
                x = trial;
                r = rt;
                norm = nt;
                break;
            }
            damping *= 0.5;
        }
    }
    if norm < tol { Ok(normalize_phase(x)) } else { Err(Error::NoConvergence { residual: norm, iterations: max_iter }) }
}

/// Shifts time by half a period when needed so that `a_1 >= 0`.
fn normalize_phase(mut x: CenterPoint) -> CenterPoint {
    if x.coeffs[0].re < 0.0 {
        for (k, c) in x.coeffs.iter_mut().enumerate() {
            if k % 2 == 0 {
                *c = -*c;
            }
        }
    }
    x
}

/// Small-amplitude guess just past the Hopf point `alpha = pi/2`.
pub fn hopf_seed(alpha: f64, m: usize) -> CenterPoint {
    let eps = (alpha - std::f64::consts::FRAC_PI_2).max(1e-6);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); m];
    coeffs[0] = Complex64::new((10.0 * eps / (3.0 * std::f64::consts::PI - 2.0)).sqrt(), 0.0);
    CenterPoint { alpha, omega: std::f64::consts::FRAC_PI_2, coeffs }
}

/// Follows the branch from the Hopf point to `alpha` with steps of at most `max_step`.
///
/// Steps shrink near the Hopf point, where the amplitude grows like a square
/// root, and a step that lands on the trivial branch is retried at half size.
pub fn slowly_oscillating_solution(alpha: f64, m: usize, max_step: f64) -> Result<CenterPoint> {
    let hopf = std::f64::consts::FRAC_PI_2;
    if !(alpha > hopf) {
        return Err(Error::Argument(format!("no nontrivial branch below pi/2, got alpha = {alpha}")));
    }
    let start = (hopf + 0.005).min(alpha);
    let mut x = newton(&hopf_seed(start, m), 1e-13, 60)?;
    let mut step = max_step;
    while x.alpha < alpha {
        let h = step.min(0.5 * (x.alpha - hopf));
        let mut guess = x.clone();
        guess.alpha = (x.alpha + h).min(alpha);
        match newton(&guess, 1e-13, 60) {
            Ok(y) if y.coeffs[0].re > 0.5 * x.coeffs[0].re => {
                x = y;
                step = (step * 1.5).min(max_step);
            }
            _ if step > 1e-6 => step *= 0.5,
            Ok(_) => return Err(Error::NoConvergence { residual: 0.0, iterations: 0 }),
            Err(e) => return Err(e),
        }
    }
    Ok(x)
}

/// Closest parameter to the Hopf point accepted by [`solve`].
pub const HOPF_CLEARANCE: f64 = 1e-3;

/// Branch solution at `alpha` with `m` modes, certified only by its own residual.
pub fn solve(alpha: f64, m: usize) -> Result<CenterPoint> {
    if !(alpha > std::f64::consts::FRAC_PI_2 + HOPF_CLEARANCE) {
        return Err(Error::Argument(format!("alpha must exceed pi/2 + {HOPF_CLEARANCE}, got {alpha}")));
    }
    if m == 0 {
        return Err(Error::Argument("need at least one mode".into()));
    }
    let x = slowly_oscillating_solution(alpha, m, 0.02)?;
    let residual = residual_norm(&x);
    if !(residual < 1e-12) {
        return Err(Error::NoConvergence { residual, iterations: 60 });
    }
    Ok(x)
}

/// Solution at `alpha` with `m_fine` modes, truncated to the first `m` modes.
pub fn projected_solution(alpha: f64, m: usize, m_fine: usize) -> Result<CenterPoint> {
    let mut x = slowly_oscillating_solution(alpha, m_fine.max(m), 0.02)?;
    x.coeffs.truncate(m);
    Ok(x)
}
