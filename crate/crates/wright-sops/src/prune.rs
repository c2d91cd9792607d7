//! The composite pruning operator and its analytic exclusion tests.

use crate::error::{Error, Result};
use crate::functional::{CenterPoint, galerkin_residual, tail_bounds};
use crate::interval::{HALF_PI, Interval, PI};
use crate::krawczyk::{Verdict, build_preconditioner, krawczyk_outer};
use crate::sequence::{Coord, Cube};

/// Outcome class of one prune.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PruneFlag {
    /// Inconclusive; every zero of the input lies in the returned cube.
    Reduced = 0,
    /// No nontrivial zero in the input.
    Empty = 1,
    /// Any zero in the input lies on the branch born at the Hopf bifurcation.
    PrincipalBranch = 2,
    /// Exactly one zero for every parameter value of the input.
    Unique = 3,
}

impl PruneFlag {
    pub fn code(self) -> u8 {
        self as u8
    }
}

/// Which step of the operator produced the result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PruneStep {
    ZeroExclusion,
    HopfNeighborhood,
    Residual,
    Krawczyk,
    Intersection,
    /// The preconditioner was numerically singular; nothing was decided.
    Undecided,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PruneResult {
    pub flag: PruneFlag,
    /// `None` exactly when the flag is `Empty`.
    pub cube: Option<Cube>,
    pub step: PruneStep,
}

/// Switches for the cheap analytic tests that run before the Krawczyk step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PruneSteps {
    pub zero_exclusion: bool,
    pub hopf_neighborhood: bool,
    pub residual: bool,
}

impl Default for PruneSteps {
    fn default() -> Self {
        PruneSteps { zero_exclusion: true, hopf_neighborhood: true, residual: true }
    }
}

impl PruneSteps {
    pub const KRAWCZYK_ONLY: PruneSteps =
        PruneSteps { zero_exclusion: false, hopf_neighborhood: false, residual: false };
}

const ZERO_EXCLUSION_GRID: usize = 16;

fn exact_ratio(num: f64, den: f64) -> Interval {
    Interval::point(num).div_scalar(den).expect("nonzero constant denominator")
}

fn analytic_hypotheses(alpha: Interval, omega: Interval) -> bool {
    alpha.lo() > 0.0 && alpha.hi() <= 2.0 && omega.lo() >= exact_ratio(11.0, 10.0).hi()
}

fn check_hypotheses(alpha: Interval, omega: Interval) -> Result<()> {
    if analytic_hypotheses(alpha, omega) {
        Ok(())
    } else {
        Err(Error::HypothesisViolation(format!(
            "needs alpha in (0, 2] and omega >= 1.1, got alpha = {alpha}, omega = {omega}"
        )))
    }
}

fn zero_radius_direct(alpha: Interval, omega: Interval) -> Result<Interval> {
    let r = omega.div(alpha)?;
    let first = (Interval::ONE - r).sqr();
    let second = r * 2.0 * (Interval::ONE - omega.sin()?);
    (first + second).clamp_nonneg().sqrt()
}

/// Encloses `sqrt((1 - w/a)^2 + 2 (w/a)(1 - sin w))` over the box.
///
/// The box is evaluated on a uniform sub-grid and the pieces are hulled; a
/// single evaluation loses the minimum near `w = a = pi/2` entirely.
pub fn zero_exclusion_radius(alpha: Interval, omega: Interval) -> Result<Interval> {
    check_hypotheses(alpha, omega)?;
    let cells = |iv: Interval| -> Vec<Interval> {
        if iv.is_point() {
            return vec![iv];
        }
        let n = ZERO_EXCLUSION_GRID;
        let step = iv.width() / n as f64;
        (0..n)
            .map(|i| {
                let lo = if i == 0 { iv.lo() } else { iv.lo() + step * i as f64 };
                let hi = if i + 1 == n { iv.hi() } else { iv.lo() + step * (i + 1) as f64 };
                Interval::spanning(lo, hi)
            })
            .collect()
    };
    let mut out = Interval::EMPTY;
    for a in cells(alpha) {
        for w in cells(omega) {
            out = out.hull(zero_radius_direct(a, w)?);
        }
    }
    Ok(out)
}

/// True when the cube lies in the window around the Hopf bifurcation where
/// only the principal branch exists: `|alpha - pi/2| <= 0.00553`,
/// `|omega - pi/2| <= 0.0924` and `delta < 0.18`.
pub fn hopf_neighborhood_test(x: &Cube, delta: f64) -> bool {
    let alpha_window = exact_ratio(553.0, 100000.0).lo();
    let omega_window = exact_ratio(924.0, 10000.0).lo();
    let l1_limit = exact_ratio(18.0, 100.0).lo();
    let within = |iv: Interval, window: f64| {
        let dist = (iv - HALF_PI).mag();
        !iv.is_empty() && dist <= window
    };
    within(x.alpha, alpha_window) && within(x.omega, omega_window) && delta < l1_limit
}

/// Encloses the amplitude bound `-1/2 + 1/2 sqrt(1 + 4 sqrt(3) w g(a, w) / (pi a))`
/// that every nontrivial periodic solution exceeds.
pub fn amplitude_lower_bound(alpha: Interval, omega: Interval) -> Result<Interval> {
    amplitude_from_radius(alpha, omega, zero_exclusion_radius(alpha, omega)?)
}

fn amplitude_from_radius(alpha: Interval, omega: Interval, g: Interval) -> Result<Interval> {
    let sqrt3 = Interval::point(3.0).sqrt()?;
    let factor = (sqrt3 * 4.0 * omega).div(PI * alpha)?;
    let root = (Interval::ONE + factor * g).sqrt()?;
    Ok((root - Interval::ONE) * 0.5)
}

/// Runs the pruning operator with every step enabled.
pub fn prune(x: &Cube) -> Result<PruneResult> {
    prune_with(x, PruneSteps::default())
}

/// Runs the pruning operator; `steps` can disable the analytic pre-tests.
pub fn prune_with(x: &Cube, steps: PruneSteps) -> Result<PruneResult> {
    let m = x.m();
    if m < 5 || !(x.decay_s > 2.0) {
        return Err(Error::HypothesisViolation(format!(
            "prune needs M >= 5 and s > 2, got M = {m}, s = {}",
            x.decay_s
        )));
    }
    let empty = |step| Ok(PruneResult { flag: PruneFlag::Empty, cube: None, step });

    let delta = x.l1_upper_bound();

    if steps.zero_exclusion && analytic_hypotheses(x.alpha, x.omega) {
        let g = zero_exclusion_radius(x.alpha, x.omega)?;
        if delta < g.lo() {
            return empty(PruneStep::ZeroExclusion);
        }
    }

    if steps.hopf_neighborhood && hopf_neighborhood_test(x, delta) {
        return Ok(PruneResult {
            flag: PruneFlag::PrincipalBranch,
            cube: Some(x.clone()),
            step: PruneStep::HopfNeighborhood,
        });
    }

    let center = CenterPoint::of_cube(x);
    let tails = tail_bounds(x, &center)?;

    if steps.residual {
        let residual = galerkin_residual(x)?;
        if residual.iter().zip(&tails.residual_tail).any(|(f, h)| f.mignitude() > *h) {
            return empty(PruneStep::Residual);
        }
    }

    let pre = match build_preconditioner(&center, x.decay_s) {
        Ok(p) => p,
        Err(Error::SingularMidpoint) => {
            return Ok(PruneResult { flag: PruneFlag::Reduced, cube: Some(x.clone()), step: PruneStep::Undecided });
        }
        Err(e) => return Err(e),
    };
    let image = krawczyk_outer(x, &center, &pre, &tails)?;
    match image.verdict {
        Verdict::Unique => {
            Ok(PruneResult { flag: PruneFlag::Unique, cube: Some(x.clone()), step: PruneStep::Krawczyk })
        }
        Verdict::Excluded => empty(PruneStep::Intersection),
        Verdict::Inconclusive => {
            let mut out = x.clone();
            for (i, (k, v)) in image.finite.iter().zip(x.vector()).enumerate() {
                let both = k.intersect(v);
                if both.is_empty() {
                    return empty(PruneStep::Intersection);
                }
                out.set(Coord::from_vector_index(i), both);
            }
            if image.tail_radius < out.tail_c0 {
                out.tail_c0 = image.tail_radius;
            }
            Ok(PruneResult { flag: PruneFlag::Reduced, cube: Some(out), step: PruneStep::Intersection })
        }
    }
}

/// Applies the operator up to `n` times, continuing only while it returns `Reduced`.
pub fn prune_iterated(x: &Cube, n: usize) -> Result<PruneResult> {
    let mut current = PruneResult { flag: PruneFlag::Reduced, cube: Some(x.clone()), step: PruneStep::Undecided };
    for _ in 0..n.max(1) {
        let cube = match &current.cube {
            Some(c) if current.flag == PruneFlag::Reduced => c.clone(),
            _ => break,
        };
        current = prune(&cube)?;
    }
    Ok(current)
}
