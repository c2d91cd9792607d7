//! From envelope sets to a gridded cube cover over a parameter interval.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::envelope::{EnvelopeSet, Provenance};
use super::projection::{fourier_projection, time_translate};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::prune::{PruneFlag, amplitude_lower_bound, prune};
use crate::sequence::{Coord, Cube, CubeCollection};

/// Result of building a cover, with the counts at each phase boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverOutcome {
    pub cubes: CubeCollection,
    /// Envelope sets received.
    pub envelopes: usize,
    /// Envelope sets whose amplitude is too small for a nontrivial solution.
    pub low_amplitude: usize,
    /// Envelope sets whose projection was inconsistent, with the reason.
    pub inconsistent: Vec<(usize, String)>,
    /// Cubes left after the single prune of each projected cube.
    pub after_prune: usize,
    pub provenance: Provenance,
}

enum Projected {
    LowAmplitude,
    Inconsistent(String),
    Discarded,
    Kept(Cube),
}

fn project_one(i_alpha: Interval, m: usize, env: &EnvelopeSet) -> Result<Projected> {
    let period = env.period();
    let omega = crate::interval::TWO_PI.div(period)?;
    if let Ok(bound) = amplitude_lower_bound(i_alpha, omega)
        && env.order(0).range().mag() <= bound.lo()
    {
        return Ok(Projected::LowAmplitude);
    }
    let projected = match fourier_projection(m, period, env) {
        Ok(p) => p,
        Err(e @ Error::EmptyIntersection { .. }) => return Ok(Projected::Inconsistent(e.to_string())),
        Err(e) => return Err(e),
    };
    let cube = time_translate(&projected)?.with_alpha(i_alpha)?;
    let pruned = prune(&cube)?;
    Ok(match (pruned.flag, pruned.cube) {
        (PruneFlag::Empty, _) | (_, None) => Projected::Discarded,
        (_, Some(c)) => Projected::Kept(c),
    })
}

/// Projects, phase-fixes and prunes every envelope set, then hulls the
/// survivors into an `n x n` grid on the `(omega, a_1)` plane.
pub fn build_cover(
    i_alpha: Interval,
    m: usize,
    max_order: usize,
    n: usize,
    envelopes: &[EnvelopeSet],
) -> Result<CoverOutcome> {
    if n == 0 {
        return Err(Error::Argument("grid size must be positive".into()));
    }
    let sets: Vec<EnvelopeSet> = envelopes.iter().map(|e| e.truncated(max_order)).collect();
    if let Some(short) = sets.iter().find(|e| e.max_order() < max_order) {
        return Err(Error::Argument(format!("envelope set has order {} < S = {max_order}", short.max_order())));
    }
    #[cfg(feature = "parallel")]
    let projected: Vec<Result<Projected>> = sets.par_iter().map(|e| project_one(i_alpha, m, e)).collect();
    #[cfg(not(feature = "parallel"))]
    let projected: Vec<Result<Projected>> = sets.iter().map(|e| project_one(i_alpha, m, e)).collect();

    let mut kept = Vec::new();
    let mut low_amplitude = 0;
    let mut inconsistent = Vec::new();
    for (i, p) in projected.into_iter().enumerate() {
        match p? {
            Projected::LowAmplitude => low_amplitude += 1,
            Projected::Inconsistent(msg) => inconsistent.push((i, msg)),
            Projected::Discarded => {}
            Projected::Kept(c) => kept.push(c),
        }
    }
    let provenance = if envelopes.iter().all(|e| e.provenance == Provenance::Rigorous) {
        Provenance::Rigorous
    } else {
        Provenance::Fixture
    };
    let after_prune = kept.len();
    Ok(CoverOutcome {
        cubes: grid_hull(&kept, n)?,
        envelopes: envelopes.len(),
        low_amplitude,
        inconsistent,
        after_prune,
        provenance,
    })
}

fn grid_edges(span: Interval, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|i| match i {
            0 => span.lo(),
            i if i == n => span.hi(),
            i => span.lo() + (span.hi() - span.lo()) * (i as f64 / n as f64),
        })
        .collect()
}

/// Hulls cubes cell by cell on an `n x n` grid over the `(omega, a_1)` hull.
///
/// Each cube is clipped to every cell it meets before hulling, so a cell's cube
/// contains every point of the inputs whose `(omega, a_1)` lies in that cell.
pub fn grid_hull(cubes: &[Cube], n: usize) -> Result<CubeCollection> {
    let Some(first) = cubes.first() else {
        return Ok(CubeCollection::new());
    };
    let a1 = Coord::Re(1);
    let (omega_span, a1_span) =
        cubes.iter().fold((first.omega, first.get(a1)), |(w, a), c| (w.hull(c.omega), a.hull(c.get(a1))));
    let omega_edges = grid_edges(omega_span, n);
    let a1_edges = grid_edges(a1_span, n);
    let mut out = CubeCollection::new();
    for bw in 0..n {
        let cell_omega = Interval::spanning(omega_edges[bw], omega_edges[bw + 1]);
        for ba in 0..n {
            let cell_a1 = Interval::spanning(a1_edges[ba], a1_edges[ba + 1]);
            let mut hull: Option<Cube> = None;
            for c in cubes {
                let w = c.omega.intersect(cell_omega);
                let a = c.get(a1).intersect(cell_a1);
                if w.is_empty() || a.is_empty() {
                    continue;
                }
                let mut clipped = c.clone();
                clipped.omega = w;
                clipped.set(a1, a);
                hull = Some(match hull {
                    None => clipped,
                    Some(h) => h.hull(&clipped)?,
                });
            }
            if let Some(h) = hull {
                out.push(h)?;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::ComplexInterval;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    fn cube(omega: Interval, a1: Interval) -> Cube {
        let mut coeffs = vec![ComplexInterval::new(iv(-0.01, 0.01), iv(-0.01, 0.01)); 5];
        coeffs[0] = ComplexInterval::new(a1, Interval::ZERO);
        Cube::new(iv(1.88, 1.89), omega, coeffs, 0.1, 3.0).unwrap()
    }

    #[test]
    fn single_cube_single_cell() {
        let c = cube(iv(1.4, 1.5), iv(0.5, 0.6));
        let out = grid_hull(std::slice::from_ref(&c), 1).unwrap();
        assert_eq!(out.cubes(), &[c]);
    }

    #[test]
    fn disjoint_footprints_stay_apart() {
        let a = cube(iv(1.4, 1.45), iv(0.5, 0.55));
        let b = cube(iv(1.55, 1.6), iv(0.65, 0.7));
        let out = grid_hull(&[a.clone(), b.clone()], 2).unwrap();
        assert_eq!(out.len(), 2);
        assert!(out.cubes().contains(&a) && out.cubes().contains(&b));
    }

    #[test]
    fn overlapping_cubes_are_clipped_per_cell() {
        let a = cube(iv(1.4, 1.6), iv(0.5, 0.7));
        let b = cube(iv(1.45, 1.5), iv(0.55, 0.6));
        let out = grid_hull(&[a, b], 2).unwrap();
        assert_eq!(out.len(), 4);
        for c in out.iter() {
            assert!(c.omega.width() <= 0.1 + 1e-12);
        }
    }
}
