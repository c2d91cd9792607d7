//! Branch-and-bound over a cube cover and the recombination cross-check.

mod checkpoint;
mod pool;
mod recombine;

use std::panic::{AssertUnwindSafe, catch_unwind};
use std::time::{Duration, Instant};

pub use checkpoint::{Checkpoint, SearchState};
pub use recombine::{Recombination, RecombineStats, Status, covers, interval_union, recombine, recombine_with_workers};

use crate::error::{Error, Result};
use crate::prune::{PruneFlag, prune};
use crate::sequence::{Coord, Cube, CubeCollection};
use pool::Pool;

#[derive(Clone, Debug, PartialEq)]
pub struct SearchParams {
    /// Halting width: cubes whose weighted widths all fall below it go to `R`.
    pub epsilon: f64,
    /// A cube is pruned again when its leading volume shrank by more than `1 + delta`.
    pub delta: f64,
    /// Highest split dimension (0 = alpha, `i >= 1` = finite coordinate `i - 1`).
    pub max_dim: usize,
    /// One positive weight per split dimension `0..=max_dim`.
    pub weights: Vec<f64>,
    /// Prune iterations used by recombination.
    pub n_recombine: usize,
    pub worker_count: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        let mut weights = vec![1.0; 7];
        weights[0] = 8.0;
        SearchParams { epsilon: 0.01, delta: 0.5, max_dim: 6, weights, n_recombine: 5, worker_count: 1 }
    }
}

impl SearchParams {
    /// Checks the parameter invariants for cubes with `m` modes.
    pub fn validate(&self, m: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::Argument(msg));
        if !(self.epsilon > 0.0) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if !(self.delta >= 0.0) {
            return bad(format!("delta must be nonnegative, got {}", self.delta));
        }
        if self.max_dim > 2 * m {
            return bad(format!("max_dim {} exceeds 2M = {}", self.max_dim, 2 * m));
        }
        if self.weights.len() != self.max_dim + 1 {
            return bad(format!("need {} weights, got {}", self.max_dim + 1, self.weights.len()));
        }
        if let Some(w) = self.weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return bad(format!("weights must be positive, got {w}"));
        }
        if self.worker_count == 0 {
            return bad("worker_count must be at least 1".into());
        }
        Ok(())
    }
}

/// Weighted diameter of split dimension `i`.
pub fn weighted_width(x: &Cube, i: usize, weights: &[f64]) -> f64 {
    let width = if i == 0 { x.alpha.width() } else { x.get(Coord::from_vector_index(i - 1)).width() };
    weights[i] * width
}

/// Lowest dimension among those of largest weighted width, with that width.
fn widest_dim(x: &Cube, p: &SearchParams) -> (usize, f64) {
    let mut best = (0, weighted_width(x, 0, &p.weights));
    for i in 1..=p.max_dim {
        let w = weighted_width(x, i, &p.weights);
        if w > best.1 {
            best = (i, w);
        }
    }
    best
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SearchStats {
    /// Cubes taken from the work list.
    pub popped: usize,
    pub prune_calls: usize,
    /// Prunes repeated on the same cube because its volume kept shrinking.
    pub reprunes: usize,
    pub discarded: usize,
    pub to_a: usize,
    pub to_b: usize,
    pub to_r: usize,
    pub splits: usize,
    /// Cubes whose processing failed or panicked; they are kept in `R`.
    pub faults: usize,
    pub generations: usize,
    /// Prune outcomes indexed by flag code.
    pub flags: [usize; 4],
    pub wall: Duration,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    /// Cubes holding exactly one zero per parameter value.
    pub a: CubeCollection,
    /// Cubes whose zeros lie on the principal branch.
    pub b: CubeCollection,
    /// Cubes left undecided at the halting width.
    pub r: CubeCollection,
    pub stats: SearchStats,
}

enum Disposition {
    Discarded,
    A(Cube),
    B(Cube),
    R(Cube),
    Split(Cube, Cube),
    Fault(Cube),
}

struct Processed {
    disposition: Disposition,
    prune_calls: usize,
    reprunes: usize,
    flags: [usize; 4],
}

fn process(x: &Cube, p: &SearchParams) -> Result<Processed> {
    let mut out = Processed { disposition: Disposition::Discarded, prune_calls: 0, reprunes: 0, flags: [0; 4] };
    let lead = p.max_dim / 2;
    let mut current = x.clone();
    loop {
        let r = prune(&current)?;
        out.prune_calls += 1;
        out.flags[r.flag.code() as usize] += 1;
        out.disposition = match (r.flag, r.cube) {
            (PruneFlag::Empty, _) | (_, None) => Disposition::Discarded,
            (PruneFlag::PrincipalBranch, Some(c)) => Disposition::B(c),
            (PruneFlag::Unique, Some(c)) => Disposition::A(c),
            (PruneFlag::Reduced, Some(c)) => {
                let (dim, width) = widest_dim(&c, p);
                if width < p.epsilon {
                    Disposition::R(c)
                } else if (1.0 + p.delta).ln() < current.leading_log_volume(lead) - c.leading_log_volume(lead) {
                    out.reprunes += 1;
                    current = c;
                    continue;
                } else {
                    let (l, r) = c.split_dim(dim)?;
                    Disposition::Split(l, r)
                }
            }
        };
        return Ok(out);
    }
}

fn process_guarded(x: &Cube, p: &SearchParams) -> Processed {
    match catch_unwind(AssertUnwindSafe(|| process(x, p))) {
        Ok(Ok(done)) => done,
        _ => Processed { disposition: Disposition::Fault(x.clone()), prune_calls: 0, reprunes: 0, flags: [0; 4] },
    }
}

fn check_inputs(cubes: &[Cube], p: &SearchParams) -> Result<()> {
    let Some(first) = cubes.first() else { return Ok(()) };
    p.validate(first.m())?;
    for x in cubes {
        if x.m() < 5 || !(x.decay_s > 2.0) {
            return Err(Error::HypothesisViolation(format!(
                "search needs M >= 5 and s > 2, got M = {}, s = {}",
                x.m(),
                x.decay_s
            )));
        }
        if !x.phase_fixed() {
            return Err(Error::Argument("search input cubes must be phase fixed".into()));
        }
    }
    Ok(())
}

/// Runs the search to completion from an initial cover.
pub fn branch_and_bound(s: &CubeCollection, p: &SearchParams) -> Result<SearchOutcome> {
    run_search(SearchState::new(s.cubes().to_vec()), p, None)
}

/// Runs the search from a saved state, optionally writing checkpoints.
///
/// Work proceeds in generations: every pending cube is processed, then the
/// children of all splits form the next generation in input order. Results
/// therefore do not depend on the number of workers.
pub fn run_search(mut state: SearchState, p: &SearchParams, checkpoint: Option<&Checkpoint>) -> Result<SearchOutcome> {
    let start = Instant::now();
    let all: Vec<Cube> = state.pending.iter().chain(&state.a).chain(&state.b).chain(&state.r).cloned().collect();
    check_inputs(&all, p)?;
    let pool = Pool::new(p.worker_count)?;
    let mut stats = SearchStats::default();
    while !state.pending.is_empty() {
        let batch = std::mem::take(&mut state.pending);
        let results = pool.map(&batch, |x| process_guarded(x, p));
        stats.popped += batch.len();
        stats.generations += 1;
        for done in results {
            stats.prune_calls += done.prune_calls;
            stats.reprunes += done.reprunes;
            for (total, n) in stats.flags.iter_mut().zip(done.flags) {
                *total += n;
            }
            match done.disposition {
                Disposition::Discarded => stats.discarded += 1,
                Disposition::A(c) => {
                    stats.to_a += 1;
                    state.a.push(c);
                }
                Disposition::B(c) => {
                    stats.to_b += 1;
                    state.b.push(c);
                }
                Disposition::R(c) => {
                    stats.to_r += 1;
                    state.r.push(c);
                }
                Disposition::Split(l, r) => {
                    stats.splits += 1;
                    state.pending.push(l);
                    state.pending.push(r);
                }
                Disposition::Fault(c) => {
                    stats.faults += 1;
                    state.r.push(c);
                }
            }
        }
        state.generation += 1;
        if let Some(cp) = checkpoint
            && (cp.due(state.generation) || state.pending.is_empty())
        {
            state.save(&cp.dir)?;
        }
    }
    stats.wall = start.elapsed();
    Ok(SearchOutcome {
        a: CubeCollection::from_cubes(state.a)?,
        b: CubeCollection::from_cubes(state.b)?,
        r: CubeCollection::from_cubes(state.r)?,
        stats,
    })
}
