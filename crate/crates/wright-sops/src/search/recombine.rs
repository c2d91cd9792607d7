//! Resolving undecided cubes and cross-checking uniqueness across cubes that
//! share parameter values.

use super::SearchOutcome;
use super::pool::Pool;
use crate::error::Result;
use crate::interval::Interval;
use crate::prune::{PruneFlag, PruneResult, prune_iterated};
use crate::sequence::{Cube, CubeCollection};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    Failure,
}

impl Status {
    pub fn tag(self) -> &'static str {
        match self {
            Status::Success => "SUCCESS",
            Status::Failure => "FAILURE",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RecombineStats {
    /// Undecided cubes after merging those with overlapping parameter ranges.
    pub merged: usize,
    /// Undecided cubes after bisecting each in the parameter.
    pub bisected: usize,
    pub resolved_a: usize,
    pub resolved_b: usize,
    pub resolved_empty: usize,
    /// Slices of `A` cubes re-checked against the principal-branch range.
    pub principal_checks: usize,
    /// Hulls of `A` cube pairs re-checked for uniqueness.
    pub overlap_checks: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Recombination {
    pub status: Status,
    /// Reason for a failure, naming the check that failed.
    pub failure: Option<String>,
    /// Union of the parameter ranges of `A`, as disjoint sorted intervals.
    pub alpha_a: Vec<Interval>,
    /// Union of the parameter ranges of `B`, as disjoint sorted intervals.
    pub alpha_b: Vec<Interval>,
    pub a: CubeCollection,
    pub b: CubeCollection,
    /// Cubes still undecided; nonempty only on failure.
    pub r: CubeCollection,
    pub stats: RecombineStats,
}

/// Merges intervals that overlap or touch into disjoint sorted intervals.
pub fn interval_union(items: impl IntoIterator<Item = Interval>) -> Vec<Interval> {
    let mut v: Vec<Interval> = items.into_iter().filter(|x| !x.is_empty()).collect();
    v.sort_by(|x, y| x.lo().total_cmp(&y.lo()).then(x.hi().total_cmp(&y.hi())));
    let mut out: Vec<Interval> = Vec::new();
    for x in v {
        match out.last_mut() {
            Some(last) if x.lo() <= last.hi() => *last = last.hull(x),
            _ => out.push(x),
        }
    }
    out
}

/// Whether a union from `interval_union` contains all of `target`.
pub fn covers(union: &[Interval], target: Interval) -> bool {
    union.iter().any(|u| target.subset_of(*u))
}

fn positive_overlap(x: Interval, y: Interval) -> bool {
    x.hi().min(y.hi()) > x.lo().max(y.lo())
}

/// Hulls cubes whose parameter ranges overlap in more than a point.
fn merge_overlapping(mut r: Vec<Cube>) -> Result<Vec<Cube>> {
    r.sort_by(|x, y| x.alpha.lo().total_cmp(&y.alpha.lo()).then(x.alpha.hi().total_cmp(&y.alpha.hi())));
    let mut out: Vec<Cube> = Vec::new();
    for x in r {
        match out.last_mut() {
            Some(z) if positive_overlap(z.alpha, x.alpha) => *z = z.hull(&x)?,
            _ => out.push(x),
        }
    }
    Ok(out)
}

fn prune_all(pool: &Pool, cubes: &[Cube], n: usize) -> Result<Vec<PruneResult>> {
    pool.map(cubes, |x| prune_iterated(x, n)).into_iter().collect()
}

fn alpha_slice(x: &Cube, alpha: Interval) -> Cube {
    let mut z = x.clone();
    z.alpha = alpha;
    z
}

/// Resolves `R` and checks uniqueness where cubes share parameter values,
/// using up to `n` prune iterations per cube and a single worker.
pub fn recombine(out: &SearchOutcome, n: usize) -> Result<Recombination> {
    recombine_with_workers(out, n, 1)
}

pub fn recombine_with_workers(out: &SearchOutcome, n: usize, workers: usize) -> Result<Recombination> {
    let pool = Pool::new(workers)?;
    let mut stats = RecombineStats::default();
    let mut a: Vec<Cube> = out.a.cubes().to_vec();
    let mut b: Vec<Cube> = out.b.cubes().to_vec();

    let merged = merge_overlapping(out.r.cubes().to_vec())?;
    stats.merged = merged.len();
    let mut halves = Vec::with_capacity(2 * merged.len());
    for x in merged {
        if x.alpha.width() > 0.0 {
            let (l, r) = x.split_dim(0)?;
            halves.push(l);
            halves.push(r);
        } else {
            halves.push(x);
        }
    }
    stats.bisected = halves.len();
    let mut r = Vec::new();
    for (x, res) in halves.iter().zip(prune_all(&pool, &halves, n)?) {
        match (res.flag, res.cube) {
            (PruneFlag::Empty, _) | (_, None) => stats.resolved_empty += 1,
            (PruneFlag::PrincipalBranch, Some(c)) => {
                stats.resolved_b += 1;
                b.push(c);
            }
            (PruneFlag::Unique, Some(c)) => {
                stats.resolved_a += 1;
                a.push(c);
            }
            (PruneFlag::Reduced, Some(_)) => r.push(x.clone()),
        }
    }

    let alpha_a = interval_union(a.iter().map(|x| x.alpha));
    let alpha_b = interval_union(b.iter().map(|x| x.alpha));
    let finish = |status, failure: Option<String>, a: Vec<Cube>, b: Vec<Cube>, r: Vec<Cube>, stats| {
        Ok(Recombination {
            status,
            failure,
            alpha_a: alpha_a.clone(),
            alpha_b: alpha_b.clone(),
            a: CubeCollection::from_cubes(a)?,
            b: CubeCollection::from_cubes(b)?,
            r: CubeCollection::from_cubes(r)?,
            stats,
        })
    };
    if !r.is_empty() {
        let msg = format!("{} undecided cubes remain after {n} prune iterations", r.len());
        return finish(Status::Failure, Some(msg), a, b, r, stats);
    }

    let slices: Vec<Cube> = a
        .iter()
        .flat_map(|x| {
            alpha_b.iter().filter_map(move |j| {
                let s = x.alpha.intersect(*j);
                (!s.is_empty()).then(|| alpha_slice(x, s))
            })
        })
        .collect();
    stats.principal_checks = slices.len();
    if let Some((z, _)) =
        slices.iter().zip(prune_all(&pool, &slices, n)?).find(|(_, res)| res.flag != PruneFlag::PrincipalBranch)
    {
        let msg = format!("unique-solution cube over alpha = {} meets the principal-branch range", z.alpha);
        return finish(Status::Failure, Some(msg), a, b, r, stats);
    }

    let mut pairs = Vec::new();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let s = a[i].alpha.intersect(a[j].alpha);
            if !s.is_empty() {
                pairs.push(alpha_slice(&a[i].hull(&a[j])?, s));
            }
        }
    }
    stats.overlap_checks = pairs.len();
    if let Some((z, _)) = pairs.iter().zip(prune_all(&pool, &pairs, n)?).find(|(_, res)| res.flag != PruneFlag::Unique)
    {
        let msg = format!("hull of unique-solution cubes sharing alpha = {} is not verified", z.alpha);
        return finish(Status::Failure, Some(msg), a, b, r, stats);
    }
    finish(Status::Success, None, a, b, r, stats)
}
