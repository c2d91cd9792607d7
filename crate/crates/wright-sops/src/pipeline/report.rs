//! Run report and plot data.

use std::fmt::Write;
use std::time::Duration;

use super::{CoverPhase, RunConfig};
use crate::interval::Interval;
use crate::search::{Recombination, RecombineStats, SearchOutcome, SearchParams, SearchStats, Status};
use crate::seed_cover::Provenance;
use crate::sequence::{Coord, Cube};

pub const PLOT_HEADER: &str = "alpha_lo,alpha_hi,a1_lo,a1_hi,class";

/// Label used in reports: results from fixture envelopes hold only if the fixtures do.
pub fn provenance_label(p: Provenance) -> &'static str {
    match p {
        Provenance::Rigorous => "RIGOROUS",
        Provenance::Fixture => "CONDITIONAL-ON-FIXTURE",
    }
}

/// Plot rows of the parameter range against the first coefficient, one per cube.
pub fn plot_csv(groups: &[(&str, &[Cube])]) -> String {
    let mut out = String::from(PLOT_HEADER);
    out.push('\n');
    for (class, cubes) in groups {
        for c in cubes.iter() {
            let a1 = c.get(Coord::Re(1));
            writeln!(out, "{:?},{:?},{:?},{:?},{class}", c.alpha.lo(), c.alpha.hi(), a1.lo(), a1.hi()).unwrap();
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub alpha: Interval,
    pub modes: usize,
    pub max_order: usize,
    pub decay_s: f64,
    pub grid_n: usize,
    pub search_params: SearchParams,
    /// Bounding-function sets feeding the cover.
    pub bounding_functions: usize,
    /// Cubes after the first prune, before grid hulling.
    pub grid_pruned: usize,
    /// Cubes in the cover handed to the search.
    pub grid: usize,
    pub low_amplitude: usize,
    pub inconsistent: usize,
    pub search: SearchStats,
    pub search_counts: [usize; 3],
    pub recombine: RecombineStats,
    pub final_counts: [usize; 3],
    pub status: Status,
    pub failure: Option<String>,
    pub alpha_a: Vec<Interval>,
    pub alpha_b: Vec<Interval>,
    pub provenance: Provenance,
    /// Wall time per phase; kept out of the report text so that it stays reproducible.
    pub timings: Vec<(String, Duration)>,
}

fn fmt_interval(x: Interval) -> String {
    format!("[{:?}, {:?}]", x.lo(), x.hi())
}

fn fmt_union(u: &[Interval]) -> String {
    u.iter().map(|x| fmt_interval(*x)).collect::<Vec<_>>().join(" ")
}

impl RunReport {
    pub fn new(
        cfg: &RunConfig,
        cover: &CoverPhase,
        search: &SearchOutcome,
        rec: &Recombination,
        timings: Vec<(String, Duration)>,
    ) -> RunReport {
        RunReport {
            alpha: cfg.alpha,
            modes: cfg.modes,
            max_order: cfg.max_order,
            decay_s: cfg.decay_s,
            grid_n: cfg.grid_n,
            search_params: cfg.search.clone(),
            bounding_functions: cover.bounding_functions,
            grid_pruned: cover.after_prune,
            grid: cover.cubes.len(),
            low_amplitude: cover.low_amplitude,
            inconsistent: cover.inconsistent,
            search: search.stats.clone(),
            search_counts: [search.a.len(), search.b.len(), search.r.len()],
            recombine: rec.stats.clone(),
            final_counts: [rec.a.len(), rec.b.len(), rec.r.len()],
            status: rec.status,
            failure: rec.failure.clone(),
            alpha_a: rec.alpha_a.clone(),
            alpha_b: rec.alpha_b.clone(),
            provenance: cover.provenance,
            timings,
        }
    }

    /// `key = value` lines with fixed names; identical inputs give identical text.
    pub fn to_text(&self) -> String {
        let p = &self.search_params;
        let s = &self.search;
        let r = &self.recombine;
        let weights = p.weights.iter().map(|w| format!("{w:?}")).collect::<Vec<_>>().join(" ");
        let mut out = String::new();
        let mut line = |k: &str, v: String| writeln!(out, "{k} = {v}").unwrap();
        line("status", self.status.tag().into());
        line("provenance", provenance_label(self.provenance).into());
        if let Some(f) = &self.failure {
            line("failure", f.clone());
        }
        line("alpha", fmt_interval(self.alpha));
        line("alpha_a", fmt_union(&self.alpha_a));
        line("alpha_b", fmt_union(&self.alpha_b));
        line("modes", self.modes.to_string());
        line("max_order", self.max_order.to_string());
        line("decay_s", format!("{:?}", self.decay_s));
        line("grid_n", self.grid_n.to_string());
        line("epsilon", format!("{:?}", p.epsilon));
        line("delta", format!("{:?}", p.delta));
        line("max_dim", p.max_dim.to_string());
        line("weights", weights);
        line("n_recombine", p.n_recombine.to_string());
        line("n_bf", self.bounding_functions.to_string());
        line("n_grid_pruned", self.grid_pruned.to_string());
        line("n_grid", self.grid.to_string());
        line("cover.low_amplitude", self.low_amplitude.to_string());
        line("cover.inconsistent", self.inconsistent.to_string());
        line("search.popped", s.popped.to_string());
        line("search.prune_calls", s.prune_calls.to_string());
        line("search.reprunes", s.reprunes.to_string());
        line("search.generations", s.generations.to_string());
        line("search.discarded", s.discarded.to_string());
        line("search.splits", s.splits.to_string());
        line("search.faults", s.faults.to_string());
        line("search.flags", s.flags.iter().enumerate().map(|(i, n)| format!("{i}:{n}")).collect::<Vec<_>>().join(" "));
        line("search.a", self.search_counts[0].to_string());
        line("search.b", self.search_counts[1].to_string());
        line("search.r", self.search_counts[2].to_string());
        line("recombine.merged", r.merged.to_string());
        line("recombine.bisected", r.bisected.to_string());
        line("recombine.resolved_a", r.resolved_a.to_string());
        line("recombine.resolved_b", r.resolved_b.to_string());
        line("recombine.resolved_empty", r.resolved_empty.to_string());
        line("recombine.principal_checks", r.principal_checks.to_string());
        line("recombine.overlap_checks", r.overlap_checks.to_string());
        line("final.a", self.final_counts[0].to_string());
        line("final.b", self.final_counts[1].to_string());
        line("final.r", self.final_counts[2].to_string());
        out
    }

    pub fn timings_text(&self) -> String {
        let mut out = String::new();
        for (phase, t) in &self.timings {
            writeln!(out, "{phase} = {:.3} s", t.as_secs_f64()).unwrap();
        }
        out
    }
}
