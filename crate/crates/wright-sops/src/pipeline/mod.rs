//! Run configuration and the cover, search and recombine pipeline.

mod report;

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

pub use report::{PLOT_HEADER, RunReport, plot_csv, provenance_label};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::search::{Recombination, SearchOutcome, SearchParams, branch_and_bound, recombine_with_workers};
use crate::seed_cover::{FixtureParams, Provenance, build_cover, fixture_envelopes, read_envelopes};
use crate::sequence::{Cube, CubeCollection, read_cubes, write_cubes};

/// Where the initial cover comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum CoverSource {
    /// Envelope files; the cover is built from them.
    Envelopes(Vec<PathBuf>),
    /// Envelopes generated around the oracle branch. Its parameter range and
    /// derivative order are taken from the run configuration.
    Fixture(FixtureParams),
    /// A cube file used as the cover directly, with the provenance it is declared to have.
    Cubes { path: PathBuf, provenance: Provenance },
    /// Cubes already in memory.
    Prebuilt { cubes: CubeCollection, provenance: Provenance },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub alpha: Interval,
    /// Fourier modes `M` kept explicitly.
    pub modes: usize,
    /// Highest derivative order `S` of the envelopes.
    pub max_order: usize,
    /// Tail decay rate of the search cubes; at most `max_order`.
    pub decay_s: f64,
    /// Grid size `N` of the cover on the `(omega, a_1)` plane.
    pub grid_n: usize,
    pub search: SearchParams,
    pub source: CoverSource,
    /// Directory for cube dumps, plots and the report; nothing is written when `None`.
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let alpha = Interval::spanning(1.88, 1.89);
        RunConfig {
            alpha,
            modes: 10,
            max_order: 3,
            decay_s: 3.0,
            grid_n: 15,
            search: SearchParams::default(),
            source: CoverSource::Fixture(FixtureParams { alpha, ..FixtureParams::default() }),
            output: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Argument(msg));
        if self.alpha.is_empty() || !(self.alpha.lo() > 0.0) {
            return bad(format!("alpha interval must be positive, got {}", self.alpha));
        }
        if self.modes < 5 {
            return bad(format!("need M >= 5, got {}", self.modes));
        }
        if !(self.decay_s > 2.0) || self.decay_s > self.max_order as f64 {
            return bad(format!("decay rate must lie in (2, S = {}], got {}", self.max_order, self.decay_s));
        }
        if self.grid_n == 0 {
            return bad("grid size must be positive".into());
        }
        self.search.validate(self.modes)
    }
}

/// The initial cover and its counts.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverPhase {
    pub cubes: CubeCollection,
    /// Bounding-function sets read or generated.
    pub bounding_functions: usize,
    /// Cubes that survived the first prune, before grid hulling.
    pub after_prune: usize,
    pub low_amplitude: usize,
    pub inconsistent: usize,
    pub provenance: Provenance,
}

fn relax_decay(cubes: CubeCollection, s: f64) -> Result<CubeCollection> {
    // |c_k| <= C0 / k^S implies |c_k| <= C0 / k^s for every s <= S.
    CubeCollection::from_cubes(
        cubes
            .into_cubes()
            .into_iter()
            .map(|mut c| {
                c.decay_s = c.decay_s.min(s);
                c
            })
            .collect(),
    )
}

/// Builds or loads the initial cover.
pub fn run_cover(cfg: &RunConfig) -> Result<CoverPhase> {
    let envelopes = match &cfg.source {
        CoverSource::Envelopes(paths) => {
            let mut sets = Vec::new();
            for p in paths {
                sets.extend(read_envelopes(p)?);
            }
            sets
        }
        CoverSource::Fixture(fp) => {
            let fp = FixtureParams { alpha: cfg.alpha, max_order: cfg.max_order, ..fp.clone() };
            fixture_envelopes(&fp)?
        }
        CoverSource::Cubes { path, provenance } => {
            return Ok(loaded(CubeCollection::from_cubes(read_cubes(path)?)?, *provenance));
        }
        CoverSource::Prebuilt { cubes, provenance } => return Ok(loaded(cubes.clone(), *provenance)),
    };
    let out = build_cover(cfg.alpha, cfg.modes, cfg.max_order, cfg.grid_n, &envelopes)?;
    Ok(CoverPhase {
        cubes: relax_decay(out.cubes, cfg.decay_s)?,
        bounding_functions: out.envelopes,
        after_prune: out.after_prune,
        low_amplitude: out.low_amplitude,
        inconsistent: out.inconsistent.len(),
        provenance: out.provenance,
    })
}

fn loaded(cubes: CubeCollection, provenance: Provenance) -> CoverPhase {
    let n = cubes.len();
    CoverPhase { cubes, bounding_functions: n, after_prune: n, low_amplitude: 0, inconsistent: 0, provenance }
}

/// Everything a full run produces.
#[derive(Clone, Debug, PartialEq)]
pub struct RunArtifacts {
    pub report: RunReport,
    pub cover: CoverPhase,
    pub search: SearchOutcome,
    pub recombination: Recombination,
}

/// Runs cover, search and recombination, writing outputs when configured.
pub fn run_pipeline(cfg: &RunConfig) -> Result<RunReport> {
    Ok(run_pipeline_artifacts(cfg)?.report)
}

pub fn run_pipeline_artifacts(cfg: &RunConfig) -> Result<RunArtifacts> {
    cfg.validate()?;
    let total = Instant::now();
    let mut timings: Vec<(String, Duration)> = Vec::new();

    let t = Instant::now();
    let cover = run_cover(cfg)?;
    timings.push(("cover".into(), t.elapsed()));

    let t = Instant::now();
    let search = branch_and_bound(&cover.cubes, &cfg.search)?;
    timings.push(("search".into(), t.elapsed()));

    let t = Instant::now();
    let recombination = recombine_with_workers(&search, cfg.search.n_recombine, cfg.search.worker_count)?;
    timings.push(("recombine".into(), t.elapsed()));
    timings.push(("total".into(), total.elapsed()));

    let report = RunReport::new(cfg, &cover, &search, &recombination, timings);
    if let Some(dir) = &cfg.output {
        write_outputs(dir, &report, &cover, &search, &recombination)?;
    }
    Ok(RunArtifacts { report, cover, search, recombination })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes the report, timings, per-phase cube dumps and plot data into `dir`.
pub fn write_outputs(
    dir: &Path,
    report: &RunReport,
    cover: &CoverPhase,
    search: &SearchOutcome,
    rec: &Recombination,
) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_text(&dir.join("report.txt"), &report.to_text())?;
    write_text(&dir.join("timings.txt"), &report.timings_text())?;
    let dumps: [(&str, &[Cube]); 7] = [
        ("cover", cover.cubes.cubes()),
        ("search_a", search.a.cubes()),
        ("search_b", search.b.cubes()),
        ("search_r", search.r.cubes()),
        ("final_a", rec.a.cubes()),
        ("final_b", rec.b.cubes()),
        ("final_r", rec.r.cubes()),
    ];
    for (name, cubes) in dumps {
        write_cubes(&dir.join(format!("{name}.cubes")), cubes)?;
    }
    write_text(&dir.join("plot_cover.csv"), &plot_csv(&[("S", cover.cubes.cubes())]))?;
    write_text(
        &dir.join("plot_search.csv"),
        &plot_csv(&[("A", search.a.cubes()), ("B", search.b.cubes()), ("R", search.r.cubes())]),
    )?;
    write_text(
        &dir.join("plot_final.csv"),
        &plot_csv(&[("A", rec.a.cubes()), ("B", rec.b.cubes()), ("R", rec.r.cubes())]),
    )
}
