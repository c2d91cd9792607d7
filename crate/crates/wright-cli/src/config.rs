//! Layered run configuration: built-in defaults, then a TOML file, then flags.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;
use wright_sops::Interval;
use wright_sops::pipeline::{CoverSource, RunConfig};
use wright_sops::seed_cover::{FixtureParams, Provenance};

use crate::CliError;

#[derive(Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub alpha: Option<[f64; 2]>,
    pub modes: Option<usize>,
    pub max_order: Option<usize>,
    pub decay_s: Option<f64>,
    pub grid_n: Option<usize>,
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub search: SearchSection,
    #[serde(default)]
    pub input: InputSection,
    #[serde(default)]
    pub fixture: FixtureSection,
}

#[derive(Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SearchSection {
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub max_dim: Option<usize>,
    pub weights: Option<Vec<f64>>,
    pub n_recombine: Option<usize>,
    pub workers: Option<usize>,
}

#[derive(Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct InputSection {
    pub envelopes: Option<Vec<PathBuf>>,
    pub cubes: Option<PathBuf>,
    pub provenance: Option<String>,
}

#[derive(Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FixtureSection {
    pub pieces: Option<usize>,
    pub samples: Option<usize>,
    pub n_time: Option<usize>,
    pub margin: Option<f64>,
    pub period_margin: Option<f64>,
    pub oracle_modes: Option<usize>,
}

/// Flags shared by every verb that runs part of the pipeline.
#[derive(Args, Debug, Default, Clone)]
pub struct RunArgs {
    /// TOML configuration file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub alpha_lo: Option<f64>,
    #[arg(long)]
    pub alpha_hi: Option<f64>,
    /// Explicit Fourier modes M.
    #[arg(long)]
    pub modes: Option<usize>,
    /// Highest envelope derivative order S.
    #[arg(long)]
    pub max_order: Option<usize>,
    /// Tail decay rate s of the search cubes.
    #[arg(long)]
    pub decay_s: Option<f64>,
    /// Cover grid size N.
    #[arg(long)]
    pub grid_n: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Highest split dimension d.
    #[arg(long)]
    pub max_dim: Option<usize>,
    /// Comma-separated split weights, one per dimension 0..=d.
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<f64>>,
    /// Prune iterations per cube during recombination.
    #[arg(long)]
    pub n_recombine: Option<usize>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Envelope files; repeat the flag for several files.
    #[arg(long)]
    pub envelopes: Vec<PathBuf>,
    /// Cube file to use as the cover instead of envelopes.
    #[arg(long)]
    pub cubes: Option<PathBuf>,
    /// Declared provenance of a cube file: rigorous or fixture.
    #[arg(long)]
    pub provenance: Option<String>,
    #[arg(long)]
    pub fixture_pieces: Option<usize>,
    #[arg(long)]
    pub fixture_n_time: Option<usize>,
    #[arg(long)]
    pub fixture_margin: Option<f64>,
    /// Output directory.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn parse_provenance(text: &str) -> Result<Provenance, CliError> {
    Provenance::parse(&text.to_ascii_uppercase())
        .ok_or_else(|| CliError::Config(format!("provenance must be rigorous or fixture, got {text:?}")))
}

pub fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn default_weights(max_dim: usize) -> Vec<f64> {
    let mut w = vec![1.0; max_dim + 1];
    w[0] = 8.0;
    w
}

/// Resolves defaults, the optional file and the flags into one configuration.
pub fn resolve(args: &RunArgs) -> Result<RunConfig, CliError> {
    let file = match &args.config {
        Some(p) => read_file(p)?,
        None => FileConfig::default(),
    };
    let mut cfg = RunConfig::default();
    let alpha = file.alpha.unwrap_or([cfg.alpha.lo(), cfg.alpha.hi()]);
    let (lo, hi) = (args.alpha_lo.unwrap_or(alpha[0]), args.alpha_hi.unwrap_or(alpha[1]));
    cfg.alpha = Interval::new(lo, hi).map_err(|e| CliError::Config(format!("alpha: {e}")))?;
    cfg.modes = args.modes.or(file.modes).unwrap_or(cfg.modes);
    cfg.max_order = args.max_order.or(file.max_order).unwrap_or(cfg.max_order);
    cfg.decay_s = args.decay_s.or(file.decay_s).unwrap_or(cfg.max_order as f64);
    cfg.grid_n = args.grid_n.or(file.grid_n).unwrap_or(cfg.grid_n);
    cfg.output = args.output.clone().or(file.output);

    let s = &file.search;
    let p = &mut cfg.search;
    p.epsilon = args.epsilon.or(s.epsilon).unwrap_or(p.epsilon);
    p.delta = args.delta.or(s.delta).unwrap_or(p.delta);
    p.max_dim = args.max_dim.or(s.max_dim).unwrap_or(p.max_dim);
    p.weights = args.weights.clone().or(s.weights.clone()).unwrap_or_else(|| default_weights(p.max_dim));
    p.n_recombine = args.n_recombine.or(s.n_recombine).unwrap_or(p.n_recombine);
    p.worker_count = args.workers.or(s.workers).unwrap_or(p.worker_count);

    let envelopes = if args.envelopes.is_empty() {
        file.input.envelopes.clone().unwrap_or_default()
    } else {
        args.envelopes.clone()
    };
    let cubes = args.cubes.clone().or(file.input.cubes.clone());
    let provenance = match args.provenance.as_deref().or(file.input.provenance.as_deref()) {
        Some(t) => parse_provenance(t)?,
        None => Provenance::Fixture,
    };
    cfg.source = match (envelopes.is_empty(), cubes) {
        (false, Some(_)) => return Err(CliError::Config("give either envelope files or a cube file, not both".into())),
        (false, None) => CoverSource::Envelopes(envelopes),
        (true, Some(path)) => CoverSource::Cubes { path, provenance },
        (true, None) => {
            let f = &file.fixture;
            let d = FixtureParams::default();
            CoverSource::Fixture(FixtureParams {
                alpha: cfg.alpha,
                pieces: args.fixture_pieces.or(f.pieces).unwrap_or(d.pieces),
                samples: f.samples.unwrap_or(d.samples),
                n_time: args.fixture_n_time.or(f.n_time).unwrap_or(d.n_time),
                max_order: cfg.max_order,
                margin: args.fixture_margin.or(f.margin).unwrap_or(d.margin),
                period_margin: f.period_margin.unwrap_or(d.period_margin),
                modes: f.oracle_modes.unwrap_or(d.modes),
            })
        }
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Fixture parameters of a resolved configuration, or the defaults over its range.
pub fn fixture_params(cfg: &RunConfig) -> FixtureParams {
    match &cfg.source {
        CoverSource::Fixture(f) => f.clone(),
        _ => FixtureParams { alpha: cfg.alpha, max_order: cfg.max_order, ..FixtureParams::default() },
    }
}
