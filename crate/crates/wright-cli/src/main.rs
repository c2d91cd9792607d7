//! `wright`: batch front end for cover construction, search, recombination and reporting.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wright_sops::functional::{CenterPoint, tail_bounds};
use wright_sops::krawczyk::{build_preconditioner, krawczyk_outer};
use wright_sops::oracle;
use wright_sops::pipeline::{PLOT_HEADER, RunConfig, plot_csv, provenance_label, run_cover, run_pipeline};
use wright_sops::prune::prune;
use wright_sops::search::{
    Checkpoint, SearchOutcome, SearchState, SearchStats, Status, interval_union, recombine_with_workers, run_search,
};
use wright_sops::seed_cover::{fixture_envelopes, write_envelopes};
use wright_sops::sequence::{Cube, CubeCollection, read_cubes, write_cubes};

use config::{RunArgs, fixture_params, resolve};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] wright_sops::Error),
    #[error("recombination failed: {0}")]
    Failure(String),
    #[error("{0} sampled oracle solutions are not covered")]
    Lost(usize),
}

#[derive(Parser, Debug)]
#[command(name = "wright", version, about = "Enclose and verify periodic solutions of Wright's equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the initial cube cover from envelopes, a fixture, or a cube file.
    Cover {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run branch-and-bound on the cover and write the A, B and R lists.
    Search {
        #[command(flatten)]
        run: RunArgs,
        /// Directory for periodic checkpoints.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Generations between checkpoints.
        #[arg(long, default_value_t = 5)]
        every: usize,
        /// Resume from a checkpoint directory instead of building a cover.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Resolve R and cross-check uniqueness for the lists written by `search`.
    Recombine {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run cover, search and recombination and write the full report.
    Verify {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Prune every cube of a cube file once and show the Krawczyk test details.
    Krawczyk {
        /// Cube file.
        file: PathBuf,
    },
    /// Solve for one branch solution, or write fixture envelopes.
    Oracle {
        #[command(flatten)]
        run: RunArgs,
        /// Print the solution at this parameter value.
        #[arg(long)]
        at: Option<f64>,
        /// Write fixture envelopes over the configured parameter range to this file.
        #[arg(long)]
        write_envelopes: Option<PathBuf>,
    },
    /// Summarize an output directory and regenerate its plot data.
    Report {
        /// Output directory of `verify`, `search` or `recombine`.
        dir: PathBuf,
        /// Check this many oracle solutions at random parameter values for containment.
        #[arg(long, default_value_t = 0)]
        check_oracle: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn out_dir(cfg: &RunConfig) -> PathBuf {
    cfg.output.clone().unwrap_or_else(|| PathBuf::from("wright-out"))
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Config(format!("{}: {e}", dir.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn fmt_union(cubes: &[Cube]) -> String {
    interval_union(cubes.iter().map(|c| c.alpha)).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn cover(run: &RunArgs) -> Result<(), CliError> {
    let cfg = resolve(run)?;
    let phase = run_cover(&cfg)?;
    let dir = out_dir(&cfg);
    ensure_dir(&dir)?;
    write_cubes(&dir.join("cover.cubes"), phase.cubes.cubes())?;
    write_text(&dir.join("plot_cover.csv"), &plot_csv(&[("S", phase.cubes.cubes())]))?;
    println!("n_bf = {}", phase.bounding_functions);
    println!("n_grid_pruned = {}", phase.after_prune);
    println!("n_grid = {}", phase.cubes.len());
    println!("low_amplitude = {}", phase.low_amplitude);
    println!("inconsistent = {}", phase.inconsistent);
    println!("provenance = {}", provenance_label(phase.provenance));
    Ok(())
}

fn print_stats(s: &SearchStats) {
    println!("popped = {}", s.popped);
    println!("prune_calls = {}", s.prune_calls);
    println!("splits = {}", s.splits);
    println!("discarded = {}", s.discarded);
    println!("faults = {}", s.faults);
    println!("flags = {:?}", s.flags);
    println!("wall = {:.3} s", s.wall.as_secs_f64());
}

fn search(run: &RunArgs, checkpoint: Option<PathBuf>, every: usize, resume: Option<PathBuf>) -> Result<(), CliError> {
    let cfg = resolve(run)?;
    let state = match &resume {
        Some(dir) => SearchState::load(dir)?,
        None => SearchState::new(run_cover(&cfg)?.cubes.into_cubes()),
    };
    let cp = checkpoint.map(|dir| Checkpoint { dir, every });
    let out = run_search(state, &cfg.search, cp.as_ref())?;
    let dir = out_dir(&cfg);
    ensure_dir(&dir)?;
    for (name, list) in [("search_a", &out.a), ("search_b", &out.b), ("search_r", &out.r)] {
        write_cubes(&dir.join(format!("{name}.cubes")), list.cubes())?;
    }
    write_text(
        &dir.join("plot_search.csv"),
        &plot_csv(&[("A", out.a.cubes()), ("B", out.b.cubes()), ("R", out.r.cubes())]),
    )?;
    println!("a = {}", out.a.len());
    println!("b = {}", out.b.len());
    println!("r = {}", out.r.len());
    print_stats(&out.stats);
    Ok(())
}

fn read_list(dir: &Path, name: &str) -> Result<CubeCollection, CliError> {
    Ok(CubeCollection::from_cubes(read_cubes(&dir.join(format!("{name}.cubes")))?)?)
}

fn recombine_verb(run: &RunArgs) -> Result<(), CliError> {
    let cfg = resolve(run)?;
    let dir = out_dir(&cfg);
    let out = SearchOutcome {
        a: read_list(&dir, "search_a")?,
        b: read_list(&dir, "search_b")?,
        r: read_list(&dir, "search_r")?,
        stats: SearchStats::default(),
    };
    let rec = recombine_with_workers(&out, cfg.search.n_recombine, cfg.search.worker_count)?;
    for (name, list) in [("final_a", &rec.a), ("final_b", &rec.b), ("final_r", &rec.r)] {
        write_cubes(&dir.join(format!("{name}.cubes")), list.cubes())?;
    }
    write_text(
        &dir.join("plot_final.csv"),
        &plot_csv(&[("A", rec.a.cubes()), ("B", rec.b.cubes()), ("R", rec.r.cubes())]),
    )?;
    println!("status = {}", rec.status.tag());
    println!("alpha_a = {}", rec.alpha_a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
    println!("alpha_b = {}", rec.alpha_b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
    match rec.status {
        Status::Success => Ok(()),
        Status::Failure => Err(CliError::Failure(rec.failure.unwrap_or_default())),
    }
}

fn verify(run: &RunArgs) -> Result<(), CliError> {
    let mut cfg = resolve(run)?;
    cfg.output = Some(out_dir(&cfg));
    let report = run_pipeline(&cfg)?;
    print!("{}", report.to_text());
    print!("{}", report.timings_text());
    match report.status {
        Status::Success => Ok(()),
        Status::Failure => Err(CliError::Failure(report.failure.unwrap_or_default())),
    }
}

fn krawczyk(file: &Path) -> Result<(), CliError> {
    for (i, x) in read_cubes(file)?.iter().enumerate() {
        let res = prune(x)?;
        let center = CenterPoint::of_cube(x);
        let detail = tail_bounds(x, &center)
            .and_then(|t| Ok((build_preconditioner(&center, x.decay_s)?, t)))
            .and_then(|(p, t)| krawczyk_outer(x, &center, &p, &t));
        match detail {
            Ok(k) => println!(
                "cube {i}: flag {} ({:?}), verdict {:?}, tail radius {:.6e}, C0 {:.6e}",
                res.flag.code(),
                res.step,
                k.verdict,
                k.tail_radius,
                x.tail_c0
            ),
            Err(e) => println!("cube {i}: flag {} ({:?}), no Krawczyk image: {e}", res.flag.code(), res.step),
        }
    }
    Ok(())
}

fn oracle_verb(run: &RunArgs, at: Option<f64>, envelopes: Option<PathBuf>) -> Result<(), CliError> {
    let cfg = resolve(run)?;
    if let Some(alpha) = at {
        let x = oracle::solve(alpha, cfg.modes)?;
        println!("alpha = {alpha:?}");
        println!("omega = {:?}", x.omega);
        println!("residual = {:e}", oracle::residual_norm(&x));
        for (k, c) in x.coeffs.iter().enumerate() {
            println!("c{} = {:?} {:?}", k + 1, c.re, c.im);
        }
    }
    if let Some(path) = &envelopes {
        let sets = fixture_envelopes(&fixture_params(&cfg))?;
        write_envelopes(path, &sets)?;
        println!("wrote {} fixture envelope sets to {}", sets.len(), path.display());
    }
    if at.is_none() && envelopes.is_none() {
        return Err(CliError::Config("oracle needs --at or --write-envelopes".into()));
    }
    Ok(())
}

fn report(dir: &Path, check: usize, seed: u64) -> Result<(), CliError> {
    let prefix = if dir.join("final_a.cubes").exists() { "final" } else { "search" };
    let a = read_list(dir, &format!("{prefix}_a"))?;
    let b = read_list(dir, &format!("{prefix}_b"))?;
    let r = read_list(dir, &format!("{prefix}_r"))?;
    let csv = plot_csv(&[("A", a.cubes()), ("B", b.cubes()), ("R", r.cubes())]);
    write_text(&dir.join(format!("plot_{prefix}.csv")), &csv)?;
    println!("lists = {prefix}");
    println!("a = {}", a.len());
    println!("b = {}", b.len());
    println!("r = {}", r.len());
    println!("alpha_a = {}", fmt_union(a.cubes()));
    println!("alpha_b = {}", fmt_union(b.cubes()));
    println!("plot = {} ({})", dir.join(format!("plot_{prefix}.csv")).display(), PLOT_HEADER);
    if check == 0 {
        return Ok(());
    }
    let all: Vec<&Cube> = a.iter().chain(b.iter()).chain(r.iter()).collect();
    let Some(first) = all.first() else {
        return Err(CliError::Lost(check));
    };
    let span = all.iter().fold(first.alpha, |s, c| s.hull(c.alpha));
    let modes = first.m().max(24);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lost = 0;
    for _ in 0..check {
        let alpha = rng.gen_range(span.lo()..=span.hi());
        let x = oracle::solve(alpha, modes)?;
        if !all.iter().any(|c| c.contains_point(alpha, x.omega, &x.coeffs)) {
            lost += 1;
            println!("not covered: alpha = {alpha:?}");
        }
    }
    println!("oracle_checked = {check}");
    println!("oracle_lost = {lost}");
    if lost > 0 { Err(CliError::Lost(lost)) } else { Ok(()) }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Cover { run } => cover(&run),
        Command::Search { run, checkpoint, every, resume } => search(&run, checkpoint, every, resume),
        Command::Recombine { run } => recombine_verb(&run),
        Command::Verify { run } => verify(&run),
        Command::Krawczyk { file } => krawczyk(&file),
        Command::Oracle { run, at, write_envelopes } => oracle_verb(&run, at, write_envelopes),
        Command::Report { dir, check_oracle, seed } => report(&dir, check_oracle, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ (CliError::Failure(_) | CliError::Lost(_))) => {
            eprintln!("wright: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("wright: {e}");
            ExitCode::FAILURE
        }
    }
}
