use std::collections::HashMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use qdouble::experiments::{
    run_distinguishability, run_error_suppression, run_fusion_stats, run_ground_state_check, run_hadamard_stats,
    DistinguishConfig, FusionConfig, GroundStateConfig, HadamardConfig, SuppressionConfig,
};
use qdouble::{Boundary, EncodingKind, ErrorOp, Execution, ExperimentReport};

/// Seeded experiments on the D(S3) quantum double.
#[derive(Parser, Debug)]
#[command(name = "qdouble", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cross-fuse two independent Φ pairs and tally the channels.
    FusionStats(Args),
    /// Logical failure rate of a noisy memory against separation.
    Suppression(Args),
    /// Guess a random logical bit with local and non-local readouts.
    Distinguish(Args),
    /// Repeat-until-success Hadamard on random inputs.
    Hadamard(Args),
    /// Build the ground state and check its stabilizers and energy.
    GroundStateCheck(Args),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args, Debug)]
struct Args {
    /// Lattice rows (ground-state-check).
    #[arg(long)]
    rows: Option<usize>,
    /// Lattice columns (ground-state-check).
    #[arg(long)]
    cols: Option<usize>,
    /// `open` or `periodic` (ground-state-check).
    #[arg(long)]
    boundary: Option<Boundary>,
    /// `lambda`, `phipair` or `strong`.
    #[arg(long)]
    encoding: Option<EncodingKind>,
    /// Separations, comma separated (suppression).
    #[arg(long, value_delimiter = ',')]
    l: Vec<usize>,
    /// Per-spin error probability (suppression).
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Noise steps per trial (suppression).
    #[arg(long)]
    steps: Option<usize>,
    /// Error set, e.g. `signflip,left:c,phase` (suppression).
    #[arg(long, value_delimiter = ',')]
    errors: Vec<ErrorOp>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Plain-text `key=value` defaults; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Record wall time in the report.
    #[arg(long)]
    timing: bool,
    /// Run trials on the current thread only.
    #[arg(long)]
    sequential: bool,
}

fn parse_config(path: &Path) -> Result<HashMap<String, String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut map = HashMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("{}:{}: expected key=value", path.display(), n + 1);
        };
        map.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(map)
}

struct Settings {
    file: HashMap<String, String>,
}

impl Settings {
    fn value<T>(&self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.file.get(key) {
            Some(s) => s.parse().map_err(|e| anyhow::anyhow!("config key `{key}`: {e}")),
            None => Ok(default),
        }
    }

    fn list<T>(&self, key: &str, flag: Vec<T>, default: Vec<T>) -> Result<Vec<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        if !flag.is_empty() {
            return Ok(flag);
        }
        match self.file.get(key) {
            Some(s) => s
                .split(',')
                .map(|x| x.trim().parse().map_err(|e| anyhow::anyhow!("config key `{key}`: {e}")))
                .collect(),
            None => Ok(default),
        }
    }

    fn format(&self, flag: Option<Format>) -> Result<Format> {
        if let Some(f) = flag {
            return Ok(f);
        }
        match self.file.get("format") {
            Some(s) => Format::from_str(s, true).map_err(|e| anyhow::anyhow!("config key `format`: {e}")),
            None => Ok(Format::Json),
        }
    }
}

fn run(command: Command) -> Result<()> {
    let (name, args) = match &command {
        Command::FusionStats(a) => ("fusion-stats", a),
        Command::Suppression(a) => ("suppression", a),
        Command::Distinguish(a) => ("distinguish", a),
        Command::Hadamard(a) => ("hadamard", a),
        Command::GroundStateCheck(a) => ("ground-state-check", a),
    };
    let file = match &args.config {
        Some(path) => parse_config(path)?,
        None => HashMap::new(),
    };
    let cfg = Settings { file };
    let seed = cfg.value("seed", args.seed, 0u64)?;
    let exec = if args.sequential || cfg.value("sequential", None, false)? { Execution::Sequential } else { Execution::default() };
    let format = cfg.format(args.format)?;

    let start = Instant::now();
    let mut report: ExperimentReport = match name {
        "fusion-stats" => {
            let config = FusionConfig { trials: cfg.value("trials", args.trials, 10_000)? };
            run_fusion_stats(&config, seed, exec)?
        }
        "suppression" => {
            let config = SuppressionConfig {
                ls: cfg.list("l", args.l.clone(), vec![1, 2, 3])?,
                p: cfg.value("p", args.p, 0.05)?,
                trials: cfg.value("trials", args.trials, 1000)?,
                steps: cfg.value("steps", args.steps, 1)?,
                encoding: cfg.value("encoding", args.encoding, EncodingKind::PhiPair)?,
                errors: cfg.list("errors", args.errors.clone(), vec![ErrorOp::SignFlip])?,
            };
            run_error_suppression(&config, seed, exec)?
        }
        "distinguish" => {
            let config = DistinguishConfig {
                encoding: cfg.value("encoding", args.encoding, EncodingKind::Strong)?,
                trials: cfg.value("trials", args.trials, 10_000)?,
            };
            run_distinguishability(&config, seed, exec)?
        }
        "hadamard" => {
            let config = HadamardConfig {
                trials: cfg.value("trials", args.trials, 10_000)?,
                encoding: cfg.value("encoding", args.encoding, EncodingKind::LambdaOnly)?,
            };
            run_hadamard_stats(&config, seed, exec)?
        }
        _ => {
            let config = GroundStateConfig {
                rows: cfg.value("rows", args.rows, 2)?,
                cols: cfg.value("cols", args.cols, 2)?,
                boundary: cfg.value("boundary", args.boundary, Boundary::Open)?,
            };
            run_ground_state_check(&config, seed)?
        }
    };
    if args.timing || cfg.value("timing", None, false)? {
        report.wall_ms = start.elapsed().as_millis() as u64;
    }

    let text = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    match &args.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> Result<()> {
    run(Cli::parse().command)
}
