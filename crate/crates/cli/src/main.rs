//! `dafr`: train, score and diagnose distribution-aware segmented
//! regression models from CSV files.
//!
//! Exit status is 0 on success, 2 for usage or input validation errors and 3
//! for pipeline failures. Errors go to stderr as
//! `dafr-error: <code>: <message>`. Set `DAFR_LOG=info` (or `debug`) for
//! progress logging.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dafr_core::{GeneratorKind, SynthConfig};

use crate::commands::Failure;
use crate::config::*;

#[derive(Parser)]
#[command(name = "dafr", version, about = "Distribution-aware segmented regression")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the baseline, three segment models and the router; write the model and decile profiles.
    Train(TrainArgs),
    /// Predict every row of a feature CSV with a saved model.
    Score(ScoreArgs),
    /// Compare baseline and routed predictions on a labelled CSV.
    Diagnose(DiagnoseArgs),
    /// Generate a synthetic dataset.
    Synth(SynthArgs),
    /// Train and evaluate on a held-out split over several seeds.
    Compare(CompareArgs),
    /// Rerun a command from an effective config file written by an earlier run.
    Replay {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct FitArgs {
    /// Target quantile at or below which rows are front.
    #[arg(long, default_value_t = 0.3)]
    q_front: f64,
    /// Target quantile above which rows are back.
    #[arg(long, default_value_t = 0.7)]
    q_back: f64,
    /// Neighbors consulted by the router.
    #[arg(long, default_value_t = 5)]
    k: usize,
    /// Ridge penalty for every fit (intercept unpenalized).
    #[arg(long, default_value_t = 0.0)]
    ridge: f64,
    /// Smallest segment size accepted; defaults to features + 2.
    #[arg(long)]
    min_segment_rows: Option<usize>,
    /// Number of equal-count bins in the error profiles.
    #[arg(long, default_value_t = 10)]
    bins: usize,
}

impl FitArgs {
    fn params(&self) -> FitParams {
        FitParams {
            q_front: self.q_front,
            q_back: self.q_back,
            k: self.k,
            ridge_lambda: self.ridge,
            min_segment_rows: self.min_segment_rows,
            bins: self.bins,
        }
    }
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    target: String,
    /// Comma-separated feature columns; all other numeric columns when omitted.
    #[arg(long, value_delimiter = ',')]
    features: Option<Vec<String>>,
    #[command(flatten)]
    fit: FitArgs,
    /// Hold out this fraction of rows and report metrics on it.
    #[arg(long)]
    test_fraction: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "model.json")]
    out: PathBuf,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Add the distance to the nearest reference row.
    #[arg(long)]
    trace: bool,
    #[arg(long, default_value = "predictions.csv")]
    out: PathBuf,
}

#[derive(Args)]
struct DiagnoseArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Target column; defaults to the one the model was trained on.
    #[arg(long)]
    target: Option<String>,
    #[arg(long, default_value_t = 10)]
    bins: usize,
    #[arg(long, default_value = "diagnose.json")]
    out: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    /// single_line, piecewise_three or hetero_tails.
    #[arg(long, default_value = "piecewise_three")]
    kind: GeneratorKind,
    #[arg(long, default_value_t = 2000)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    p: usize,
    #[arg(long, default_value_t = 1.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Corrupt the generated targets after generation.
    #[arg(long, value_enum)]
    inject: Option<InjectKind>,
    #[arg(long, default_value_t = 0.05)]
    inject_fraction: f64,
    /// Defaults to 4 for tail outliers and 1 for mid noise.
    #[arg(long)]
    inject_magnitude: Option<f64>,
    #[arg(long, default_value = "synth.csv")]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    /// Labelled CSV to split per seed; synthetic data is generated when omitted.
    #[arg(long, requires = "target")]
    data: Option<PathBuf>,
    #[arg(long)]
    target: Option<String>,
    #[arg(long, value_delimiter = ',')]
    features: Option<Vec<String>>,
    #[arg(long, default_value = "piecewise_three")]
    kind: GeneratorKind,
    #[arg(long, default_value_t = 2000)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    p: usize,
    #[arg(long, default_value_t = 1.0)]
    noise: f64,
    /// Run seeds 1..=N.
    #[arg(long, default_value_t = 20, conflicts_with = "seed")]
    seeds: u64,
    /// Explicit comma-separated seed list.
    #[arg(long, value_delimiter = ',')]
    seed: Option<Vec<u64>>,
    #[command(flatten)]
    fit: FitArgs,
    #[arg(long, default_value_t = 0.2)]
    test_fraction: f64,
    #[arg(long, default_value = "compare.csv")]
    out: PathBuf,
}

fn resolve(command: Command) -> Result<RunConfig, Failure> {
    Ok(match command {
        Command::Train(a) => RunConfig::Train(TrainRun {
            data: a.data,
            target: a.target,
            features: a.features,
            fit: a.fit.params(),
            test_fraction: a.test_fraction,
            seed: a.seed,
            out: a.out,
        }),
        Command::Score(a) => RunConfig::Score(ScoreRun {
            model: a.model,
            data: a.data,
            trace: a.trace,
            out: a.out,
        }),
        Command::Diagnose(a) => {
            let target = match a.target {
                Some(t) => t,
                None => dafr_core::DafrModel::load(&a.model)?.columns.target,
            };
            RunConfig::Diagnose(DiagnoseRun {
                model: a.model,
                data: a.data,
                target,
                bins: a.bins,
                out: a.out,
            })
        }
        Command::Synth(a) => RunConfig::Synth(SynthRun {
            generator: SynthConfig::new(a.kind, a.n, a.p, a.seed).with_noise(a.noise),
            inject: a.inject.map(|kind| Injection {
                kind,
                fraction: a.inject_fraction,
                magnitude: a.inject_magnitude.unwrap_or(match kind {
                    InjectKind::Tail => 4.0,
                    InjectKind::Mid => 1.0,
                }),
                seed: a.seed,
            }),
            out: a.out,
        }),
        Command::Compare(a) => RunConfig::Compare(CompareRun {
            source: match (a.data, a.target) {
                (Some(data), Some(target)) => CompareSource::File {
                    data,
                    target,
                    features: a.features,
                },
                _ => CompareSource::Synth {
                    kind: a.kind,
                    n: a.n,
                    p: a.p,
                    noise_sigma: a.noise,
                },
            },
            seeds: a.seed.unwrap_or_else(|| (1..=a.seeds).collect()),
            fit: a.fit.params(),
            test_fraction: a.test_fraction,
            out: a.out,
        }),
        Command::Replay { config } => RunConfig::load(&config)?,
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("DAFR_LOG", "warn")).init();
    let cli = Cli::parse();
    match resolve(cli.command).and_then(|config| commands::run(&config)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dafr-error: {}: {e}", e.code());
            ExitCode::from(e.exit_code())
        }
    }
}
