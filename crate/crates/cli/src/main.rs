//! `fecam` command-line front end. Every command writes plain CSV/JSON into
//! the output directory together with `config.json` and `manifest.json`.

mod attention;
mod data_args;
mod experiments;
mod outcome;
mod output;
mod theorems;
mod train;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use outcome::Failure;
use output::OutputDir;

#[derive(Debug, Parser)]
#[command(name = "fecam", version, about = "FECAM forecasting and spectral experiments")]
struct Cli {
    /// Output directory.
    #[arg(long, global = true, env = "FECAM_OUT", default_value = "out")]
    out: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train and evaluate a forecaster (optionally with the projection-only ablation).
    Train(train::TrainArgs),
    /// Gibbs overshoot of truncated Fourier series.
    Gibbs(experiments::GibbsArgs),
    /// DCT vs DFT reconstruction error under truncation.
    Compaction(experiments::CompactionArgs),
    /// Export the batch-averaged attention heatmap of a trained checkpoint.
    Attention(attention::AttentionArgs),
    /// Randomized checks of the DCT identities.
    Theorems(theorems::TheoremArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let out = OutputDir::new(cli.out.clone());
    let result = match &cli.command {
        Command::Train(args) => train::run(args, &out),
        Command::Gibbs(args) => experiments::run_gibbs(args, &out),
        Command::Compaction(args) => experiments::run_compaction(args, &out),
        Command::Attention(args) => attention::run(args, &out),
        Command::Theorems(args) => theorems::run(args, &out),
    };
    let code = match &result {
        Ok(()) => 0,
        Err(f) => f.code(),
    };
    if out.is_created() {
        if let Err(e) = out.write_manifest(&cli.command, started.elapsed(), &result) {
            eprintln!("error: could not write manifest: {e:#}");
        }
    }
    if let Err(f) = result {
        eprintln!("error: {}", f.message());
    }
    ExitCode::from(code)
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Train(_) => "train",
            Command::Gibbs(_) => "gibbs",
            Command::Compaction(_) => "compaction",
            Command::Attention(_) => "attention",
            Command::Theorems(_) => "theorems",
        }
    }

    fn config_json(&self) -> serde_json::Value {
        let v = match self {
            Command::Train(a) => serde_json::to_value(a),
            Command::Gibbs(a) => serde_json::to_value(a),
            Command::Compaction(a) => serde_json::to_value(a),
            Command::Attention(a) => serde_json::to_value(a),
            Command::Theorems(a) => serde_json::to_value(a),
        };
        v.unwrap_or(serde_json::Value::Null)
    }

    fn seed(&self) -> Option<u64> {
        match self {
            Command::Train(a) => Some(a.hyper.seed),
            Command::Theorems(a) => Some(a.seed),
            Command::Attention(a) => a.data.synth_seed_if_synthetic(),
            Command::Gibbs(_) | Command::Compaction(_) => None,
        }
    }
}

pub(crate) type CmdResult = Result<(), Failure>;
