use std::path::PathBuf;

use clap::Args;
use fecam_core::data::prepare;
use fecam_core::fecam::{export_attention, AttentionMap};
use fecam_core::forecaster::ForecastModel;
use fecam_core::nncore::Checkpoint;
use serde::Serialize;

use crate::data_args::DataArgs;
use crate::outcome::{Failure, OrUsage};
use crate::output::OutputDir;
use crate::CmdResult;

#[derive(Debug, Clone, Args, Serialize)]
pub struct AttentionArgs {
    /// Checkpoint written by `fecam train`.
    #[arg(long)]
    pub checkpoint: PathBuf,
    #[command(flatten)]
    pub data: DataArgs,
    /// Horizon used when preparing windows; defaults to the checkpoint's.
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long, default_value_t = 256)]
    pub batch_size: usize,
}

pub fn run(args: &AttentionArgs, out: &OutputDir) -> CmdResult {
    if !args.checkpoint.is_file() {
        return Err(Failure::usage(format!("checkpoint {} does not exist", args.checkpoint.display())));
    }
    let ckpt = Checkpoint::load(&args.checkpoint).or_usage("loading checkpoint")?;
    let model = ForecastModel::from_checkpoint(&ckpt).or_usage("rebuilding model from checkpoint")?;
    let Some(layer) = &model.fecam else {
        return Err(Failure::usage("checkpoint has no FECAM layer (projection-only model)"));
    };
    let series = args.data.load()?;
    if let Some(expected) = ckpt.metadata.get("channels") {
        if expected != &series.channels().to_string() {
            return Err(Failure::usage(format!(
                "checkpoint was trained on {expected} channels, data has {}",
                series.channels()
            )));
        }
    }
    let horizon = args.horizon.unwrap_or(model.horizon());
    let prepared = prepare(&series, args.data.ratios()?, model.lookback(), horizon).or_usage("preparing data")?;
    if args.batch_size == 0 {
        return Err(Failure::usage("--batch-size must be positive"));
    }
    out.create(args)?;

    let test = &prepared.test;
    let indices: Vec<usize> = (0..test.len()).collect();
    let maps = indices
        .chunks(args.batch_size)
        .map(|chunk| layer.forward(&test.inputs(chunk)).map(|(_, att)| att))
        .collect::<Result<Vec<AttentionMap>, _>>()
        .or_usage("running FECAM")?;
    let att = AttentionMap::concat(&maps).or_usage("collecting attention")?;
    export_attention(&att, &out.path("attention.csv")).or_usage("writing attention.csv")?;
    let s = att.shape();
    println!(
        "attention heatmap: {} frequencies x {} channels, averaged over {} test windows",
        s.length, s.channels, s.batch
    );
    Ok(())
}
