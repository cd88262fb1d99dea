use std::collections::BTreeMap;

use clap::Args;
use fecam_core::data::{prepare, PreparedData};
use fecam_core::forecaster::{
    evaluate, run_arm, write_loss_history, AblationReport, ArmResult, MetricsRecord, Persistence,
    TrainConfig,
};
use serde::Serialize;

use crate::data_args::DataArgs;
use crate::outcome::OrUsage;
use crate::output::OutputDir;
use crate::CmdResult;

/// Flags named after the `TrainConfig` fields.
#[derive(Debug, Clone, Args, Serialize)]
pub struct HyperArgs {
    #[arg(long, default_value_t = 96)]
    pub lookback: usize,
    #[arg(long, default_value_t = 96)]
    pub horizon: usize,
    #[arg(long, default_value_t = 2)]
    pub reduction: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub lr: f64,
    #[arg(long, default_value_t = 32)]
    pub batch_size: usize,
    #[arg(long, default_value_t = 10)]
    pub epochs: usize,
    #[arg(long, default_value_t = 2021)]
    pub seed: u64,
    #[arg(long, default_value_t = 3)]
    pub early_stop_patience: usize,
    #[arg(long, default_value_t = 0.5)]
    pub lr_decay: f64,
}

impl HyperArgs {
    pub fn config(&self) -> TrainConfig {
        TrainConfig {
            lookback: self.lookback,
            horizon: self.horizon,
            reduction: self.reduction,
            lr: self.lr,
            batch_size: self.batch_size,
            epochs: self.epochs,
            seed: self.seed,
            early_stop_patience: self.early_stop_patience,
            lr_decay: self.lr_decay,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub hyper: HyperArgs,
    /// Also train the projection-only model and report the MSE reduction.
    #[arg(long)]
    pub ablation: bool,
    /// Train the FECAM-free model only.
    #[arg(long, conflicts_with = "ablation")]
    pub no_fecam: bool,
}

pub fn run(args: &TrainArgs, out: &OutputDir) -> CmdResult {
    let cfg = args.hyper.config();
    cfg.validate()?;
    let series = args.data.load()?;
    let ratios = args.data.ratios()?;
    let prepared = prepare(&series, ratios, cfg.lookback, cfg.horizon).or_usage("preparing data")?;
    out.create(args)?;
    out.write_json("summary.json", &prepared.summary)?;

    let dataset = args.data.dataset_name();
    let persistence = evaluate(&Persistence { horizon: cfg.horizon }, &prepared.test, cfg.batch_size)?;
    let arms: &[bool] = match (args.ablation, args.no_fecam) {
        (true, _) => &[true, false],
        (false, true) => &[false],
        (false, false) => &[true],
    };
    let mut results = Vec::new();
    for &with_fecam in arms {
        let (mut model, arm) = run_arm(&prepared.train, Some(&prepared.val), &prepared.test, &cfg, with_fecam)?;
        let suffix = if args.ablation {
            if with_fecam { "_fecam" } else { "_plain" }
        } else {
            ""
        };
        let metrics = MetricsRecord::new(&dataset, &cfg, &arm.eval, &arm.training, with_fecam);
        out.write_json(&format!("metrics{suffix}.json"), &metrics)?;
        write_loss_history(&out.path(&format!("loss_history{suffix}.csv")), &arm.training.history)
            .or_usage("writing loss history")?;
        let ckpt = model.to_checkpoint(checkpoint_metadata(args, &prepared, &dataset));
        ckpt.save(&out.path(&format!("checkpoint{suffix}.json"))).or_usage("writing checkpoint")?;
        println!(
            "{:<18} test mse {:.6}  mae {:.6}  epochs {} (best {})",
            metrics.model, arm.eval.mse, arm.eval.mae, arm.training.epochs_run, arm.training.best_epoch
        );
        results.push(arm);
    }
    println!("{:<18} test mse {:.6}  mae {:.6}", "persistence", persistence.mse, persistence.mae);

    if args.ablation {
        let plain = results.pop().expect("two arms");
        let fecam = results.pop().expect("two arms");
        let report = AblationReport::new(fecam, plain);
        out.write_json("ablation_summary.json", &AblationSummary::new(&dataset, &cfg, &report))?;
        println!("MSE reduction from FECAM: {:.3}%", report.reduction_pct);
    }
    Ok(())
}

fn checkpoint_metadata(args: &TrainArgs, prepared: &PreparedData, dataset: &str) -> BTreeMap<String, String> {
    let names: Vec<&str> = prepared.summary.train_stats.iter().map(|s| s.name.as_str()).collect();
    BTreeMap::from([
        ("dataset".to_string(), dataset.to_string()),
        ("channels".to_string(), names.len().to_string()),
        ("channel_names".to_string(), names.join(",")),
        ("seed".to_string(), args.hyper.seed.to_string()),
        ("split".to_string(), args.data.split.clone()),
        ("scale".to_string(), "standardized".to_string()),
    ])
}

#[derive(Serialize)]
struct AblationSummary<'a> {
    dataset: &'a str,
    #[serde(rename = "L")]
    lookback: usize,
    #[serde(rename = "O")]
    horizon: usize,
    seed: u64,
    fecam_mse: f64,
    plain_mse: f64,
    fecam_mae: f64,
    plain_mae: f64,
    reduction_pct: f64,
}

impl<'a> AblationSummary<'a> {
    fn new(dataset: &'a str, cfg: &TrainConfig, r: &AblationReport) -> Self {
        let mse = |a: &ArmResult| a.eval.mse;
        Self {
            dataset,
            lookback: cfg.lookback,
            horizon: cfg.horizon,
            seed: cfg.seed,
            fecam_mse: mse(&r.fecam),
            plain_mse: mse(&r.plain),
            fecam_mae: r.fecam.eval.mae,
            plain_mae: r.plain.eval.mae,
            reduction_pct: r.reduction_pct,
        }
    }
}
