use serde::{Deserialize, Serialize};

use super::{evaluate, train, EvalReport, ForecastModel, Result, TrainConfig, TrainReport};
use crate::data::WindowedDataset;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmResult {
    pub eval: EvalReport,
    pub training: TrainReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationReport {
    pub fecam: ArmResult,
    pub plain: ArmResult,
    /// `(plain - fecam) / plain * 100` on test MSE; positive favours FECAM.
    pub reduction_pct: f64,
}

pub fn reduction_pct(plain_mse: f64, fecam_mse: f64) -> f64 {
    (plain_mse - fecam_mse) / plain_mse * 100.0
}

/// Trains one arm from the seeded initialization and scores it on `test`.
pub fn run_arm(
    train_set: &WindowedDataset,
    val: Option<&WindowedDataset>,
    test: &WindowedDataset,
    cfg: &TrainConfig,
    with_fecam: bool,
) -> Result<(ForecastModel, ArmResult)> {
    let mut model = ForecastModel::new(cfg, with_fecam)?;
    let training = train(&mut model, train_set, val, cfg)?;
    let eval = evaluate(&model, test, cfg.batch_size)?;
    Ok((model, ArmResult { eval, training }))
}

/// Trains the FECAM model and the projection-only model with the same seed
/// and configuration, then evaluates both on `test`.
pub fn ablation_compare(
    train_set: &WindowedDataset,
    val: Option<&WindowedDataset>,
    test: &WindowedDataset,
    cfg: &TrainConfig,
) -> Result<AblationReport> {
    let (_, fecam) = run_arm(train_set, val, test, cfg, true)?;
    let (_, plain) = run_arm(train_set, val, test, cfg, false)?;
    Ok(AblationReport::new(fecam, plain))
}

impl AblationReport {
    pub fn new(fecam: ArmResult, plain: ArmResult) -> Self {
        Self {
            reduction_pct: reduction_pct(plain.eval.mse, fecam.eval.mse),
            fecam,
            plain,
        }
    }
}
