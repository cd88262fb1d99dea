//! The standalone forecaster: FECAM followed by one projection `L -> O`
//! shared across channels, plus a projection-only ablation, the training
//! loop, and MSE/MAE evaluation.

mod ablation;
mod config;
mod eval;
mod model;
mod train;

pub use ablation::{ablation_compare, reduction_pct, run_arm, AblationReport, ArmResult};
pub use config::TrainConfig;
pub use eval::{evaluate, EvalReport, Forecaster, Persistence};
pub use model::ForecastModel;
pub use train::{train, write_loss_history, EpochRecord, TrainReport};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fecam::FecamError;
use crate::nncore::NnError;

#[derive(Debug, Error)]
pub enum ForecastError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("training diverged at epoch {epoch}, batch {batch}: loss = {loss}")]
    Diverged { epoch: usize, batch: usize, loss: f64 },
    #[error("empty dataset: {0}")]
    EmptyDataset(&'static str),
    #[error(transparent)]
    Fecam(#[from] FecamError),
    #[error(transparent)]
    Nn(#[from] NnError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, ForecastError>;

/// Serialized metrics for one trained model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub dataset: String,
    #[serde(rename = "L")]
    pub lookback: usize,
    #[serde(rename = "O")]
    pub horizon: usize,
    pub seed: u64,
    pub mse: f64,
    pub mae: f64,
    pub epochs_run: usize,
    pub seconds: f64,
    /// Metrics are computed on train-fitted standardized values.
    pub scale: String,
    pub model: String,
}

impl MetricsRecord {
    pub fn new(dataset: &str, cfg: &TrainConfig, eval: &EvalReport, trained: &TrainReport, with_fecam: bool) -> Self {
        Self {
            dataset: dataset.to_string(),
            lookback: cfg.lookback,
            horizon: cfg.horizon,
            seed: cfg.seed,
            mse: eval.mse,
            mae: eval.mae,
            epochs_run: trained.epochs_run,
            seconds: trained.seconds + eval.seconds,
            scale: "standardized".to_string(),
            model: if with_fecam { "fecam+projection" } else { "projection" }.to_string(),
        }
    }

    pub fn write_json(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}
