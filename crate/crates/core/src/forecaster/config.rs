use serde::{Deserialize, Serialize};

use super::{ForecastError, Result};

/// Hyperparameters for one training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub lookback: usize,
    pub horizon: usize,
    /// Bottleneck ratio of the excitation MLP; must divide `lookback`.
    pub reduction: usize,
    pub lr: f64,
    pub batch_size: usize,
    /// Upper bound; early stopping may end the run sooner.
    pub epochs: usize,
    pub seed: u64,
    /// Epochs without validation improvement before stopping.
    pub early_stop_patience: usize,
    /// Multiplier applied to `lr` after every epoch.
    pub lr_decay: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            lookback: 96,
            horizon: 96,
            reduction: 2,
            lr: 1e-4,
            batch_size: 32,
            epochs: 10,
            seed: 2021,
            early_stop_patience: 3,
            lr_decay: 0.5,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("lookback", self.lookback),
            ("horizon", self.horizon),
            ("reduction", self.reduction),
            ("batch_size", self.batch_size),
            ("epochs", self.epochs),
            ("early_stop_patience", self.early_stop_patience),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(ForecastError::Config(format!("{name} must be positive")));
            }
        }
        if self.lookback % self.reduction != 0 {
            return Err(ForecastError::Config(format!(
                "lookback {} is not divisible by reduction {}",
                self.lookback, self.reduction
            )));
        }
        if !(self.lr.is_finite() && self.lr >= 0.0) {
            return Err(ForecastError::Config(format!("lr {} must be finite and >= 0", self.lr)));
        }
        if !(self.lr_decay.is_finite() && self.lr_decay > 0.0) {
            return Err(ForecastError::Config(format!("lr_decay {} must be positive", self.lr_decay)));
        }
        Ok(())
    }
}
