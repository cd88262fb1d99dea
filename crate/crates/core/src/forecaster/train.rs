use std::path::Path;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{evaluate, ForecastError, ForecastModel, Result, TrainConfig};
use crate::data::WindowedDataset;
use crate::nncore::{mse_loss, AdamConfig, AdamState, Parameterized};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    /// `None` when training without a validation split.
    pub val_loss: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub history: Vec<EpochRecord>,
    pub epochs_run: usize,
    /// Epoch whose parameters the model holds on return (1-based).
    pub best_epoch: usize,
    pub seconds: f64,
}

/// Mini-batch Adam on the MSE loss.
///
/// Batches are drawn from a permutation seeded by `cfg.seed`. When `val` is
/// given the model is rolled back to the epoch with the lowest validation
/// MSE and training stops after `early_stop_patience` epochs without
/// improvement. The learning rate is multiplied by `lr_decay` after each epoch.
pub fn train(
    model: &mut ForecastModel,
    train_set: &WindowedDataset,
    val: Option<&WindowedDataset>,
    cfg: &TrainConfig,
) -> Result<TrainReport> {
    cfg.validate()?;
    if train_set.is_empty() {
        return Err(ForecastError::EmptyDataset("training set"));
    }
    if train_set.lookback() != model.lookback() || train_set.horizon() != model.horizon() {
        return Err(ForecastError::Config(format!(
            "dataset windows {}->{} do not match model {}->{}",
            train_set.lookback(),
            train_set.horizon(),
            model.lookback(),
            model.horizon()
        )));
    }
    let start = Instant::now();
    // distinct stream from the one used for initialization
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5348_5546_464c_4500);
    let mut adam = AdamState::new(AdamConfig::with_lr(cfg.lr), model.param_count());
    let mut order: Vec<usize> = (0..train_set.len()).collect();
    let mut history = Vec::with_capacity(cfg.epochs);
    let mut best: Option<(f64, usize, Vec<f64>)> = None;
    let mut stale = 0;
    let mut lr = cfg.lr;

    for epoch in 1..=cfg.epochs {
        order.shuffle(&mut rng);
        let mut total = 0.0;
        for (batch_idx, chunk) in order.chunks(cfg.batch_size).enumerate() {
            let (x, y) = train_set.batch(chunk);
            model.zero_grad();
            let pred = model.forward_train(&x)?;
            let (loss, grad) = mse_loss(&pred, &y)?;
            if !loss.is_finite() {
                return Err(ForecastError::Diverged { epoch, batch: batch_idx, loss });
            }
            model.backward(&grad)?;
            adam.step(&mut model.param_groups())?;
            total += loss * chunk.len() as f64;
        }
        let train_loss = total / train_set.len() as f64;
        let val_loss = match val {
            Some(v) => {
                let mse = evaluate(model, v, cfg.batch_size)?.mse;
                if !mse.is_finite() {
                    return Err(ForecastError::Diverged { epoch, batch: usize::MAX, loss: mse });
                }
                Some(mse)
            }
            None => None,
        };
        history.push(EpochRecord { epoch, train_loss, val_loss });

        if let Some(vl) = val_loss {
            if best.as_ref().is_none_or(|(b, _, _)| vl < *b) {
                best = Some((vl, epoch, model.flat_params()));
                stale = 0;
            } else {
                stale += 1;
                if stale >= cfg.early_stop_patience {
                    break;
                }
            }
        }
        lr *= cfg.lr_decay;
        adam.set_lr(lr);
    }

    let epochs_run = history.len();
    let best_epoch = match best {
        Some((_, epoch, params)) => {
            model.set_flat_params(&params)?;
            epoch
        }
        None => epochs_run,
    };
    Ok(TrainReport {
        history,
        epochs_run,
        best_epoch,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// CSV with header `epoch,train_loss,val_loss`; the last column is empty
/// when there was no validation split.
pub fn write_loss_history(path: &Path, history: &[EpochRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["epoch", "train_loss", "val_loss"])?;
    for r in history {
        w.write_record([
            r.epoch.to_string(),
            format!("{:.12e}", r.train_loss),
            r.val_loss.map(|v| format!("{v:.12e}")).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
