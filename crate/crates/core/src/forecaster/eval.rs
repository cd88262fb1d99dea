use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{ForecastError, ForecastModel, Result};
use crate::data::WindowedDataset;
use crate::nncore::{NnError, Shape3, Tensor3};

/// Anything that maps `(B, C, L)` inputs to `(B, C, O)` predictions.
pub trait Forecaster {
    fn predict(&self, x: &Tensor3) -> Result<Tensor3>;
}

impl Forecaster for ForecastModel {
    fn predict(&self, x: &Tensor3) -> Result<Tensor3> {
        self.forward(x)
    }
}

/// Repeats the last observed value of each channel across the horizon.
#[derive(Debug, Clone, Copy)]
pub struct Persistence {
    pub horizon: usize,
}

impl Forecaster for Persistence {
    fn predict(&self, x: &Tensor3) -> Result<Tensor3> {
        let s = x.shape();
        if s.length == 0 {
            return Err(NnError::Shape("persistence needs at least one observation".into()).into());
        }
        let mut out = Tensor3::zeros(Shape3::new(s.batch, s.channels, self.horizon));
        for b in 0..s.batch {
            for c in 0..s.channels {
                let last = x.row(b, c)[s.length - 1];
                out.row_mut(b, c).iter_mut().for_each(|v| *v = last);
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub mse: f64,
    pub mae: f64,
    /// MSE at each horizon step.
    pub per_step_mse: Vec<f64>,
    pub samples: usize,
    pub seconds: f64,
}

/// MSE and MAE over every `(sample, channel, step)` triple.
///
/// Errors are accumulated in sample order regardless of `batch_size`, so the
/// result does not depend on how the set is partitioned.
pub fn evaluate<F: Forecaster + ?Sized>(
    model: &F,
    data: &WindowedDataset,
    batch_size: usize,
) -> Result<EvalReport> {
    if data.is_empty() {
        return Err(ForecastError::EmptyDataset("evaluation set"));
    }
    let start = Instant::now();
    let horizon = data.horizon();
    let mut sq = 0.0;
    let mut abs = 0.0;
    let mut per_step = vec![0.0; horizon];
    let indices: Vec<usize> = (0..data.len()).collect();
    for chunk in indices.chunks(batch_size.max(1)) {
        let (x, y) = data.batch(chunk);
        let pred = model.predict(&x)?;
        pred.ensure_same_shape(&y).map_err(ForecastError::from)?;
        for (prow, yrow) in pred.rows().zip(y.rows()) {
            for ((p, t), acc) in prow.iter().zip(yrow).zip(per_step.iter_mut()) {
                let e = p - t;
                sq += e * e;
                abs += e.abs();
                *acc += e * e;
            }
        }
    }
    let rows = (data.len() * data.channels()) as f64;
    let count = rows * horizon as f64;
    per_step.iter_mut().for_each(|v| *v /= rows);
    Ok(EvalReport {
        mse: sq / count,
        mae: abs / count,
        per_step_mse: per_step,
        samples: data.len(),
        seconds: start.elapsed().as_secs_f64(),
    })
}
