//! Dataset preparation: CSV ingestion, chronological splits, train-fitted
//! standardization, sliding windows, and synthetic fixtures.

mod load;
mod series;
mod split;
mod standardize;
mod synth;
mod windows;

pub use load::{load_csv, parse_timestamp, FillPolicy};
pub use series::RawSeries;
pub use split::{chronological_split, SplitRatios};
pub use standardize::Standardizer;
pub use synth::{synth_series, SynthKind};
pub use windows::{make_windows, WindowedDataset};

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("line {line}: missing value in column `{column}`")]
    MissingValue { line: u64, column: String },
    #[error("line {line}: timestamp does not increase")]
    NonMonotone { line: u64 },
    #[error("expected a timestamp column and at least one channel, found {0} column(s)")]
    TooFewColumns(usize),
    #[error("column `{0}` not found")]
    MissingColumn(String),
    #[error("{what} has {len} rows, needs at least {needed}")]
    TooShort {
        what: String,
        len: usize,
        needed: usize,
    },
    #[error("channel `{0}` has zero variance on the training slice")]
    DegenerateChannel(String),
    #[error("invalid split ratios: {0}")]
    InvalidRatios(String),
    #[error("invalid series: {0}")]
    Invalid(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, DataError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelStats {
    pub name: String,
    pub mean: f64,
    pub std: f64,
}

/// Optional machine-readable description of a prepared dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    #[serde(rename = "T")]
    pub total_rows: usize,
    #[serde(rename = "C")]
    pub channels: usize,
    pub train_rows: usize,
    pub val_rows: usize,
    pub test_rows: usize,
    pub train_stats: Vec<ChannelStats>,
}

impl DatasetSummary {
    pub fn new(
        total: &RawSeries,
        train: &RawSeries,
        val: &RawSeries,
        test: &RawSeries,
        scaler: &Standardizer,
    ) -> Self {
        Self {
            total_rows: total.len(),
            channels: total.channels(),
            train_rows: train.len(),
            val_rows: val.len(),
            test_rows: test.len(),
            train_stats: scaler.stats(),
        }
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}

/// Standardized, windowed train/validation/test sets ready for training.
#[derive(Debug, Clone)]
pub struct PreparedData {
    pub train: WindowedDataset,
    pub val: WindowedDataset,
    pub test: WindowedDataset,
    pub scaler: Standardizer,
    pub summary: DatasetSummary,
}

/// Split chronologically, fit the scaler on train, apply it everywhere, and
/// cut stride-1 windows in each slice.
pub fn prepare(series: &RawSeries, ratios: SplitRatios, lookback: usize, horizon: usize) -> Result<PreparedData> {
    let (train, val, test) = chronological_split(series, ratios, lookback + horizon)?;
    let scaler = Standardizer::fit(&train)?;
    let summary = DatasetSummary::new(series, &train, &val, &test, &scaler);
    let window = |s: &RawSeries| -> Result<WindowedDataset> {
        make_windows(&scaler.transform(s)?, lookback, horizon, 1)
    };
    Ok(PreparedData {
        train: window(&train)?,
        val: window(&val)?,
        test: window(&test)?,
        summary,
        scaler,
    })
}
