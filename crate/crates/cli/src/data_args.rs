use std::path::{Path, PathBuf};

use clap::Args;
use fecam_core::data::{load_csv, synth_series, FillPolicy, RawSeries, SplitRatios, SynthKind};
use serde::Serialize;

use crate::outcome::{Failure, OrUsage};

/// Where the series comes from and how it is split.
#[derive(Debug, Clone, Args, Serialize)]
pub struct DataArgs {
    /// CSV file: timestamp column followed by numeric channels.
    #[arg(long, conflicts_with = "synthetic", required_unless_present = "synthetic")]
    pub data: Option<PathBuf>,
    /// Generate a synthetic series instead (sinusoid_mix, ramp, square).
    #[arg(long)]
    pub synthetic: Option<String>,
    #[arg(long, default_value_t = 2000)]
    pub synth_len: usize,
    #[arg(long, default_value_t = 4)]
    pub synth_channels: usize,
    #[arg(long, default_value_t = 0.3)]
    pub synth_noise: f64,
    #[arg(long, default_value_t = 7)]
    pub synth_seed: u64,
    #[arg(long, default_value = "date")]
    pub date_column: String,
    /// Keep only these channels (comma separated), e.g. `OT` for univariate runs.
    #[arg(long, value_delimiter = ',')]
    pub target: Vec<String>,
    /// Missing-value policy: reject or forward-fill.
    #[arg(long, default_value = "reject")]
    pub fill: String,
    /// auto (3:1:1 for ETT* files, 7:2:2 otherwise), ett, literal, conventional, or a:b:c.
    #[arg(long, default_value = "auto")]
    pub split: String,
}

impl DataArgs {
    pub fn dataset_name(&self) -> String {
        match (&self.data, &self.synthetic) {
            (Some(p), _) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string()),
            (None, Some(kind)) => format!("synthetic:{kind}"),
            (None, None) => "unknown".into(),
        }
    }

    pub fn synth_seed_if_synthetic(&self) -> Option<u64> {
        self.synthetic.as_ref().map(|_| self.synth_seed)
    }

    pub fn ratios(&self) -> Result<SplitRatios, Failure> {
        if self.split == "auto" {
            let is_ett = self
                .data
                .as_deref()
                .and_then(Path::file_name)
                .is_some_and(|n| n.to_string_lossy().to_ascii_uppercase().starts_with("ETT"));
            return Ok(if is_ett { SplitRatios::ett() } else { SplitRatios::literal_722() });
        }
        SplitRatios::parse(&self.split).or_usage("--split")
    }

    /// Loads (or generates) the series and applies the channel selection.
    pub fn load(&self) -> Result<RawSeries, Failure> {
        let fill = match self.fill.as_str() {
            "reject" => FillPolicy::Reject,
            "forward-fill" | "ffill" => FillPolicy::ForwardFill,
            other => return Err(Failure::usage(format!("unknown --fill `{other}` (reject|forward-fill)"))),
        };
        let series = match (&self.data, &self.synthetic) {
            (Some(path), _) => {
                if !path.is_file() {
                    return Err(Failure::usage(format!("data file {} does not exist", path.display())));
                }
                load_csv(path, &self.date_column, fill).or_usage(&format!("loading {}", path.display()))?
            }
            (None, Some(kind)) => {
                let kind: SynthKind = kind.parse().map_err(Failure::usage)?;
                if self.synth_len == 0 || self.synth_channels == 0 {
                    return Err(Failure::usage("--synth-len and --synth-channels must be positive"));
                }
                if !(self.synth_noise.is_finite() && self.synth_noise >= 0.0) {
                    return Err(Failure::usage("--synth-noise must be finite and >= 0"));
                }
                synth_series(kind, self.synth_len, self.synth_channels, self.synth_noise, self.synth_seed)
            }
            (None, None) => return Err(Failure::usage("pass --data or --synthetic")),
        };
        if self.target.is_empty() {
            Ok(series)
        } else {
            series.select_channels(&self.target).or_usage("--target")
        }
    }
}
