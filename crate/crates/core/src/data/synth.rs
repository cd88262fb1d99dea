use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::RawSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SynthKind {
    /// Three incommensurate sinusoids per channel, channel-specific phases and
    /// mixing amplitudes.
    SinusoidMix,
    Ramp,
    Square,
}

impl std::str::FromStr for SynthKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "sinusoid_mix" | "sinusoid-mix" => Ok(SynthKind::SinusoidMix),
            "ramp" => Ok(SynthKind::Ramp),
            "square" => Ok(SynthKind::Square),
            other => Err(format!("unknown synthetic kind `{other}`")),
        }
    }
}

/// Periods (in samples) of the sinusoid mix. All sit well below a quarter of
/// the Nyquist band.
const MIX_PERIODS: [f64; 3] = [24.0, 24.0 * 1.618_033_988_749_895, 24.0 / std::f64::consts::SQRT_2];

const HOUR_MS: i64 = 3_600_000;

/// Deterministic synthetic series with hourly timestamps.
pub fn synth_series(kind: SynthKind, len: usize, channels: usize, noise_std: f64, seed: u64) -> RawSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, noise_std.max(0.0)).expect("finite noise level");
    let phases: Vec<[f64; 3]> = (0..channels)
        .map(|_| [rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI)])
        .collect();
    let mut values = Vec::with_capacity(len * channels);
    for t in 0..len {
        let tf = t as f64;
        for (c, phase) in phases.iter().enumerate() {
            let clean = match kind {
                SynthKind::SinusoidMix => {
                    (0..3)
                        .map(|k| {
                            // channel c leans on component c mod 3
                            let amp = if k == c % 3 { 1.5 } else { 0.4 + 0.2 * k as f64 };
                            amp * (2.0 * PI * tf / MIX_PERIODS[k] + phase[k]).sin()
                        })
                        .sum::<f64>()
                        + 0.25 * c as f64
                }
                SynthKind::Ramp => (1.0 + 0.5 * c as f64) * tf / len.max(1) as f64 + c as f64,
                SynthKind::Square => {
                    let s = (2.0 * PI * tf / 48.0 + phase[0]).sin();
                    if s >= 0.0 {
                        1.0
                    } else {
                        -1.0
                    }
                }
            };
            let eps = if noise_std > 0.0 { noise.sample(&mut rng) } else { 0.0 };
            values.push(clean + eps);
        }
    }
    RawSeries::new(
        (0..len as i64).map(|t| t * HOUR_MS).collect(),
        (0..channels).map(|c| format!("ch{c}")).collect(),
        values,
    )
    .expect("synthetic series is well formed")
}
