use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Result, SpectralError};

/// Limiting relative overshoot of a truncated Fourier series next to a jump.
pub const WILBRAHAM_GIBBS_CONSTANT: f64 = 0.089489872236;

/// Truncated trigonometric series `a0/2 + sum a_n cos(2 pi n x / L) + b_n sin(2 pi n x / L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeriesModel {
    period: f64,
    a0: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl FourierSeriesModel {
    /// `cos[n-1]` and `sin[n-1]` hold `a_n` and `b_n`.
    pub fn new(period: f64, a0: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(SpectralError::InvalidModel(format!(
                "period must be positive, got {period}"
            )));
        }
        if cos.len() != sin.len() {
            return Err(SpectralError::InvalidModel(format!(
                "coefficient arrays differ in length ({} vs {})",
                cos.len(),
                sin.len()
            )));
        }
        Ok(Self {
            period,
            a0,
            cos,
            sin,
        })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn max_order(&self) -> usize {
        self.cos.len()
    }
}

/// One-sided limits of a periodic function at a suspected discontinuity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpProbe {
    pub x0: f64,
    pub left_limit: f64,
    pub right_limit: f64,
    pub jump: f64,
}

impl JumpProbe {
    pub fn new(x0: f64, left_limit: f64, right_limit: f64) -> Self {
        Self {
            x0,
            left_limit,
            right_limit,
            jump: right_limit - left_limit,
        }
    }
}

/// Reference waveforms with closed-form Fourier coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WaveKind {
    /// `+A` on `(0, L/2)`, `-A` on `(L/2, L)`; jump `2A` at 0.
    Square,
    /// `A (2x/L - 1)` on `(0, L)`; jump `-2A` at 0.
    Sawtooth,
    /// `A sin(2 pi x / L)`; continuous everywhere.
    Sine,
}

impl WaveKind {
    pub fn model(self, period: f64, amplitude: f64, max_order: usize) -> Result<FourierSeriesModel> {
        let cos = vec![0.0; max_order];
        let mut sin = vec![0.0; max_order];
        for n in 1..=max_order {
            sin[n - 1] = match self {
                WaveKind::Square if n % 2 == 1 => 4.0 * amplitude / (PI * n as f64),
                WaveKind::Square => 0.0,
                WaveKind::Sawtooth => -2.0 * amplitude / (PI * n as f64),
                WaveKind::Sine if n == 1 => amplitude,
                WaveKind::Sine => 0.0,
            };
        }
        FourierSeriesModel::new(period, 0.0, cos, sin)
    }

    /// Probe at the wave's discontinuity, or `None` for continuous waves.
    pub fn jump_probe(self, amplitude: f64) -> Option<JumpProbe> {
        match self {
            WaveKind::Square => Some(JumpProbe::new(0.0, -amplitude, amplitude)),
            WaveKind::Sawtooth => Some(JumpProbe::new(0.0, amplitude, -amplitude)),
            WaveKind::Sine => None,
        }
    }

    /// Exact function value (choosing the midpoint at jumps).
    pub fn value(self, period: f64, amplitude: f64, x: f64) -> f64 {
        let t = (x / period).rem_euclid(1.0);
        match self {
            WaveKind::Square => {
                if t == 0.0 || t == 0.5 {
                    0.0
                } else if t < 0.5 {
                    amplitude
                } else {
                    -amplitude
                }
            }
            WaveKind::Sawtooth => {
                if t == 0.0 {
                    0.0
                } else {
                    amplitude * (2.0 * t - 1.0)
                }
            }
            WaveKind::Sine => amplitude * (2.0 * PI * t).sin(),
        }
    }
}

impl std::str::FromStr for WaveKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "square" => Ok(WaveKind::Square),
            "sawtooth" => Ok(WaveKind::Sawtooth),
            "sine" => Ok(WaveKind::Sine),
            other => Err(format!("unknown wave kind `{other}` (square|sawtooth|sine)")),
        }
    }
}

/// The `order`-th partial sum evaluated at `x`.
pub fn fourier_partial_sum(model: &FourierSeriesModel, order: usize, x: f64) -> Result<f64> {
    if order > model.max_order() {
        return Err(SpectralError::OrderTooLarge {
            order,
            max: model.max_order(),
        });
    }
    let w = 2.0 * PI * x / model.period;
    let mut acc = 0.5 * model.a0;
    for n in 1..=order {
        let (s, c) = (w * n as f64).sin_cos();
        acc += model.cos[n - 1] * c + model.sin[n - 1] * s;
    }
    Ok(acc)
}

/// `S_N f(x0 + L/(2N)) - f(x0+)`, which tends to `jump * 0.0894898...`.
pub fn gibbs_overshoot(model: &FourierSeriesModel, probe: &JumpProbe, order: usize) -> Result<f64> {
    if probe.jump == 0.0 {
        return Err(SpectralError::ZeroJump);
    }
    if order == 0 {
        return Err(SpectralError::InvalidModel(
            "Gibbs probe needs order >= 1".into(),
        ));
    }
    let x = probe.x0 + model.period / (2.0 * order as f64);
    Ok(fourier_partial_sum(model, order, x)? - probe.right_limit)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GibbsRow {
    #[serde(rename = "N")]
    pub order: usize,
    pub overshoot: f64,
    pub target: f64,
}

impl GibbsRow {
    pub fn relative_error(&self) -> f64 {
        ((self.overshoot - self.target) / self.target).abs()
    }
}

/// Overshoot for each order in `orders`, paired with the limiting value.
pub fn gibbs_sweep(
    wave: WaveKind,
    period: f64,
    amplitude: f64,
    orders: &[usize],
) -> Result<Vec<GibbsRow>> {
    let probe = wave.jump_probe(amplitude).ok_or(SpectralError::ZeroJump)?;
    if probe.jump == 0.0 {
        return Err(SpectralError::ZeroJump);
    }
    let max = orders.iter().copied().max().unwrap_or(0);
    let model = wave.model(period, amplitude, max)?;
    let target = probe.jump * WILBRAHAM_GIBBS_CONSTANT;
    orders
        .iter()
        .map(|&order| {
            Ok(GibbsRow {
                order,
                overshoot: gibbs_overshoot(&model, &probe, order)?,
                target,
            })
        })
        .collect()
}

pub fn write_gibbs_csv(path: &Path, rows: &[GibbsRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["N", "overshoot", "target"])?;
    for r in rows {
        w.write_record([
            r.order.to_string(),
            format!("{:.12e}", r.overshoot),
            format!("{:.12e}", r.target),
        ])?;
    }
    w.flush()?;
    Ok(())
}
