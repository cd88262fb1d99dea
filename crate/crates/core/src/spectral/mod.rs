//! Transform and analysis kernels.
//!
//! Everything in here is a pure function of its inputs. Basis matrices are
//! built once per `(length, normalization)` and shared behind an [`Arc`],
//! so concurrent callers never observe mutation.
//!
//! [`Arc`]: std::sync::Arc

mod compaction;
mod dct;
mod dft;
mod gibbs;

pub use compaction::{
    boundary_overshoot_compare, energy_compaction_report, low_frequency_fixture, ramp_fixture,
    reconstruct_truncated,
    write_compaction_csv, BoundaryReport, CompactionRow, TransformKind,
};
pub use dct::{dct_basis, dct_forward, dct_inverse, dct_matrix, DctMatrix};
pub use dft::{dct_via_even_dft, dft_forward, dft_inverse, symmetric_extension};
pub use gibbs::{
    fourier_partial_sum, gibbs_overshoot, gibbs_sweep, write_gibbs_csv, FourierSeriesModel,
    GibbsRow, JumpProbe, WaveKind, WILBRAHAM_GIBBS_CONSTANT,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("signal must contain at least one sample")]
    EmptySignal,
    #[error("signal value at index {index} is not finite")]
    NonFinite { index: usize },
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("component count {n} outside 1..={len}")]
    ComponentCount { n: usize, len: usize },
    #[error("order {order} exceeds available coefficients ({max})")]
    OrderTooLarge { order: usize, max: usize },
    #[error("Gibbs overshoot is undefined for a zero jump")]
    ZeroJump,
    #[error("invalid series model: {0}")]
    InvalidModel(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, SpectralError>;

/// A finite, non-empty real sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal(Vec<f64>);

impl Signal {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(SpectralError::EmptySignal);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(SpectralError::NonFinite { index });
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Euclidean distance to another signal of the same length.
    pub fn l2_distance(&self, other: &Signal) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

impl TryFrom<Vec<f64>> for Signal {
    type Error = SpectralError;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Signal::new(values)
    }
}

impl TryFrom<&[f64]> for Signal {
    type Error = SpectralError;

    fn try_from(values: &[f64]) -> Result<Self> {
        Signal::new(values.to_vec())
    }
}

/// Scaling convention of a DCT spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Normalization {
    /// `f_l = sum_i x_i cos(pi l (i + 1/2) / L)` with no scale factors.
    Unnormalized,
    /// Row `l` scaled by `sqrt(1/L)` for `l = 0` and `sqrt(2/L)` otherwise.
    Orthonormal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub coefficients: Vec<f64>,
    pub normalization: Normalization,
}

impl Spectrum {
    pub fn new(coefficients: Vec<f64>, normalization: Normalization) -> Self {
        Self {
            coefficients,
            normalization,
        }
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}
