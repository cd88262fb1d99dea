//! Frequency enhanced channel attention.
//!
//! Each channel's length-`L` sequence is mapped through the orthonormal DCT,
//! a bottleneck MLP along the frequency axis (`L -> L/r -> L`, shared by all
//! channels) turns the spectrum into per-frequency weights in `(0, 1)`, and
//! those weights rescale the original time-domain input. No inverse
//! transform is involved.
//!
//! [`SeBaseline`] is the classic squeeze-and-excitation block, kept for
//! comparison: its squeeze vector is the DC row of the frequency map up to
//! a factor of `sqrt(L)`.

mod attention;
mod layer;
mod se;

pub use attention::{export_attention, read_heatmap_csv, AttentionMap};
pub use layer::FecamLayer;
pub use se::{gap, SeBaseline};

use thiserror::Error;

use crate::nncore::NnError;
use crate::spectral::SpectralError;

#[derive(Debug, Error)]
pub enum FecamError {
    #[error("invalid layer configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Nn(#[from] NnError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("heatmap parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, FecamError>;

pub(crate) fn check_reduction(dim: usize, reduction: usize, what: &str) -> Result<usize> {
    if dim == 0 || reduction == 0 || dim % reduction != 0 {
        return Err(FecamError::Config(format!(
            "{what} {dim} must be a positive multiple of reduction {reduction}"
        )));
    }
    Ok(dim / reduction)
}
