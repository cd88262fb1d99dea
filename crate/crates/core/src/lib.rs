//! Frequency enhanced channel attention for time-series forecasting.
//!
//! * [`spectral`]: DCT/DFT kernels, Gibbs probes, truncated reconstruction.
//! * [`nncore`]: a small reverse-mode stack (tensors, dense layers, Adam).
//! * [`fecam`]: the DCT channel-attention layer and the GAP/SE baseline.
//! * [`data`]: CSV ingestion, chronological splits, standardization, windows.
//! * [`forecaster`]: attention + projection model, training and evaluation.

pub mod data;
pub mod fecam;
pub mod forecaster;
pub mod nncore;
pub mod spectral;
