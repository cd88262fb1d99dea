//! Minimal reverse-mode stack.
//!
//! The network graph is fixed and shallow, so every layer owns an explicit
//! backward function instead of sharing a tape. All arithmetic is `f64`.

mod activation;
mod adam;
mod checkpoint;
mod dense;
mod gradcheck;
mod loss;
mod tensor;

pub use activation::{
    elementwise_mul_backward, elementwise_mul_forward, relu, relu_backward, relu_forward, sigmoid,
    sigmoid_backward, sigmoid_forward,
};
pub use adam::{AdamConfig, AdamState};
pub use checkpoint::{Checkpoint, NamedArray, CHECKPOINT_MAGIC, CHECKPOINT_VERSION};
pub use dense::{DenseLayer, ParamGroup};
pub use gradcheck::{grad_check, GradCheckReport};
pub use loss::mse_loss;
pub use tensor::{Shape3, Tensor3};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NnError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("parameter count mismatch: optimizer holds {expected}, got {actual}")]
    ParamCount { expected: usize, actual: usize },
    #[error("backward called without a cached forward pass")]
    MissingCache,
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, NnError>;

/// Objects whose trainable parameters can be visited in a fixed order.
pub trait Parameterized {
    fn param_groups(&mut self) -> Vec<ParamGroup<'_>>;

    fn zero_grad(&mut self) {
        for g in self.param_groups() {
            g.grads.iter_mut().for_each(|v| *v = 0.0);
        }
    }

    fn param_count(&mut self) -> usize {
        self.param_groups().iter().map(|g| g.values.len()).sum()
    }

    /// Concatenation of every parameter in visiting order.
    fn flat_params(&mut self) -> Vec<f64> {
        self.param_groups()
            .iter()
            .flat_map(|g| g.values.iter().copied())
            .collect()
    }

    fn flat_grads(&mut self) -> Vec<f64> {
        self.param_groups()
            .iter()
            .flat_map(|g| g.grads.iter().copied())
            .collect()
    }

    fn set_flat_params(&mut self, flat: &[f64]) -> Result<()> {
        let expected = self.param_count();
        if flat.len() != expected {
            return Err(NnError::ParamCount {
                expected,
                actual: flat.len(),
            });
        }
        let mut offset = 0;
        for g in self.param_groups() {
            let n = g.values.len();
            g.values.copy_from_slice(&flat[offset..offset + n]);
            offset += n;
        }
        Ok(())
    }
}
