use super::{NnError, Result, Tensor3};

/// Mean squared error and its gradient `2 (pred - target) / count`.
pub fn mse_loss(pred: &Tensor3, target: &Tensor3) -> Result<(f64, Tensor3)> {
    pred.ensure_same_shape(target)?;
    let count = pred.values().len();
    if count == 0 {
        return Err(NnError::Shape("mse over an empty tensor".into()));
    }
    let n = count as f64;
    let loss = pred
        .values()
        .iter()
        .zip(target.values())
        .map(|(p, t)| (p - t) * (p - t))
        .sum::<f64>()
        / n;
    let grad = pred.zip_map(target, |p, t| 2.0 * (p - t) / n)?;
    Ok((loss, grad))
}
