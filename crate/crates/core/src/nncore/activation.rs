use super::{Result, Tensor3};

#[inline]
pub fn relu(t: f64) -> f64 {
    t.max(0.0)
}

/// Logistic function, evaluated so that large `|t|` never overflows.
#[inline]
pub fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

pub fn relu_forward(x: &Tensor3) -> Tensor3 {
    x.map(relu)
}

/// Uses `relu'(0) = 0`.
pub fn relu_backward(input: &Tensor3, upstream: &Tensor3) -> Result<Tensor3> {
    input.zip_map(upstream, |x, u| if x > 0.0 { u } else { 0.0 })
}

pub fn sigmoid_forward(x: &Tensor3) -> Tensor3 {
    x.map(sigmoid)
}

/// Takes the forward *output* `s`, since `sigmoid' = s (1 - s)`.
pub fn sigmoid_backward(output: &Tensor3, upstream: &Tensor3) -> Result<Tensor3> {
    output.zip_map(upstream, |s, u| u * s * (1.0 - s))
}

pub fn elementwise_mul_forward(a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
    a.zip_map(b, |x, y| x * y)
}

/// Returns `(dL/da, dL/db)`.
pub fn elementwise_mul_backward(
    a: &Tensor3,
    b: &Tensor3,
    upstream: &Tensor3,
) -> Result<(Tensor3, Tensor3)> {
    a.ensure_same_shape(b)?;
    Ok((upstream.zip_map(b, |u, y| u * y)?, upstream.zip_map(a, |u, x| u * x)?))
}
