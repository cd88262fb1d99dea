use std::ops::{Index, IndexMut};

use super::{NnError, Result};

/// `(batch, channels, length)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shape3 {
    pub batch: usize,
    pub channels: usize,
    pub length: usize,
}

impl Shape3 {
    pub const fn new(batch: usize, channels: usize, length: usize) -> Self {
        Self {
            batch,
            channels,
            length,
        }
    }

    pub const fn numel(&self) -> usize {
        self.batch * self.channels * self.length
    }

    /// Number of last-axis rows.
    pub const fn rows(&self) -> usize {
        self.batch * self.channels
    }
}

impl std::fmt::Display for Shape3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.batch, self.channels, self.length)
    }
}

/// Dense row-major `(B, C, L)` array with an optional gradient buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    shape: Shape3,
    values: Vec<f64>,
    grad: Option<Vec<f64>>,
}

impl Tensor3 {
    pub fn zeros(shape: Shape3) -> Self {
        Self {
            shape,
            values: vec![0.0; shape.numel()],
            grad: None,
        }
    }

    pub fn full(shape: Shape3, value: f64) -> Self {
        Self {
            shape,
            values: vec![value; shape.numel()],
            grad: None,
        }
    }

    pub fn from_vec(shape: Shape3, values: Vec<f64>) -> Result<Self> {
        if values.len() != shape.numel() {
            return Err(NnError::Shape(format!(
                "{} values for shape {shape}",
                values.len()
            )));
        }
        Ok(Self {
            shape,
            values,
            grad: None,
        })
    }

    pub fn shape(&self) -> Shape3 {
        self.shape
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn grad(&self) -> Option<&[f64]> {
        self.grad.as_deref()
    }

    /// Zero-initialises the gradient buffer if absent and returns it.
    pub fn grad_mut(&mut self) -> &mut [f64] {
        let n = self.values.len();
        self.grad.get_or_insert_with(|| vec![0.0; n])
    }

    pub fn set_grad(&mut self, grad: Vec<f64>) -> Result<()> {
        if grad.len() != self.values.len() {
            return Err(NnError::Shape(format!(
                "gradient of length {} for shape {}",
                grad.len(),
                self.shape
            )));
        }
        self.grad = Some(grad);
        Ok(())
    }

    pub fn clear_grad(&mut self) {
        self.grad = None;
    }

    /// The last-axis vector at `(b, c)`.
    pub fn row(&self, b: usize, c: usize) -> &[f64] {
        let start = (b * self.shape.channels + c) * self.shape.length;
        &self.values[start..start + self.shape.length]
    }

    pub fn row_mut(&mut self, b: usize, c: usize) -> &mut [f64] {
        let start = (b * self.shape.channels + c) * self.shape.length;
        let len = self.shape.length;
        &mut self.values[start..start + len]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.shape.length.max(1))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Tensor3 {
        Tensor3 {
            shape: self.shape,
            values: self.values.iter().map(|&v| f(v)).collect(),
            grad: None,
        }
    }

    pub fn zip_map(&self, other: &Tensor3, f: impl Fn(f64, f64) -> f64) -> Result<Tensor3> {
        self.ensure_same_shape(other)?;
        Ok(Tensor3 {
            shape: self.shape,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            grad: None,
        })
    }

    pub fn ensure_same_shape(&self, other: &Tensor3) -> Result<()> {
        if self.shape != other.shape {
            return Err(NnError::Shape(format!(
                "expected {}, got {}",
                self.shape, other.shape
            )));
        }
        Ok(())
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Samples `start..end` along the batch axis.
    pub fn batch_slice(&self, start: usize, end: usize) -> Tensor3 {
        let per = self.shape.channels * self.shape.length;
        Tensor3 {
            shape: Shape3::new(end - start, self.shape.channels, self.shape.length),
            values: self.values[start * per..end * per].to_vec(),
            grad: None,
        }
    }
}

impl Index<(usize, usize, usize)> for Tensor3 {
    type Output = f64;

    fn index(&self, (b, c, l): (usize, usize, usize)) -> &f64 {
        &self.values[(b * self.shape.channels + c) * self.shape.length + l]
    }
}

impl IndexMut<(usize, usize, usize)> for Tensor3 {
    fn index_mut(&mut self, (b, c, l): (usize, usize, usize)) -> &mut f64 {
        &mut self.values[(b * self.shape.channels + c) * self.shape.length + l]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_is_row_major() {
        let shape = Shape3::new(2, 3, 4);
        let t = Tensor3::from_vec(shape, (0..24).map(f64::from).collect()).unwrap();
        assert_eq!(t[(1, 2, 3)], 23.0);
        assert_eq!(t[(0, 1, 0)], 4.0);
        assert_eq!(t.row(1, 0), &[12.0, 13.0, 14.0, 15.0]);
    }

    #[test]
    fn wrong_length_rejected() {
        assert!(Tensor3::from_vec(Shape3::new(1, 2, 3), vec![0.0; 5]).is_err());
    }

    #[test]
    fn grad_buffer_matches_shape() {
        let mut t = Tensor3::zeros(Shape3::new(1, 2, 2));
        assert!(t.grad().is_none());
        assert_eq!(t.grad_mut().len(), 4);
        assert!(t.set_grad(vec![1.0; 3]).is_err());
    }

    #[test]
    fn batch_slice_copies_samples() {
        let t = Tensor3::from_vec(Shape3::new(3, 1, 2), vec![1., 2., 3., 4., 5., 6.]).unwrap();
        let s = t.batch_slice(1, 3);
        assert_eq!(s.shape(), Shape3::new(2, 1, 2));
        assert_eq!(s.values(), &[3., 4., 5., 6.]);
    }
}
