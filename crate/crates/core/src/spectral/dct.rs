use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use super::{Normalization, Result, Signal, SpectralError, Spectrum};

/// Cosine basis `B_l^i = cos(pi l (i + 1/2) / L)`.
pub fn dct_basis(l: usize, i: usize, len: usize) -> Result<f64> {
    if l >= len {
        return Err(SpectralError::IndexOutOfRange { index: l, len });
    }
    if i >= len {
        return Err(SpectralError::IndexOutOfRange { index: i, len });
    }
    Ok(basis_unchecked(l, i, len))
}

#[inline]
fn basis_unchecked(l: usize, i: usize, len: usize) -> f64 {
    (PI * l as f64 / len as f64 * (i as f64 + 0.5)).cos()
}

/// Dense DCT-II matrix and its exact inverse for a fixed length.
#[derive(Debug)]
pub struct DctMatrix {
    len: usize,
    normalization: Normalization,
    // forward[l * len + i]
    forward: Vec<f64>,
    // inverse[i * len + l]
    inverse: Vec<f64>,
}

impl DctMatrix {
    fn build(len: usize, normalization: Normalization) -> Self {
        let n = len as f64;
        let mut forward = vec![0.0; len * len];
        let mut inverse = vec![0.0; len * len];
        for l in 0..len {
            let (scale, inv_weight) = match normalization {
                Normalization::Unnormalized => (1.0, if l == 0 { 1.0 / n } else { 2.0 / n }),
                Normalization::Orthonormal => {
                    let s = if l == 0 { (1.0 / n).sqrt() } else { (2.0 / n).sqrt() };
                    (s, s)
                }
            };
            for i in 0..len {
                let b = basis_unchecked(l, i, len);
                forward[l * len + i] = scale * b;
                inverse[i * len + l] = inv_weight * b;
            }
        }
        Self {
            len,
            normalization,
            forward,
            inverse,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// Entry `(l, i)` of the forward matrix.
    pub fn entry(&self, l: usize, i: usize) -> f64 {
        self.forward[l * self.len + i]
    }

    pub fn forward_row(&self, l: usize) -> &[f64] {
        &self.forward[l * self.len..(l + 1) * self.len]
    }

    /// `out = G x`. Both slices must have length `len`.
    pub fn apply_forward(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.len);
        debug_assert_eq!(out.len(), self.len);
        for (row, o) in self.forward.chunks_exact(self.len).zip(out.iter_mut()) {
            *o = dot(row, x);
        }
    }

    /// `out = G^-1 f`.
    pub fn apply_inverse(&self, f: &[f64], out: &mut [f64]) {
        debug_assert_eq!(f.len(), self.len);
        debug_assert_eq!(out.len(), self.len);
        for (row, o) in self.inverse.chunks_exact(self.len).zip(out.iter_mut()) {
            *o = dot(row, f);
        }
    }

    /// `out = G^T g`, the adjoint used when back-propagating through the forward transform.
    pub fn apply_transpose(&self, g: &[f64], out: &mut [f64]) {
        debug_assert_eq!(g.len(), self.len);
        debug_assert_eq!(out.len(), self.len);
        out.iter_mut().for_each(|o| *o = 0.0);
        for (row, &gl) in self.forward.chunks_exact(self.len).zip(g) {
            for (o, &w) in out.iter_mut().zip(row) {
                *o += w * gl;
            }
        }
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

type CacheKey = (usize, Normalization);

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<DctMatrix>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<DctMatrix>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Shared basis matrix for `(len, normalization)`, built on first request.
pub fn dct_matrix(len: usize, normalization: Normalization) -> Result<Arc<DctMatrix>> {
    if len == 0 {
        return Err(SpectralError::EmptySignal);
    }
    let key = (len, normalization);
    if let Some(m) = cache().read().expect("dct cache poisoned").get(&key) {
        return Ok(Arc::clone(m));
    }
    let built = Arc::new(DctMatrix::build(len, normalization));
    let mut guard = cache().write().expect("dct cache poisoned");
    Ok(Arc::clone(guard.entry(key).or_insert(built)))
}

pub fn dct_forward(x: &Signal, normalization: Normalization) -> Result<Spectrum> {
    let m = dct_matrix(x.len(), normalization)?;
    let mut out = vec![0.0; x.len()];
    m.apply_forward(x.values(), &mut out);
    Ok(Spectrum::new(out, normalization))
}

/// DCT-III with the scaling that exactly undoes [`dct_forward`] under the same tag.
pub fn dct_inverse(f: &Spectrum) -> Result<Signal> {
    if let Some(index) = f.coefficients.iter().position(|v| !v.is_finite()) {
        return Err(SpectralError::NonFinite { index });
    }
    let m = dct_matrix(f.len(), f.normalization)?;
    let mut out = vec![0.0; f.len()];
    m.apply_inverse(&f.coefficients, &mut out);
    Signal::new(out)
}
