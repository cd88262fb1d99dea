use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Result, Signal, SpectralError};

/// Direct DFT with `sign = -1` (forward) or `+1` (inverse), unitary `1/sqrt(N)` scaling.
fn unitary_dft(input: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = input.len();
    let twiddles: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, sign * 2.0 * PI * j as f64 / n as f64))
        .collect();
    let scale = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut idx = 0usize;
            for x in input {
                acc += x * twiddles[idx];
                idx += k;
                if idx >= n {
                    idx -= n;
                }
            }
            acc * scale
        })
        .collect()
}

/// Unitary DFT: `X_k = N^{-1/2} sum_n x_n exp(-2 pi i k n / N)`.
pub fn dft_forward(x: &Signal) -> Result<Vec<Complex64>> {
    let input: Vec<Complex64> = x.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    Ok(unitary_dft(&input, -1.0))
}

/// Inverse of [`dft_forward`]. The imaginary part of the result is dropped, so
/// callers that truncate spectra should keep conjugate pairs together.
pub fn dft_inverse(coeffs: &[Complex64]) -> Result<Signal> {
    if coeffs.is_empty() {
        return Err(SpectralError::EmptySignal);
    }
    if let Some(index) = coeffs.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(SpectralError::NonFinite { index });
    }
    let out = unitary_dft(coeffs, 1.0);
    Signal::new(out.into_iter().map(|c| c.re).collect())
}

/// Half-sample even extension `[x_0..x_{L-1}, x_{L-1}..x_0]`.
pub fn symmetric_extension(x: &Signal) -> Signal {
    let mut out = Vec::with_capacity(2 * x.len());
    out.extend_from_slice(x.values());
    out.extend(x.values().iter().rev());
    Signal::new(out).expect("extension of a valid signal is valid")
}

/// Unnormalized DCT-II computed through the DFT of the even extension.
///
/// With `Y = DFT(ext(x))` (unitary, length `2L`), the identity
/// `f_k = Re(exp(-i pi k / 2L) Y_k) * sqrt(2L) / 2` holds for `k < L`.
pub fn dct_via_even_dft(x: &Signal) -> Result<Vec<f64>> {
    let len = x.len();
    let ext = symmetric_extension(x);
    let bins = dft_forward(&ext)?;
    let rescale = (2.0 * len as f64).sqrt() / 2.0;
    Ok((0..len)
        .map(|k| {
            let phase = Complex64::from_polar(1.0, -PI * k as f64 / (2.0 * len as f64));
            (phase * bins[k]).re * rescale
        })
        .collect())
}
