use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    dct_basis, dct_forward, dct_inverse, dft_forward, dft_inverse, Normalization, Result, Signal,
    SpectralError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformKind {
    Dct,
    Dft,
}

/// Keep the `n` lowest-frequency components, invert, and report the L2 error.
///
/// For the DFT the DC bin is kept together with the `ceil((n-1)/2)` lowest
/// conjugate pairs, so the reconstruction is real.
pub fn reconstruct_truncated(x: &Signal, n: usize, kind: TransformKind) -> Result<(Signal, f64)> {
    let len = x.len();
    if n == 0 || n > len {
        return Err(SpectralError::ComponentCount { n, len });
    }
    let recon = match kind {
        TransformKind::Dct => {
            let mut spec = dct_forward(x, Normalization::Orthonormal)?;
            spec.coefficients[n..].iter_mut().for_each(|c| *c = 0.0);
            dct_inverse(&spec)?
        }
        TransformKind::Dft => {
            let mut bins = dft_forward(x)?;
            let pairs = n / 2; // ceil((n - 1) / 2)
            for (k, b) in bins.iter_mut().enumerate() {
                let freq = k.min(len - k);
                if freq > pairs {
                    *b = Complex64::new(0.0, 0.0);
                }
            }
            dft_inverse(&bins)?
        }
    };
    let err = x.l2_distance(&recon);
    Ok((recon, err))
}

/// One row of a DCT-vs-DFT comparison at truncation `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompactionRow {
    pub n: usize,
    pub dct_err: f64,
    pub dft_err: f64,
}

/// Same row layout as [`CompactionRow`]; errors are max-abs over the two
/// samples at each end.
pub type BoundaryReport = CompactionRow;

pub fn boundary_overshoot_compare(x: &Signal, n: usize) -> Result<BoundaryReport> {
    let len = x.len();
    let mut edge: Vec<usize> = [0, 1, len.saturating_sub(2), len - 1]
        .into_iter()
        .filter(|&i| i < len)
        .collect();
    edge.sort_unstable();
    edge.dedup();
    let boundary_err = |kind| -> Result<f64> {
        let (recon, _) = reconstruct_truncated(x, n, kind)?;
        Ok(edge
            .iter()
            .map(|&i| (x.values()[i] - recon.values()[i]).abs())
            .fold(0.0, f64::max))
    };
    Ok(CompactionRow {
        n,
        dct_err: boundary_err(TransformKind::Dct)?,
        dft_err: boundary_err(TransformKind::Dft)?,
    })
}

/// L2 reconstruction error of both transforms for every count in `ns`, sorted by `n`.
pub fn energy_compaction_report(x: &Signal, ns: &[usize]) -> Result<Vec<CompactionRow>> {
    if ns.is_empty() {
        return Err(SpectralError::ComponentCount { n: 0, len: x.len() });
    }
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();
    ns.into_iter()
        .map(|n| {
            Ok(CompactionRow {
                n,
                dct_err: reconstruct_truncated(x, n, TransformKind::Dct)?.1,
                dft_err: reconstruct_truncated(x, n, TransformKind::Dft)?.1,
            })
        })
        .collect()
}

/// Writes rows under the header `n,dct_err,dft_err`.
pub fn write_compaction_csv(path: &Path, rows: &[CompactionRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["n", "dct_err", "dft_err"])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            format!("{:.12e}", r.dct_err),
            format!("{:.12e}", r.dft_err),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Sum of the three lowest unnormalized DCT basis vectors.
pub fn low_frequency_fixture(len: usize) -> Result<Signal> {
    let values = (0..len)
        .map(|i| (0..3).map(|l| dct_basis(l, i, len)).sum::<Result<f64>>())
        .collect::<Result<Vec<f64>>>()?;
    Signal::new(values)
}

/// `0, 1, ..., len - 1`.
pub fn ramp_fixture(len: usize) -> Result<Signal> {
    Signal::new((0..len).map(|i| i as f64).collect())
}
