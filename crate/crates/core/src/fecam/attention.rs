use std::path::Path;

use super::{FecamError, Result};
use crate::nncore::{Shape3, Tensor3};

/// Sigmoid attention weights, one per `(sample, channel, frequency)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AttentionMap(Tensor3);

impl AttentionMap {
    pub(crate) fn new(values: Tensor3) -> Self {
        Self(values)
    }

    pub fn tensor(&self) -> &Tensor3 {
        &self.0
    }

    pub fn values(&self) -> &[f64] {
        self.0.values()
    }

    pub fn shape(&self) -> Shape3 {
        self.0.shape()
    }

    /// Mean over the batch axis as `[frequency][channel]`.
    pub fn batch_mean(&self) -> Vec<Vec<f64>> {
        let s = self.shape();
        let mut out = vec![vec![0.0; s.channels]; s.length];
        for b in 0..s.batch {
            for c in 0..s.channels {
                for (l, &v) in self.0.row(b, c).iter().enumerate() {
                    out[l][c] += v;
                }
            }
        }
        let inv = 1.0 / s.batch.max(1) as f64;
        out.iter_mut().flatten().for_each(|v| *v *= inv);
        out
    }

    /// Concatenates maps along the batch axis.
    pub fn concat(maps: &[AttentionMap]) -> Result<AttentionMap> {
        let first = maps
            .first()
            .ok_or_else(|| FecamError::Config("no attention maps to concatenate".into()))?
            .shape();
        let mut values = Vec::new();
        let mut batch = 0;
        for m in maps {
            let s = m.shape();
            if s.channels != first.channels || s.length != first.length {
                return Err(FecamError::Config(format!(
                    "cannot concatenate attention {s} onto {first}"
                )));
            }
            batch += s.batch;
            values.extend_from_slice(m.values());
        }
        let t = Tensor3::from_vec(Shape3::new(batch, first.channels, first.length), values)?;
        Ok(AttentionMap(t))
    }
}

/// Writes the batch-averaged map: one row per frequency (low to high), one
/// column per channel, under a header of channel indices.
pub fn export_attention(att: &AttentionMap, path: &Path) -> Result<()> {
    if att.shape().batch == 0 {
        return Err(FecamError::Config("attention map has an empty batch".into()));
    }
    let matrix = att.batch_mean();
    let mut w = csv::Writer::from_path(path)?;
    w.write_record((0..att.shape().channels).map(|c| c.to_string()))?;
    for row in &matrix {
        w.write_record(row.iter().map(|v| format!("{v:.8e}")))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a heatmap written by [`export_attention`] back as `[frequency][channel]`.
pub fn read_heatmap_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::Reader::from_path(path)?;
    let width = r.headers()?.len();
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        if rec.len() != width {
            return Err(FecamError::Parse(format!("row {} has {} cells", i + 2, rec.len())));
        }
        rows.push(
            rec.iter()
                .map(|cell| {
                    cell.parse::<f64>()
                        .map_err(|e| FecamError::Parse(format!("row {}: {e}", i + 2)))
                })
                .collect::<Result<Vec<f64>>>()?,
        );
    }
    Ok(rows)
}
