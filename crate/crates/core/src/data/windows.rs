use crate::nncore::{Shape3, Tensor3};

use super::{DataError, RawSeries, Result};

/// Sliding `(X, Y)` pairs over one split: `X = [t, t+L)`, `Y = [t+L, t+L+O)`.
///
/// Windows are materialized lazily per batch from a channel-major copy of
/// the slice, so long series do not pay `N * (L + O)` memory up front.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowedDataset {
    channels: usize,
    lookback: usize,
    horizon: usize,
    rows: usize,
    // by_channel[c * rows + t]
    by_channel: Vec<f64>,
    starts: Vec<usize>,
}

/// `N = floor((T - L - O) / stride) + 1` windows.
pub fn make_windows(
    series: &RawSeries,
    lookback: usize,
    horizon: usize,
    stride: usize,
) -> Result<WindowedDataset> {
    if lookback == 0 || horizon == 0 || stride == 0 {
        return Err(DataError::Invalid(format!(
            "lookback {lookback}, horizon {horizon} and stride {stride} must be positive"
        )));
    }
    let needed = lookback + horizon;
    if series.len() < needed {
        return Err(DataError::TooShort {
            what: "windowed slice".into(),
            len: series.len(),
            needed,
        });
    }
    let rows = series.len();
    let channels = series.channels();
    let mut by_channel = vec![0.0; rows * channels];
    for t in 0..rows {
        for (c, &v) in series.row(t).iter().enumerate() {
            by_channel[c * rows + t] = v;
        }
    }
    let starts = (0..=rows - needed).step_by(stride).collect();
    Ok(WindowedDataset {
        channels,
        lookback,
        horizon,
        rows,
        by_channel,
        starts,
    })
}

impl WindowedDataset {
    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn lookback(&self) -> usize {
        self.lookback
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Row offset of window `n` inside its slice.
    pub fn start(&self, n: usize) -> usize {
        self.starts[n]
    }

    fn gather(&self, indices: &[usize], offset: usize, width: usize) -> Tensor3 {
        let mut values = Vec::with_capacity(indices.len() * self.channels * width);
        for &n in indices {
            let t0 = self.starts[n] + offset;
            for c in 0..self.channels {
                let base = c * self.rows + t0;
                values.extend_from_slice(&self.by_channel[base..base + width]);
            }
        }
        Tensor3::from_vec(Shape3::new(indices.len(), self.channels, width), values)
            .expect("shape by construction")
    }

    /// Inputs `(n, C, L)` and targets `(n, C, O)` for the given windows.
    pub fn batch(&self, indices: &[usize]) -> (Tensor3, Tensor3) {
        (
            self.gather(indices, 0, self.lookback),
            self.gather(indices, self.lookback, self.horizon),
        )
    }

    pub fn inputs(&self, indices: &[usize]) -> Tensor3 {
        self.gather(indices, 0, self.lookback)
    }

    pub fn targets(&self, indices: &[usize]) -> Tensor3 {
        self.gather(indices, self.lookback, self.horizon)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(t: usize, c: usize) -> RawSeries {
        RawSeries::new(
            (0..t as i64).collect(),
            (0..c).map(|k| format!("c{k}")).collect(),
            (0..t * c).map(|v| v as f64).collect(),
        )
        .unwrap()
    }

    #[test]
    fn window_count() {
        let ds = make_windows(&series(10, 1), 3, 2, 1).unwrap();
        assert_eq!(ds.len(), 6);
        let ds = make_windows(&series(10, 1), 3, 2, 2).unwrap();
        assert_eq!(ds.len(), 3);
    }

    #[test]
    fn first_pair_is_verbatim() {
        let s = series(10, 2);
        let ds = make_windows(&s, 3, 2, 1).unwrap();
        let (x, y) = ds.batch(&[0]);
        for c in 0..2 {
            let col = s.column(c);
            assert_eq!(x.row(0, c), &col[0..3]);
            assert_eq!(y.row(0, c), &col[3..5]);
        }
    }

    #[test]
    fn targets_follow_inputs_without_gap() {
        let s = series(40, 3);
        let ds = make_windows(&s, 7, 5, 1).unwrap();
        assert_eq!(ds.len(), 40 - 7 - 5 + 1);
        for n in 0..ds.len() {
            let (x, y) = ds.batch(&[n]);
            for c in 0..3 {
                let col = s.column(c);
                let t = ds.start(n);
                assert_eq!(x.row(0, c), &col[t..t + 7]);
                assert_eq!(y.row(0, c), &col[t + 7..t + 12]);
            }
        }
    }

    #[test]
    fn too_short_rejected() {
        assert!(matches!(
            make_windows(&series(4, 1), 3, 2, 1),
            Err(DataError::TooShort { len: 4, needed: 5, .. })
        ));
    }
}
