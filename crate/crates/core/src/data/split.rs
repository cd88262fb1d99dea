use serde::{Deserialize, Serialize};

use super::{DataError, RawSeries, Result};

/// Proportional train/validation/test weights; normalized internally.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitRatios {
    pub train: f64,
    pub val: f64,
    pub test: f64,
}

impl SplitRatios {
    pub fn new(train: f64, val: f64, test: f64) -> Result<Self> {
        let ok = [train, val, test].iter().all(|r| r.is_finite() && *r > 0.0);
        if !ok {
            return Err(DataError::InvalidRatios(format!(
                "{train}:{val}:{test} (all parts must be positive)"
            )));
        }
        Ok(Self { train, val, test })
    }

    /// 3:1:1, used for the ETT family.
    pub fn ett() -> Self {
        Self::new(3.0, 1.0, 1.0).unwrap()
    }

    /// 7:2:2 taken as proportions (7/11, 2/11, 2/11).
    pub fn literal_722() -> Self {
        Self::new(7.0, 2.0, 2.0).unwrap()
    }

    /// 0.7/0.1/0.2, the split used by most public baseline code.
    pub fn conventional() -> Self {
        Self::new(0.7, 0.1, 0.2).unwrap()
    }

    /// Accepts `a:b:c` or one of the preset names `ett`, `literal`, `conventional`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ett" => return Ok(Self::ett()),
            "literal" => return Ok(Self::literal_722()),
            "conventional" => return Ok(Self::conventional()),
            _ => {}
        }
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| DataError::InvalidRatios(format!("cannot parse `{s}`")))?;
        match parts.as_slice() {
            [a, b, c] => Self::new(*a, *b, *c),
            _ => Err(DataError::InvalidRatios(format!("`{s}` needs three parts"))),
        }
    }

    /// `(train, val, test)` row counts for a series of `total` rows:
    /// validation and test get `floor(ratio * total)`, train the remainder.
    pub fn sizes(&self, total: usize) -> (usize, usize, usize) {
        let sum = self.train + self.val + self.test;
        let part = |r: f64| ((r / sum) * total as f64 + 1e-9).floor() as usize;
        let val = part(self.val);
        let test = part(self.test);
        (total - val - test, val, test)
    }
}

/// Contiguous, ordered, non-overlapping train/val/test slices. Every slice
/// must hold at least `min_len` rows (one lookback plus one horizon).
pub fn chronological_split(
    series: &RawSeries,
    ratios: SplitRatios,
    min_len: usize,
) -> Result<(RawSeries, RawSeries, RawSeries)> {
    let (n_train, n_val, n_test) = ratios.sizes(series.len());
    for (what, len) in [("train", n_train), ("validation", n_val), ("test", n_test)] {
        if len < min_len {
            return Err(DataError::TooShort {
                what: format!("{what} slice"),
                len,
                needed: min_len,
            });
        }
    }
    Ok((
        series.slice(0, n_train),
        series.slice(n_train, n_train + n_val),
        series.slice(n_train + n_val, series.len()),
    ))
}
