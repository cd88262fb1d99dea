use super::{DataError, Result};

/// A multichannel series sampled at strictly increasing timestamps.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSeries {
    /// Milliseconds since the Unix epoch.
    timestamps: Vec<i64>,
    channel_names: Vec<String>,
    // values[t * channels + c]
    values: Vec<f64>,
}

impl RawSeries {
    pub fn new(timestamps: Vec<i64>, channel_names: Vec<String>, values: Vec<f64>) -> Result<Self> {
        let c = channel_names.len();
        if c == 0 {
            return Err(DataError::Invalid("series needs at least one channel".into()));
        }
        if values.len() != timestamps.len() * c {
            return Err(DataError::Invalid(format!(
                "{} values for {} rows x {c} channels",
                values.len(),
                timestamps.len()
            )));
        }
        if let Some(pos) = timestamps.windows(2).position(|w| w[1] <= w[0]) {
            return Err(DataError::Invalid(format!(
                "timestamps not strictly increasing at row {}",
                pos + 1
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(DataError::Invalid("series contains non-finite values".into()));
        }
        Ok(Self {
            timestamps,
            channel_names,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    pub fn channels(&self) -> usize {
        self.channel_names.len()
    }

    pub fn channel_names(&self) -> &[String] {
        &self.channel_names
    }

    pub fn timestamps(&self) -> &[i64] {
        &self.timestamps
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, t: usize, c: usize) -> f64 {
        self.values[t * self.channels() + c]
    }

    pub fn row(&self, t: usize) -> &[f64] {
        let c = self.channels();
        &self.values[t * c..(t + 1) * c]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.len()).map(|t| self.value(t, c)).collect()
    }

    /// Rows `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> RawSeries {
        let c = self.channels();
        RawSeries {
            timestamps: self.timestamps[start..end].to_vec(),
            channel_names: self.channel_names.clone(),
            values: self.values[start * c..end * c].to_vec(),
        }
    }

    /// Keeps only the named channels, in the order given.
    pub fn select_channels<S: AsRef<str>>(&self, names: &[S]) -> Result<RawSeries> {
        let idx = names
            .iter()
            .map(|n| {
                self.channel_names
                    .iter()
                    .position(|c| c == n.as_ref())
                    .ok_or_else(|| DataError::MissingColumn(n.as_ref().to_string()))
            })
            .collect::<Result<Vec<usize>>>()?;
        let mut values = Vec::with_capacity(self.len() * idx.len());
        for t in 0..self.len() {
            values.extend(idx.iter().map(|&c| self.value(t, c)));
        }
        Ok(RawSeries {
            timestamps: self.timestamps.clone(),
            channel_names: idx.iter().map(|&c| self.channel_names[c].clone()).collect(),
            values,
        })
    }

    pub(crate) fn map_values(&self, f: impl Fn(usize, f64) -> f64) -> RawSeries {
        let c = self.channels();
        RawSeries {
            timestamps: self.timestamps.clone(),
            channel_names: self.channel_names.clone(),
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(k, &v)| f(k % c, v))
                .collect(),
        }
    }
}
