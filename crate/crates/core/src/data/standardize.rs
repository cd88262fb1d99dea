use serde::{Deserialize, Serialize};

use super::{ChannelStats, DataError, RawSeries, Result};

/// Per-channel z-scoring with statistics taken from the training slice only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    names: Vec<String>,
    mean: Vec<f64>,
    std: Vec<f64>,
}

impl Standardizer {
    /// Population mean and standard deviation of every channel.
    pub fn fit(train: &RawSeries) -> Result<Self> {
        if train.is_empty() {
            return Err(DataError::TooShort {
                what: "training slice".into(),
                len: 0,
                needed: 1,
            });
        }
        let n = train.len() as f64;
        let c = train.channels();
        let mut mean = vec![0.0; c];
        for t in 0..train.len() {
            for (m, v) in mean.iter_mut().zip(train.row(t)) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; c];
        for t in 0..train.len() {
            for ((s, v), m) in var.iter_mut().zip(train.row(t)).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        let std: Vec<f64> = var.iter().map(|v| (v / n).sqrt()).collect();
        if let Some(k) = std.iter().position(|&s| !(s > 1e-12)) {
            return Err(DataError::DegenerateChannel(train.channel_names()[k].clone()));
        }
        Ok(Self {
            names: train.channel_names().to_vec(),
            mean,
            std,
        })
    }

    fn check(&self, series: &RawSeries) -> Result<()> {
        if series.channel_names() != self.names.as_slice() {
            return Err(DataError::Invalid(format!(
                "standardizer fitted on {:?}, applied to {:?}",
                self.names,
                series.channel_names()
            )));
        }
        Ok(())
    }

    pub fn transform(&self, series: &RawSeries) -> Result<RawSeries> {
        self.check(series)?;
        Ok(series.map_values(|c, v| (v - self.mean[c]) / self.std[c]))
    }

    pub fn inverse_transform(&self, series: &RawSeries) -> Result<RawSeries> {
        self.check(series)?;
        Ok(series.map_values(|c, v| v * self.std[c] + self.mean[c]))
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn std(&self) -> &[f64] {
        &self.std
    }

    pub fn stats(&self) -> Vec<ChannelStats> {
        self.names
            .iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(name, (&mean, &std))| ChannelStats {
                name: name.clone(),
                mean,
                std,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{synth_series, SynthKind};

    #[test]
    fn standardized_train_is_unit_scale() {
        let s = synth_series(SynthKind::SinusoidMix, 500, 3, 0.2, 4);
        let z = Standardizer::fit(&s).unwrap();
        let t = z.transform(&s).unwrap();
        let check = Standardizer::fit(&t).unwrap();
        for (m, sd) in check.mean().iter().zip(check.std()) {
            assert!(m.abs() < 1e-9, "mean {m}");
            assert!((sd - 1.0).abs() < 1e-9, "std {sd}");
        }
    }

    #[test]
    fn inverse_round_trip() {
        let s = synth_series(SynthKind::Ramp, 50, 2, 0.5, 1);
        let z = Standardizer::fit(&s).unwrap();
        let back = z.inverse_transform(&z.transform(&s).unwrap()).unwrap();
        for (a, b) in s.values().iter().zip(back.values()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn test_slice_uses_train_statistics() {
        let s = synth_series(SynthKind::Ramp, 100, 1, 0.0, 0);
        let train = s.slice(0, 60);
        let test = s.slice(80, 100);
        let z = Standardizer::fit(&train).unwrap();
        let zt = z.transform(&test).unwrap();
        let own = Standardizer::fit(&zt).unwrap();
        assert!(own.mean()[0] > 1.0);

        let mut perturbed: Vec<f64> = s.values().to_vec();
        perturbed[90] += 1e6;
        let s2 = RawSeries::new(s.timestamps().to_vec(), s.channel_names().to_vec(), perturbed).unwrap();
        assert_eq!(Standardizer::fit(&s2.slice(0, 60)).unwrap(), z);
    }

    #[test]
    fn zero_variance_channel_named() {
        let s = RawSeries::new(
            vec![0, 1, 2],
            vec!["ok".into(), "flat".into()],
            vec![1.0, 5.0, 2.0, 5.0, 3.0, 5.0],
        )
        .unwrap();
        match Standardizer::fit(&s) {
            Err(DataError::DegenerateChannel(name)) => assert_eq!(name, "flat"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
