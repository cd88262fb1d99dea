use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ForecastError, Result, TrainConfig};
use crate::fecam::{AttentionMap, FecamLayer};
use crate::nncore::{Checkpoint, DenseLayer, NnError, ParamGroup, Parameterized, Tensor3};

/// Optional FECAM block followed by a projection `L -> O` shared by all channels.
#[derive(Debug, Clone)]
pub struct ForecastModel {
    pub fecam: Option<FecamLayer>,
    pub projection: DenseLayer,
    projection_input: Option<Tensor3>,
}

impl ForecastModel {
    /// Seeded initialization. The projection is drawn first, so a FECAM model
    /// and a plain model built from the same seed share projection weights.
    pub fn new(cfg: &TrainConfig, with_fecam: bool) -> Result<Self> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let projection = DenseLayer::new(cfg.lookback, cfg.horizon, &mut rng);
        let fecam = if with_fecam {
            Some(FecamLayer::new(cfg.lookback, cfg.reduction, &mut rng)?)
        } else {
            None
        };
        Self::from_parts(fecam, projection)
    }

    pub fn from_parts(fecam: Option<FecamLayer>, projection: DenseLayer) -> Result<Self> {
        if let Some(f) = &fecam {
            if f.seq_len() != projection.in_dim() {
                return Err(ForecastError::Config(format!(
                    "FECAM length {} does not match projection input {}",
                    f.seq_len(),
                    projection.in_dim()
                )));
            }
        }
        Ok(Self {
            fecam,
            projection,
            projection_input: None,
        })
    }

    pub fn lookback(&self) -> usize {
        self.projection.in_dim()
    }

    pub fn horizon(&self) -> usize {
        self.projection.out_dim()
    }

    pub fn has_fecam(&self) -> bool {
        self.fecam.is_some()
    }

    fn check_input(&self, x: &Tensor3) -> Result<()> {
        if x.shape().length != self.lookback() {
            return Err(NnError::Shape(format!(
                "model expects lookback {}, got {}",
                self.lookback(),
                x.shape().length
            ))
            .into());
        }
        Ok(())
    }

    /// Prediction together with the attention map (when FECAM is present).
    pub fn forward_with_attention(&self, x: &Tensor3) -> Result<(Tensor3, Option<AttentionMap>)> {
        self.check_input(x)?;
        let (features, att) = match &self.fecam {
            Some(f) => {
                let (out, att) = f.forward(x)?;
                (out, Some(att))
            }
            None => (x.clone(), None),
        };
        Ok((self.projection.forward(&features)?, att))
    }

    pub fn forward(&self, x: &Tensor3) -> Result<Tensor3> {
        Ok(self.forward_with_attention(x)?.0)
    }

    pub fn forward_train(&mut self, x: &Tensor3) -> Result<Tensor3> {
        self.check_input(x)?;
        let features = match &mut self.fecam {
            Some(f) => f.forward_train(x)?.0,
            None => x.clone(),
        };
        let y = self.projection.forward(&features)?;
        self.projection_input = Some(features);
        Ok(y)
    }

    pub fn backward(&mut self, upstream: &Tensor3) -> Result<Tensor3> {
        let features = self.projection_input.take().ok_or(NnError::MissingCache)?;
        let d_features = self.projection.backward(&features, upstream)?;
        match &mut self.fecam {
            Some(f) => Ok(f.backward(&d_features)?),
            None => Ok(d_features),
        }
    }

    pub fn to_checkpoint(&mut self, metadata: BTreeMap<String, String>) -> Checkpoint {
        let mut ckpt = Checkpoint::from_groups(&self.param_groups());
        ckpt.metadata = metadata;
        if let Some(f) = &self.fecam {
            ckpt.metadata.insert("reduction".into(), f.reduction().to_string());
        }
        ckpt.metadata.insert("lookback".into(), self.lookback().to_string());
        ckpt.metadata.insert("horizon".into(), self.horizon().to_string());
        ckpt
    }

    /// Rebuilds a model from array shapes alone; FECAM is present iff its
    /// arrays are.
    pub fn from_checkpoint(ckpt: &Checkpoint) -> Result<Self> {
        let proj = ckpt.get("projection.weight")?;
        let [lookback, horizon] = proj.shape[..] else {
            return Err(NnError::Checkpoint("projection.weight must be 2-D".into()).into());
        };
        let fecam = if ckpt.has("fecam.excite1.weight") {
            let w = ckpt.get("fecam.excite1.weight")?;
            let hidden = match w.shape[..] {
                [l, h] if l == lookback && h > 0 && lookback % h == 0 => h,
                _ => {
                    return Err(NnError::Checkpoint(format!(
                        "fecam.excite1.weight shape {:?} inconsistent with lookback {lookback}",
                        w.shape
                    ))
                    .into())
                }
            };
            Some(FecamLayer::with_zero_excitation(lookback, lookback / hidden)?)
        } else {
            None
        };
        let mut model = Self::from_parts(fecam, DenseLayer::zeros(lookback, horizon))?;
        ckpt.restore_groups(&mut model.param_groups())?;
        Ok(model)
    }
}

impl Parameterized for ForecastModel {
    fn param_groups(&mut self) -> Vec<ParamGroup<'_>> {
        let mut groups = match &mut self.fecam {
            Some(f) => f.groups("fecam"),
            None => Vec::new(),
        };
        groups.extend(self.projection.groups("projection"));
        groups
    }
}
