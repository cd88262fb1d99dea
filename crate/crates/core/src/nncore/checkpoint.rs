//! Parameter checkpoints.
//!
//! A checkpoint is a single JSON document:
//!
//! ```json
//! {
//!   "magic": "FECAM-CKPT",
//!   "version": 1,
//!   "metadata": { "lookback": "96", ... },
//!   "arrays": [ { "name": "fecam.excite1.weight", "shape": [96, 48], "data": [...] } ]
//! }
//! ```
//!
//! `data` is row-major and its length must equal the product of `shape`.
//! Numbers are written in shortest round-trip form, so a save/load cycle is
//! bit-exact.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{NnError, ParamGroup, Result};

pub const CHECKPOINT_MAGIC: &str = "FECAM-CKPT";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedArray {
    pub name: String,
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub magic: String,
    pub version: u32,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
    pub arrays: Vec<NamedArray>,
}

impl Default for Checkpoint {
    fn default() -> Self {
        Self {
            magic: CHECKPOINT_MAGIC.to_string(),
            version: CHECKPOINT_VERSION,
            metadata: BTreeMap::new(),
            arrays: Vec::new(),
        }
    }
}

impl Checkpoint {
    pub fn from_groups(groups: &[ParamGroup<'_>]) -> Self {
        Self {
            arrays: groups
                .iter()
                .map(|g| NamedArray {
                    name: g.name.clone(),
                    shape: g.shape.clone(),
                    data: g.values.to_vec(),
                })
                .collect(),
            ..Self::default()
        }
    }

    /// Copies stored arrays into `groups`, matching by name and shape.
    pub fn restore_groups(&self, groups: &mut [ParamGroup<'_>]) -> Result<()> {
        for g in groups.iter_mut() {
            let a = self.get(&g.name)?;
            if a.shape != g.shape {
                return Err(NnError::Checkpoint(format!(
                    "`{}` has shape {:?}, expected {:?}",
                    g.name, a.shape, g.shape
                )));
            }
            g.values.copy_from_slice(&a.data);
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&NamedArray> {
        self.arrays
            .iter()
            .find(|a| a.name == name)
            .ok_or_else(|| NnError::Checkpoint(format!("missing array `{name}`")))
    }

    pub fn has(&self, name: &str) -> bool {
        self.arrays.iter().any(|a| a.name == name)
    }

    fn validate(&self) -> Result<()> {
        if self.magic != CHECKPOINT_MAGIC {
            return Err(NnError::Checkpoint(format!("bad magic `{}`", self.magic)));
        }
        if self.version != CHECKPOINT_VERSION {
            return Err(NnError::Checkpoint(format!(
                "unsupported version {} (expected {CHECKPOINT_VERSION})",
                self.version
            )));
        }
        for a in &self.arrays {
            let n: usize = a.shape.iter().product();
            if n != a.data.len() {
                return Err(NnError::Checkpoint(format!(
                    "`{}` declares {n} elements but stores {}",
                    a.name,
                    a.data.len()
                )));
            }
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.validate()?;
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let ckpt: Checkpoint = serde_json::from_str(&text)?;
        ckpt.validate()?;
        Ok(ckpt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nncore::{DenseLayer, Parameterized};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip_is_bit_exact() {
        let mut layer = DenseLayer::new(7, 3, &mut ChaCha8Rng::seed_from_u64(1));
        let mut ckpt = Checkpoint::from_groups(&layer.param_groups());
        ckpt.metadata.insert("note".into(), "x".into());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ckpt.json");
        ckpt.save(&path).unwrap();
        let loaded = Checkpoint::load(&path).unwrap();
        assert_eq!(loaded, ckpt);

        let mut fresh = DenseLayer::zeros(7, 3);
        loaded.restore_groups(&mut fresh.param_groups()).unwrap();
        assert_eq!(fresh.weight(), layer.weight());
        assert_eq!(fresh.bias(), layer.bias());
    }

    #[test]
    fn rejects_bad_magic_and_shapes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        let mut ckpt = Checkpoint::default();
        ckpt.magic = "NOPE".into();
        std::fs::write(&path, serde_json::to_string(&ckpt).unwrap()).unwrap();
        assert!(Checkpoint::load(&path).is_err());

        let mut ckpt = Checkpoint::default();
        ckpt.arrays.push(NamedArray {
            name: "w".into(),
            shape: vec![2, 2],
            data: vec![0.0; 3],
        });
        assert!(ckpt.save(&path).is_err());

        let mut layer = DenseLayer::zeros(2, 2);
        let mut other = DenseLayer::zeros(3, 2);
        let c = Checkpoint::from_groups(&other.param_groups());
        assert!(c.restore_groups(&mut layer.param_groups()).is_err());
    }
}
