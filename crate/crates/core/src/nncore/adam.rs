use serde::{Deserialize, Serialize};

use super::{NnError, ParamGroup, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            lr: 1e-4,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

impl AdamConfig {
    pub fn with_lr(lr: f64) -> Self {
        Self {
            lr,
            ..Self::default()
        }
    }
}

/// Bias-corrected Adam moments for a fixed parameter count.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub config: AdamConfig,
    m: Vec<f64>,
    v: Vec<f64>,
    step: u64,
}

impl AdamState {
    pub fn new(config: AdamConfig, param_count: usize) -> Self {
        Self {
            config,
            m: vec![0.0; param_count],
            v: vec![0.0; param_count],
            step: 0,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    pub fn param_count(&self) -> usize {
        self.m.len()
    }

    pub fn set_lr(&mut self, lr: f64) {
        self.config.lr = lr;
    }

    /// One update over a flat parameter vector.
    pub fn step_flat(&mut self, params: &mut [f64], grads: &[f64]) -> Result<()> {
        self.check(params.len())?;
        if grads.len() != params.len() {
            return Err(NnError::ParamCount {
                expected: params.len(),
                actual: grads.len(),
            });
        }
        self.step += 1;
        let (c1, c2) = self.corrections();
        update(&self.config, c1, c2, params, grads, &mut self.m, &mut self.v);
        Ok(())
    }

    /// One update across parameter groups, visited in order.
    pub fn step(&mut self, groups: &mut [ParamGroup<'_>]) -> Result<()> {
        let total: usize = groups.iter().map(|g| g.values.len()).sum();
        self.check(total)?;
        self.step += 1;
        let (c1, c2) = self.corrections();
        let mut offset = 0;
        for g in groups.iter_mut() {
            let n = g.values.len();
            update(
                &self.config,
                c1,
                c2,
                g.values,
                g.grads,
                &mut self.m[offset..offset + n],
                &mut self.v[offset..offset + n],
            );
            offset += n;
        }
        Ok(())
    }

    fn check(&self, n: usize) -> Result<()> {
        if n != self.m.len() {
            return Err(NnError::ParamCount {
                expected: self.m.len(),
                actual: n,
            });
        }
        Ok(())
    }

    fn corrections(&self) -> (f64, f64) {
        let t = self.step as i32;
        (
            1.0 - self.config.beta1.powi(t),
            1.0 - self.config.beta2.powi(t),
        )
    }
}

fn update(
    cfg: &AdamConfig,
    c1: f64,
    c2: f64,
    params: &mut [f64],
    grads: &[f64],
    m: &mut [f64],
    v: &mut [f64],
) {
    for (((p, &g), m), v) in params.iter_mut().zip(grads).zip(m).zip(v) {
        *m = cfg.beta1 * *m + (1.0 - cfg.beta1) * g;
        *v = cfg.beta2 * *v + (1.0 - cfg.beta2) * g * g;
        let m_hat = *m / c1;
        let v_hat = *v / c2;
        *p -= cfg.lr * m_hat / (v_hat.sqrt() + cfg.eps);
    }
}
