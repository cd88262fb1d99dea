use rand::Rng;

use super::{check_reduction, FecamError, Result};
use crate::nncore::{
    relu_backward, relu_forward, sigmoid_backward, sigmoid_forward, DenseLayer, NnError,
    ParamGroup, Parameterized, Shape3, Tensor3,
};

/// Per-channel temporal mean, laid out as `(B, 1, C)` so a dense layer can
/// act across channels.
pub fn gap(x: &Tensor3) -> Tensor3 {
    let s = x.shape();
    let inv = 1.0 / s.length as f64;
    let means = x.rows().map(|r| r.iter().sum::<f64>() * inv).collect();
    Tensor3::from_vec(Shape3::new(s.batch, 1, s.channels), means).expect("shape by construction")
}

#[derive(Debug, Clone)]
struct SeCache {
    input: Tensor3,
    squeeze: Tensor3,
    hidden: Tensor3,
    activated: Tensor3,
    attention: Tensor3,
}

/// Squeeze-and-excitation over the channel axis: `C -> C/r -> C`.
#[derive(Debug, Clone)]
pub struct SeBaseline {
    channels: usize,
    pub excite1: DenseLayer,
    pub excite2: DenseLayer,
    cache: Option<SeCache>,
}

impl SeBaseline {
    pub fn new<R: Rng + ?Sized>(channels: usize, reduction: usize, rng: &mut R) -> Result<Self> {
        let hidden = check_reduction(channels, reduction, "channel count")?;
        Ok(Self {
            channels,
            excite1: DenseLayer::new(channels, hidden, rng),
            excite2: DenseLayer::new(hidden, channels, rng),
            cache: None,
        })
    }

    pub fn with_zero_excitation(channels: usize, reduction: usize) -> Result<Self> {
        let hidden = check_reduction(channels, reduction, "channel count")?;
        Ok(Self {
            channels,
            excite1: DenseLayer::zeros(channels, hidden),
            excite2: DenseLayer::zeros(hidden, channels),
            cache: None,
        })
    }

    fn run(&self, x: &Tensor3) -> Result<(Tensor3, SeCache)> {
        if x.shape().channels != self.channels {
            return Err(FecamError::Nn(NnError::Shape(format!(
                "SE block built for {} channels, got {}",
                self.channels,
                x.shape().channels
            ))));
        }
        let squeeze = gap(x);
        let hidden = self.excite1.forward(&squeeze)?;
        let activated = relu_forward(&hidden);
        let attention = sigmoid_forward(&self.excite2.forward(&activated)?);
        let mut out = x.clone();
        out.clear_grad();
        let s = x.shape();
        for b in 0..s.batch {
            for c in 0..s.channels {
                let w = attention[(b, 0, c)];
                out.row_mut(b, c).iter_mut().for_each(|v| *v *= w);
            }
        }
        Ok((
            out,
            SeCache {
                input: x.clone(),
                squeeze,
                hidden,
                activated,
                attention,
            },
        ))
    }

    /// Returns the `(B, 1, C)` attention weights and the rescaled input.
    pub fn forward(&self, x: &Tensor3) -> Result<(Tensor3, Tensor3)> {
        let (out, cache) = self.run(x)?;
        Ok((cache.attention, out))
    }

    pub fn forward_train(&mut self, x: &Tensor3) -> Result<(Tensor3, Tensor3)> {
        let (out, cache) = self.run(x)?;
        let att = cache.attention.clone();
        self.cache = Some(cache);
        Ok((att, out))
    }

    pub fn backward(&mut self, upstream: &Tensor3) -> Result<Tensor3> {
        let cache = self.cache.take().ok_or(NnError::MissingCache)?;
        cache.input.ensure_same_shape(upstream)?;
        let s = cache.input.shape();
        let mut dx = Tensor3::zeros(s);
        let mut d_att = Tensor3::zeros(cache.attention.shape());
        for b in 0..s.batch {
            for c in 0..s.channels {
                let w = cache.attention[(b, 0, c)];
                let up = upstream.row(b, c);
                let xr = cache.input.row(b, c);
                d_att[(b, 0, c)] = up.iter().zip(xr).map(|(u, x)| u * x).sum();
                for (d, &u) in dx.row_mut(b, c).iter_mut().zip(up) {
                    *d = u * w;
                }
            }
        }
        let d_pre = sigmoid_backward(&cache.attention, &d_att)?;
        let d_act = self.excite2.backward(&cache.activated, &d_pre)?;
        let d_hidden = relu_backward(&cache.hidden, &d_act)?;
        let d_squeeze = self.excite1.backward(&cache.squeeze, &d_hidden)?;
        let inv = 1.0 / s.length as f64;
        for b in 0..s.batch {
            for c in 0..s.channels {
                let g = d_squeeze[(b, 0, c)] * inv;
                dx.row_mut(b, c).iter_mut().for_each(|d| *d += g);
            }
        }
        Ok(dx)
    }
}

impl Parameterized for SeBaseline {
    fn param_groups(&mut self) -> Vec<ParamGroup<'_>> {
        let mut g = self.excite1.groups("se.excite1");
        g.extend(self.excite2.groups("se.excite2"));
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nncore::grad_check;
    use crate::spectral::{dct_forward, Normalization, Signal};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random(rng: &mut ChaCha8Rng, shape: Shape3) -> Tensor3 {
        Tensor3::from_vec(shape, (0..shape.numel()).map(|_| rng.gen_range(-2.0..2.0)).collect())
            .unwrap()
    }

    #[test]
    fn gap_means() {
        let x = Tensor3::from_vec(Shape3::new(1, 2, 4), vec![1., 2., 3., 4., 5., 5., 5., 5.]).unwrap();
        let z = gap(&x);
        assert_eq!(z.shape(), Shape3::new(1, 1, 2));
        assert_eq!(z.values(), &[2.5, 5.0]);
    }

    #[test]
    fn gap_is_scaled_dc_coefficient() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for len in [1usize, 3, 16, 97] {
            let x = random(&mut rng, Shape3::new(2, 3, len));
            let z = gap(&x);
            for (row, &mean) in x.rows().zip(z.values()) {
                let f = dct_forward(&Signal::try_from(row).unwrap(), Normalization::Unnormalized)
                    .unwrap();
                let expected = mean * len as f64;
                assert!((f.coefficients[0] - expected).abs() <= 1e-12 * expected.abs().max(1.0));
            }
        }
    }

    #[test]
    fn zero_excitation_halves_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let se = SeBaseline::with_zero_excitation(4, 2).unwrap();
        let x = random(&mut rng, Shape3::new(2, 4, 5));
        let (att, out) = se.forward(&x).unwrap();
        assert!(att.values().iter().all(|&a| a == 0.5));
        for (o, v) in out.values().iter().zip(x.values()) {
            assert_eq!(*o, v / 2.0);
        }
    }

    #[test]
    fn attention_in_unit_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let se = SeBaseline::new(6, 3, &mut rng).unwrap();
        let x = random(&mut rng, Shape3::new(3, 6, 8));
        let (att, _) = se.forward(&x).unwrap();
        assert!(att.values().iter().all(|&a| a > 0.0 && a < 1.0));
    }

    #[test]
    fn bad_configuration() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(SeBaseline::new(5, 2, &mut rng).is_err());
        let se = SeBaseline::new(4, 2, &mut rng).unwrap();
        assert!(se.forward(&Tensor3::zeros(Shape3::new(1, 3, 4))).is_err());
    }

    #[test]
    fn backward_without_forward_is_usage_error() {
        let mut se = SeBaseline::with_zero_excitation(2, 1).unwrap();
        let up = Tensor3::zeros(Shape3::new(1, 2, 3));
        assert!(matches!(
            se.backward(&up),
            Err(FecamError::Nn(NnError::MissingCache))
        ));
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let shape = Shape3::new(2, 4, 6);
        let mut se = SeBaseline::new(4, 2, &mut rng).unwrap();
        let x = random(&mut rng, shape);
        let probe = random(&mut rng, shape);
        let loss = |se: &SeBaseline, x: &Tensor3| -> f64 {
            let (_, out) = se.forward(x).unwrap();
            out.values().iter().zip(probe.values()).map(|(a, b)| a * b).sum()
        };
        se.zero_grad();
        se.forward_train(&x).unwrap();
        let dx = se.backward(&probe).unwrap();
        let r = grad_check(
            |v| loss(&se, &Tensor3::from_vec(shape, v.to_vec()).unwrap()),
            x.values(),
            dx.values(),
            1e-5,
        );
        assert!(r.passes(1e-4), "input {r:?}");

        let analytic = se.flat_grads();
        let params = se.flat_params();
        let mut probe_se = se.clone();
        let r = grad_check(
            |p| {
                probe_se.set_flat_params(p).unwrap();
                loss(&probe_se, &x)
            },
            &params,
            &analytic,
            1e-5,
        );
        assert!(r.passes(1e-4), "params {r:?}");
    }
}
