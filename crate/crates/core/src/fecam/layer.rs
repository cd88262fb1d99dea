use std::sync::Arc;

use rand::Rng;

use super::{check_reduction, AttentionMap, FecamError, Result};
use crate::nncore::{
    relu_backward, relu_forward, sigmoid_backward, sigmoid_forward, DenseLayer, NnError,
    ParamGroup, Parameterized, Tensor3,
};
use crate::spectral::{dct_matrix, DctMatrix, Normalization};

#[derive(Debug, Clone)]
struct FecamCache {
    input: Tensor3,
    freq: Tensor3,
    hidden: Tensor3,
    activated: Tensor3,
    attention: Tensor3,
}

/// DCT channel attention for sequences of a fixed length.
#[derive(Debug, Clone)]
pub struct FecamLayer {
    seq_len: usize,
    reduction: usize,
    pub excite1: DenseLayer,
    pub excite2: DenseLayer,
    dct: Arc<DctMatrix>,
    cache: Option<FecamCache>,
}

impl FecamLayer {
    pub fn new<R: Rng + ?Sized>(seq_len: usize, reduction: usize, rng: &mut R) -> Result<Self> {
        let hidden = check_reduction(seq_len, reduction, "sequence length")?;
        let excite1 = DenseLayer::new(seq_len, hidden, rng);
        let excite2 = DenseLayer::new(hidden, seq_len, rng);
        Self::assemble(seq_len, reduction, excite1, excite2)
    }

    /// Both excitation layers zeroed, so the attention is exactly 0.5.
    pub fn with_zero_excitation(seq_len: usize, reduction: usize) -> Result<Self> {
        let hidden = check_reduction(seq_len, reduction, "sequence length")?;
        Self::assemble(
            seq_len,
            reduction,
            DenseLayer::zeros(seq_len, hidden),
            DenseLayer::zeros(hidden, seq_len),
        )
    }

    pub fn from_parts(
        seq_len: usize,
        reduction: usize,
        excite1: DenseLayer,
        excite2: DenseLayer,
    ) -> Result<Self> {
        let hidden = check_reduction(seq_len, reduction, "sequence length")?;
        let dims_ok = excite1.in_dim() == seq_len
            && excite1.out_dim() == hidden
            && excite2.in_dim() == hidden
            && excite2.out_dim() == seq_len;
        if !dims_ok {
            return Err(FecamError::Config(format!(
                "excitation layers {}x{} / {}x{} do not fit L={seq_len}, r={reduction}",
                excite1.in_dim(),
                excite1.out_dim(),
                excite2.in_dim(),
                excite2.out_dim()
            )));
        }
        Self::assemble(seq_len, reduction, excite1, excite2)
    }

    fn assemble(
        seq_len: usize,
        reduction: usize,
        excite1: DenseLayer,
        excite2: DenseLayer,
    ) -> Result<Self> {
        Ok(Self {
            seq_len,
            reduction,
            excite1,
            excite2,
            dct: dct_matrix(seq_len, Normalization::Orthonormal)?,
            cache: None,
        })
    }

    pub fn seq_len(&self) -> usize {
        self.seq_len
    }

    pub fn reduction(&self) -> usize {
        self.reduction
    }

    fn check_len(&self, x: &Tensor3) -> Result<()> {
        if x.shape().length != self.seq_len {
            return Err(FecamError::Nn(NnError::Shape(format!(
                "FECAM layer built for length {}, got {}",
                self.seq_len,
                x.shape().length
            ))));
        }
        Ok(())
    }

    /// Orthonormal DCT of every `(b, c)` row, stacked in channel order.
    pub fn frequency_map(&self, x: &Tensor3) -> Result<Tensor3> {
        self.check_len(x)?;
        let mut out = Tensor3::zeros(x.shape());
        for (row, dst) in x
            .rows()
            .zip(out.values_mut().chunks_exact_mut(self.seq_len))
        {
            self.dct.apply_forward(row, dst);
        }
        Ok(out)
    }

    fn run(&self, x: &Tensor3) -> Result<(Tensor3, FecamCache)> {
        let freq = self.frequency_map(x)?;
        let hidden = self.excite1.forward(&freq)?;
        let activated = relu_forward(&hidden);
        let attention = sigmoid_forward(&self.excite2.forward(&activated)?);
        let out = x.zip_map(&attention, |v, a| v * a)?;
        Ok((
            out,
            FecamCache {
                input: x.clone(),
                freq,
                hidden,
                activated,
                attention,
            },
        ))
    }

    /// Inference pass; no activations are retained.
    pub fn forward(&self, x: &Tensor3) -> Result<(Tensor3, AttentionMap)> {
        let (out, cache) = self.run(x)?;
        Ok((out, AttentionMap::new(cache.attention)))
    }

    /// Forward pass that keeps what [`backward`](Self::backward) needs.
    pub fn forward_train(&mut self, x: &Tensor3) -> Result<(Tensor3, AttentionMap)> {
        let (out, cache) = self.run(x)?;
        let att = AttentionMap::new(cache.attention.clone());
        self.cache = Some(cache);
        Ok((out, att))
    }

    /// Consumes the cached forward pass, accumulates excitation gradients
    /// (summed over the batch) and returns `dL/dx`.
    pub fn backward(&mut self, upstream: &Tensor3) -> Result<Tensor3> {
        let cache = self.cache.take().ok_or(NnError::MissingCache)?;
        cache.input.ensure_same_shape(upstream)?;
        let mut dx = upstream.zip_map(&cache.attention, |u, a| u * a)?;
        let d_att = upstream.zip_map(&cache.input, |u, v| u * v)?;
        let d_pre = sigmoid_backward(&cache.attention, &d_att)?;
        let d_act = self.excite2.backward(&cache.activated, &d_pre)?;
        let d_hidden = relu_backward(&cache.hidden, &d_act)?;
        let d_freq = self.excite1.backward(&cache.freq, &d_hidden)?;
        let mut scratch = vec![0.0; self.seq_len];
        for (g, dst) in d_freq
            .rows()
            .zip(dx.values_mut().chunks_exact_mut(self.seq_len))
        {
            self.dct.apply_transpose(g, &mut scratch);
            for (d, s) in dst.iter_mut().zip(&scratch) {
                *d += s;
            }
        }
        Ok(dx)
    }

    pub(crate) fn groups(&mut self, prefix: &str) -> Vec<ParamGroup<'_>> {
        let mut g = self.excite1.groups(&format!("{prefix}.excite1"));
        g.extend(self.excite2.groups(&format!("{prefix}.excite2")));
        g
    }
}

impl Parameterized for FecamLayer {
    fn param_groups(&mut self) -> Vec<ParamGroup<'_>> {
        self.groups("fecam")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fecam::gap;
    use crate::nncore::{grad_check, Shape3};
    use crate::spectral::{dct_forward, Signal};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random(rng: &mut ChaCha8Rng, shape: Shape3, scale: f64) -> Tensor3 {
        Tensor3::from_vec(shape, (0..shape.numel()).map(|_| rng.gen_range(-scale..scale)).collect())
            .unwrap()
    }

    fn dot(a: &Tensor3, b: &Tensor3) -> f64 {
        a.values().iter().zip(b.values()).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn frequency_map_matches_dct_forward_bitwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let layer = FecamLayer::new(12, 2, &mut rng).unwrap();
        let x = random(&mut rng, Shape3::new(3, 5, 12), 1.0);
        let f = layer.frequency_map(&x).unwrap();
        for (row, frow) in x.rows().zip(f.rows()) {
            let s = dct_forward(&Signal::try_from(row).unwrap(), Normalization::Orthonormal).unwrap();
            assert_eq!(s.coefficients.as_slice(), frow);
        }
    }

    #[test]
    fn constant_channels_have_only_dc() {
        let layer = FecamLayer::with_zero_excitation(8, 2).unwrap();
        let mut x = Tensor3::zeros(Shape3::new(1, 3, 8));
        for c in 0..3 {
            x.row_mut(0, c).iter_mut().for_each(|v| *v = c as f64 + 1.0);
        }
        let f = layer.frequency_map(&x).unwrap();
        for c in 0..3 {
            let row = f.row(0, c);
            assert!((row[0] - (c as f64 + 1.0) * 8f64.sqrt()).abs() < 1e-12);
            assert!(row[1..].iter().all(|v| v.abs() < 1e-12));
        }
    }

    #[test]
    fn orthonormal_dc_is_sqrt_len_times_gap() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let layer = FecamLayer::with_zero_excitation(16, 4).unwrap();
        let x = random(&mut rng, Shape3::new(2, 3, 16), 3.0);
        let f = layer.frequency_map(&x).unwrap();
        let z = gap(&x);
        for (frow, &mean) in f.rows().zip(z.values()) {
            assert!((frow[0] - 4.0 * mean).abs() < 1e-12);
        }
    }

    #[test]
    fn channel_permutation_equivariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let layer = FecamLayer::new(8, 2, &mut rng).unwrap();
        let x = random(&mut rng, Shape3::new(1, 4, 8), 1.0);
        let perm = [2usize, 0, 3, 1];
        let mut xp = Tensor3::zeros(x.shape());
        for (dst, &src) in perm.iter().enumerate() {
            xp.row_mut(0, dst).copy_from_slice(x.row(0, src));
        }
        let f = layer.frequency_map(&x).unwrap();
        let fp = layer.frequency_map(&xp).unwrap();
        for (dst, &src) in perm.iter().enumerate() {
            assert_eq!(fp.row(0, dst), f.row(0, src));
        }
    }

    #[test]
    fn zero_excitation_fixed_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let layer = FecamLayer::with_zero_excitation(8, 2).unwrap();
        let x = random(&mut rng, Shape3::new(2, 3, 8), 5.0);
        let (out, att) = layer.forward(&x).unwrap();
        assert!(att.values().iter().all(|&a| a == 0.5));
        for (o, v) in out.values().iter().zip(x.values()) {
            assert_eq!(*o, v / 2.0);
        }
    }

    #[test]
    fn attention_bounds_output_magnitude() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let layer = FecamLayer::new(16, 2, &mut rng).unwrap();
        let x = random(&mut rng, Shape3::new(2, 3, 16), 4.0);
        let (out, att) = layer.forward(&x).unwrap();
        assert_eq!(att.shape(), x.shape());
        assert!(att.values().iter().all(|&a| a > 0.0 && a < 1.0));
        for (o, v) in out.values().iter().zip(x.values()) {
            assert!(o.abs() <= v.abs());
        }
    }

    #[test]
    fn shape_and_config_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        assert!(FecamLayer::new(10, 3, &mut rng).is_err());
        assert!(FecamLayer::new(10, 0, &mut rng).is_err());
        let layer = FecamLayer::new(8, 2, &mut rng).unwrap();
        assert!(layer.forward(&Tensor3::zeros(Shape3::new(1, 1, 9))).is_err());
        assert!(FecamLayer::from_parts(8, 2, DenseLayer::zeros(8, 3), DenseLayer::zeros(3, 8)).is_err());
    }

    #[test]
    fn backward_requires_cache() {
        let mut layer = FecamLayer::with_zero_excitation(4, 2).unwrap();
        let up = Tensor3::zeros(Shape3::new(1, 1, 4));
        assert!(matches!(layer.backward(&up), Err(FecamError::Nn(NnError::MissingCache))));
        layer.forward_train(&up).unwrap();
        layer.backward(&up).unwrap();
        assert!(layer.backward(&up).is_err());
    }

    #[test]
    fn zero_upstream_gives_zero_grads() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut layer = FecamLayer::new(8, 2, &mut rng).unwrap();
        let x = random(&mut rng, Shape3::new(2, 3, 8), 1.0);
        layer.forward_train(&x).unwrap();
        let dx = layer.backward(&Tensor3::zeros(x.shape())).unwrap();
        assert!(dx.values().iter().all(|&v| v == 0.0));
        assert!(layer.flat_grads().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn batch_gradients_are_sums_of_per_sample_gradients() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut layer = FecamLayer::new(8, 2, &mut rng).unwrap();
        let x = random(&mut rng, Shape3::new(2, 3, 8), 1.0);
        let up = random(&mut rng, x.shape(), 1.0);

        layer.forward_train(&x).unwrap();
        layer.backward(&up).unwrap();
        let joint = layer.flat_grads();

        layer.zero_grad();
        for b in 0..2 {
            layer.forward_train(&x.batch_slice(b, b + 1)).unwrap();
            layer.backward(&up.batch_slice(b, b + 1)).unwrap();
        }
        let summed = layer.flat_grads();
        for (a, b) in joint.iter().zip(&summed) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        for seed in 0..20u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
            let shape = Shape3::new(2, 3, 8);
            let mut layer = FecamLayer::new(8, 2, &mut rng).unwrap();
            let x = random(&mut rng, shape, 1.0);
            let probe = random(&mut rng, shape, 1.0);

            layer.forward_train(&x).unwrap();
            let dx = layer.backward(&probe).unwrap();
            let r = grad_check(
                |v| dot(&layer.forward(&Tensor3::from_vec(shape, v.to_vec()).unwrap()).unwrap().0, &probe),
                x.values(),
                dx.values(),
                1e-5,
            );
            assert!(r.passes(1e-4), "seed {seed} input {r:?}");

            let analytic = layer.flat_grads();
            let params = layer.flat_params();
            let mut probe_layer = layer.clone();
            let r = grad_check(
                |p| {
                    probe_layer.set_flat_params(p).unwrap();
                    dot(&probe_layer.forward(&x).unwrap().0, &probe)
                },
                &params,
                &analytic,
                1e-5,
            );
            assert!(r.passes(1e-4), "seed {seed} params {r:?}");
        }
    }
}
