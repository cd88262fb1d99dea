use rand::Rng;

use super::{NnError, Parameterized, Result, Shape3, Tensor3};

/// Mutable view of one parameter array and its gradient.
pub struct ParamGroup<'a> {
    pub name: String,
    pub shape: Vec<usize>,
    pub values: &'a mut [f64],
    pub grads: &'a mut [f64],
}

/// Affine map on the last tensor axis: `y = x W + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer {
    in_dim: usize,
    out_dim: usize,
    // weight[i * out_dim + j]
    weight: Vec<f64>,
    bias: Vec<f64>,
    weight_grad: Vec<f64>,
    bias_grad: Vec<f64>,
}

impl DenseLayer {
    /// Uniform init in `±sqrt(1/in_dim)` for weights and bias.
    pub fn new<R: Rng + ?Sized>(in_dim: usize, out_dim: usize, rng: &mut R) -> Self {
        let bound = (1.0 / in_dim as f64).sqrt();
        let mut sample = || rng.gen_range(-bound..=bound);
        let weight = (0..in_dim * out_dim).map(|_| sample()).collect();
        let bias = (0..out_dim).map(|_| sample()).collect();
        Self::with_buffers(in_dim, out_dim, weight, bias)
    }

    pub fn zeros(in_dim: usize, out_dim: usize) -> Self {
        Self::with_buffers(in_dim, out_dim, vec![0.0; in_dim * out_dim], vec![0.0; out_dim])
    }

    /// Square identity map with zero bias.
    pub fn identity(dim: usize) -> Self {
        let mut layer = Self::zeros(dim, dim);
        for i in 0..dim {
            layer.weight[i * dim + i] = 1.0;
        }
        layer
    }

    pub fn from_parts(in_dim: usize, out_dim: usize, weight: Vec<f64>, bias: Vec<f64>) -> Result<Self> {
        if weight.len() != in_dim * out_dim || bias.len() != out_dim {
            return Err(NnError::Shape(format!(
                "dense {in_dim}x{out_dim} given {} weights and {} biases",
                weight.len(),
                bias.len()
            )));
        }
        Ok(Self::with_buffers(in_dim, out_dim, weight, bias))
    }

    fn with_buffers(in_dim: usize, out_dim: usize, weight: Vec<f64>, bias: Vec<f64>) -> Self {
        Self {
            in_dim,
            out_dim,
            weight_grad: vec![0.0; weight.len()],
            bias_grad: vec![0.0; bias.len()],
            weight,
            bias,
        }
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn weight(&self) -> &[f64] {
        &self.weight
    }

    pub fn weight_mut(&mut self) -> &mut [f64] {
        &mut self.weight
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub fn bias_mut(&mut self) -> &mut [f64] {
        &mut self.bias
    }

    pub fn weight_grad(&self) -> &[f64] {
        &self.weight_grad
    }

    pub fn bias_grad(&self) -> &[f64] {
        &self.bias_grad
    }

    fn check_input(&self, x: &Tensor3) -> Result<()> {
        if x.shape().length != self.in_dim {
            return Err(NnError::Shape(format!(
                "dense layer expects last axis {}, got {}",
                self.in_dim,
                x.shape().length
            )));
        }
        Ok(())
    }

    pub fn forward(&self, x: &Tensor3) -> Result<Tensor3> {
        self.check_input(x)?;
        let s = x.shape();
        let mut out = Tensor3::zeros(Shape3::new(s.batch, s.channels, self.out_dim));
        for (xin, yout) in x
            .values()
            .chunks_exact(self.in_dim)
            .zip(out.values_mut().chunks_exact_mut(self.out_dim))
        {
            yout.copy_from_slice(&self.bias);
            for (&xi, wrow) in xin.iter().zip(self.weight.chunks_exact(self.out_dim)) {
                for (y, &w) in yout.iter_mut().zip(wrow) {
                    *y += xi * w;
                }
            }
        }
        Ok(out)
    }

    /// Accumulates parameter gradients and returns `dL/dx`.
    ///
    /// `input` must be the tensor passed to the matching [`forward`](Self::forward).
    pub fn backward(&mut self, input: &Tensor3, upstream: &Tensor3) -> Result<Tensor3> {
        self.check_input(input)?;
        let s = input.shape();
        let expected = Shape3::new(s.batch, s.channels, self.out_dim);
        if upstream.shape() != expected {
            return Err(NnError::Shape(format!(
                "dense upstream expected {expected}, got {}",
                upstream.shape()
            )));
        }
        let mut dx = Tensor3::zeros(s);
        for ((xin, up), dxr) in input
            .values()
            .chunks_exact(self.in_dim)
            .zip(upstream.values().chunks_exact(self.out_dim))
            .zip(dx.values_mut().chunks_exact_mut(self.in_dim))
        {
            for (bg, &u) in self.bias_grad.iter_mut().zip(up) {
                *bg += u;
            }
            for (i, (&xi, wrow)) in xin.iter().zip(self.weight.chunks_exact(self.out_dim)).enumerate() {
                let grow = &mut self.weight_grad[i * self.out_dim..(i + 1) * self.out_dim];
                let mut acc = 0.0;
                for ((g, &w), &u) in grow.iter_mut().zip(wrow).zip(up) {
                    *g += xi * u;
                    acc += w * u;
                }
                dxr[i] = acc;
            }
        }
        Ok(dx)
    }

    pub(crate) fn groups(&mut self, prefix: &str) -> Vec<ParamGroup<'_>> {
        vec![
            ParamGroup {
                name: format!("{prefix}.weight"),
                shape: vec![self.in_dim, self.out_dim],
                values: &mut self.weight,
                grads: &mut self.weight_grad,
            },
            ParamGroup {
                name: format!("{prefix}.bias"),
                shape: vec![self.out_dim],
                values: &mut self.bias,
                grads: &mut self.bias_grad,
            },
        ]
    }
}

impl Parameterized for DenseLayer {
    fn param_groups(&mut self) -> Vec<ParamGroup<'_>> {
        self.groups("dense")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nncore::grad_check;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_tensor(rng: &mut ChaCha8Rng, shape: Shape3) -> Tensor3 {
        Tensor3::from_vec(shape, (0..shape.numel()).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .unwrap()
    }

    fn weighted_sum(t: &Tensor3, w: &Tensor3) -> f64 {
        t.values().iter().zip(w.values()).map(|(a, b)| a * b).sum()
    }

    #[test]
    fn identity_passes_input_through() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let x = random_tensor(&mut rng, Shape3::new(2, 3, 5));
        let y = DenseLayer::identity(5).forward(&x).unwrap();
        assert_eq!(x.values(), y.values());
    }

    #[test]
    fn zero_weight_gives_bias() {
        let layer = DenseLayer::from_parts(3, 2, vec![0.0; 6], vec![0.25, -1.0]).unwrap();
        let x = Tensor3::full(Shape3::new(2, 2, 3), 7.0);
        let y = layer.forward(&x).unwrap();
        for row in y.rows() {
            assert_eq!(row, &[0.25, -1.0]);
        }
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let layer = DenseLayer::zeros(4, 2);
        assert!(layer.forward(&Tensor3::zeros(Shape3::new(1, 1, 3))).is_err());
        let mut layer = layer;
        let x = Tensor3::zeros(Shape3::new(1, 1, 4));
        assert!(layer.backward(&x, &Tensor3::zeros(Shape3::new(1, 1, 3))).is_err());
        assert!(DenseLayer::from_parts(2, 2, vec![0.0; 3], vec![0.0; 2]).is_err());
    }

    #[test]
    fn init_is_bounded_and_seeded() {
        let a = DenseLayer::new(16, 4, &mut ChaCha8Rng::seed_from_u64(9));
        let b = DenseLayer::new(16, 4, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        assert!(a.weight().iter().all(|w| w.abs() <= 0.25));
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let shape = Shape3::new(2, 3, 8);
        let x = random_tensor(&mut rng, shape);
        let mut layer = DenseLayer::new(8, 4, &mut rng);
        let probe = random_tensor(&mut rng, Shape3::new(2, 3, 4));

        let dx = layer.backward(&x, &probe).unwrap();
        let report = grad_check(
            |v| {
                let xt = Tensor3::from_vec(shape, v.to_vec()).unwrap();
                weighted_sum(&layer.forward(&xt).unwrap(), &probe)
            },
            x.values(),
            dx.values(),
            1e-5,
        );
        assert!(report.max_rel_error < 1e-4, "input grad {report:?}");

        let analytic = layer.flat_grads();
        let params = layer.flat_params();
        let mut probe_layer = layer.clone();
        let report = grad_check(
            |p| {
                probe_layer.set_flat_params(p).unwrap();
                weighted_sum(&probe_layer.forward(&x).unwrap(), &probe)
            },
            &params,
            &analytic,
            1e-5,
        );
        assert!(report.max_rel_error < 1e-4, "param grad {report:?}");
    }

    #[test]
    fn gradients_accumulate_until_zeroed() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = random_tensor(&mut rng, Shape3::new(1, 2, 3));
        let up = random_tensor(&mut rng, Shape3::new(1, 2, 2));
        let mut layer = DenseLayer::new(3, 2, &mut rng);
        layer.backward(&x, &up).unwrap();
        let once = layer.flat_grads();
        layer.backward(&x, &up).unwrap();
        let twice = layer.flat_grads();
        for (a, b) in once.iter().zip(&twice) {
            assert!((2.0 * a - b).abs() < 1e-14);
        }
        layer.zero_grad();
        assert!(layer.flat_grads().iter().all(|&g| g == 0.0));
    }
}
