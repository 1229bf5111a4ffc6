//! Fully connected network with ReLU hidden layers and a linear output layer.
//!
//! All weights and biases live in one flat vector; layer `l` stores its
//! `inputs x outputs` weight matrix row-major followed by its bias vector.

use ndarray::{Array2, ArrayView1, ArrayView2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::loss::value_and_gradient;
use super::LossKind;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Mlp {
    sizes: Vec<usize>,
    params: Vec<f64>,
}

#[derive(Clone, Copy, Debug)]
struct Layer {
    weights: usize,
    biases: usize,
    inputs: usize,
    outputs: usize,
}

fn parameter_count(sizes: &[usize]) -> usize {
    sizes.windows(2).map(|w| w[0] * w[1] + w[1]).sum()
}

impl Mlp {
    /// He-uniform weights, zero biases.
    pub fn new(sizes: &[usize], seed: u64) -> Result<Self> {
        if sizes.len() < 2 || sizes.contains(&0) {
            return Err(Error::domain(format!("invalid layer sizes {sizes:?}")));
        }
        let mut params = vec![0.0; parameter_count(sizes)];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut net = Mlp { sizes: sizes.to_vec(), params: Vec::new() };
        for layer in net.layers() {
            let limit = (6.0 / layer.inputs as f64).sqrt();
            for w in &mut params[layer.weights..layer.biases] {
                *w = rng.random_range(-limit..limit);
            }
        }
        net.params = params;
        Ok(net)
    }

    /// Rebuild from stored parameters.
    pub fn from_parameters(sizes: Vec<usize>, params: Vec<f64>) -> Result<Self> {
        if sizes.len() < 2 || sizes.contains(&0) {
            return Err(Error::domain(format!("invalid layer sizes {sizes:?}")));
        }
        if params.len() != parameter_count(&sizes) {
            return Err(Error::domain(format!(
                "expected {} parameters for sizes {sizes:?}, got {}",
                parameter_count(&sizes),
                params.len()
            )));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::domain("non-finite network parameter"));
        }
        Ok(Mlp { sizes, params })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn inputs(&self) -> usize {
        self.sizes[0]
    }

    pub fn outputs(&self) -> usize {
        *self.sizes.last().unwrap()
    }

    pub fn parameters(&self) -> &[f64] {
        &self.params
    }

    pub fn parameters_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    fn layers(&self) -> Vec<Layer> {
        let mut offset = 0;
        self.sizes
            .windows(2)
            .map(|w| {
                let layer = Layer {
                    weights: offset,
                    biases: offset + w[0] * w[1],
                    inputs: w[0],
                    outputs: w[1],
                };
                offset = layer.biases + w[1];
                layer
            })
            .collect()
    }

    /// `(weights, biases)` of each layer.
    pub fn layer_parameters(&self) -> Vec<(ArrayView2<'_, f64>, ArrayView1<'_, f64>)> {
        self.layers().into_iter().map(|l| self.views(l)).collect()
    }

    fn views(&self, l: Layer) -> (ArrayView2<'_, f64>, ArrayView1<'_, f64>) {
        let w = ArrayView2::from_shape((l.inputs, l.outputs), &self.params[l.weights..l.biases]).unwrap();
        let b = ArrayView1::from(&self.params[l.biases..l.biases + l.outputs]);
        (w, b)
    }

    pub fn forward(&self, x: ArrayView2<f64>) -> Array2<f64> {
        let layers = self.layers();
        let last = layers.len() - 1;
        let mut a = x.to_owned();
        for (i, l) in layers.into_iter().enumerate() {
            let (w, b) = self.views(l);
            let mut z = a.dot(&w);
            z += &b;
            if i != last {
                z.mapv_inplace(relu);
            }
            a = z;
        }
        a
    }

    /// Sum of squared weights (biases excluded).
    pub fn weight_norm(&self) -> f64 {
        self.layers()
            .into_iter()
            .map(|l| self.params[l.weights..l.biases].iter().map(|w| w * w).sum::<f64>())
            .sum()
    }

    /// Objective `loss(forward(x), y) + l2 * weight_norm()`.
    pub fn loss(&self, x: ArrayView2<f64>, y: ArrayView2<f64>, kind: LossKind, l2: f64) -> f64 {
        let out = self.forward(x);
        value_and_gradient(kind, out.view(), y).0 + l2 * self.weight_norm()
    }

    /// Objective value and its gradient with respect to every parameter.
    pub fn loss_and_gradient(&self, x: ArrayView2<f64>, y: ArrayView2<f64>, kind: LossKind, l2: f64) -> (f64, Vec<f64>) {
        let layers = self.layers();
        let last = layers.len() - 1;
        let mut activations = Vec::with_capacity(layers.len() + 1);
        activations.push(x.to_owned());
        for (i, &l) in layers.iter().enumerate() {
            let (w, b) = self.views(l);
            let mut z = activations[i].dot(&w);
            z += &b;
            if i != last {
                z.mapv_inplace(relu);
            }
            activations.push(z);
        }
        let (data_loss, mut delta) = value_and_gradient(kind, activations[layers.len()].view(), y);
        let mut grad = vec![0.0; self.params.len()];
        for (i, &l) in layers.iter().enumerate().rev() {
            let (w, _) = self.views(l);
            let gw = activations[i].t().dot(&delta);
            for (g, (&dw, &p)) in grad[l.weights..l.biases]
                .iter_mut()
                .zip(gw.iter().zip(&self.params[l.weights..l.biases]))
            {
                *g = dw + 2.0 * l2 * p;
            }
            let gb = delta.sum_axis(Axis(0));
            grad[l.biases..l.biases + l.outputs].copy_from_slice(gb.as_slice().unwrap());
            if i > 0 {
                let mut prev = delta.dot(&w.t());
                ndarray::Zip::from(&mut prev).and(&activations[i]).for_each(|d, &a| {
                    if a <= 0.0 {
                        *d = 0.0;
                    }
                });
                delta = prev;
            }
        }
        (data_loss + l2 * self.weight_norm(), grad)
    }
}

fn relu(x: f64) -> f64 {
    x.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn parameter_layout() {
        let net = Mlp::new(&[3, 4, 2], 1).unwrap();
        assert_eq!(net.parameters().len(), 3 * 4 + 4 + 4 * 2 + 2);
        let layers = net.layer_parameters();
        assert_eq!(layers[0].0.dim(), (3, 4));
        assert_eq!(layers[1].1.len(), 2);
        assert!(layers.iter().all(|(_, b)| b.iter().all(|&v| v == 0.0)));
    }

    #[test]
    fn init_within_he_bounds() {
        let net = Mlp::new(&[6, 50, 5], 9).unwrap();
        let w0 = net.layer_parameters()[0].0.to_owned();
        let limit = 1.0f64;
        assert!(w0.iter().all(|w| w.abs() < limit));
        assert!(w0.iter().any(|w| w.abs() > 0.5));
    }

    #[test]
    fn forward_by_hand() {
        // 2 -> 2 (relu) -> 1
        let net = Mlp::from_parameters(
            vec![2, 2, 1],
            vec![1.0, -1.0, 2.0, 1.0, 0.5, -4.0, 1.0, 3.0, 0.25],
        )
        .unwrap();
        // hidden z = [1*1 + 2*2 + 0.5, -1 + 2 - 4] = [5.5, -3] -> relu [5.5, 0]
        let out = net.forward(array![[1.0, 2.0]].view());
        assert_eq!(out[[0, 0]], 5.5 + 0.25);
    }

    #[test]
    fn same_seed_same_network() {
        assert_eq!(Mlp::new(&[4, 8, 5], 3).unwrap(), Mlp::new(&[4, 8, 5], 3).unwrap());
        assert_ne!(Mlp::new(&[4, 8, 5], 3).unwrap(), Mlp::new(&[4, 8, 5], 4).unwrap());
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(Mlp::new(&[3], 0).is_err());
        assert!(Mlp::from_parameters(vec![2, 1], vec![0.0; 2]).is_err());
    }

    #[test]
    fn gradient_matches_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let sizes = vec![3, 6, 4, 5];
        let count = Mlp::new(&sizes, 0).unwrap().parameters().len();
        // nonzero biases keep hidden pre-activations off the ReLU kink
        let net = Mlp::from_parameters(sizes, (0..count).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap();
        let x = Array2::from_shape_fn((6, 3), |_| rng.random_range(-2.0..2.0));
        let y = Array2::from_shape_fn((6, 5), |_| rng.random_range(0.5..2.0));
        let h = 1e-6;
        for kind in [LossKind::Mse, LossKind::Mae, LossKind::Mape] {
            let (value, grad) = net.loss_and_gradient(x.view(), y.view(), kind, 0.01);
            assert!((value - net.loss(x.view(), y.view(), kind, 0.01)).abs() < 1e-12);
            for (i, g) in grad.iter().enumerate() {
                let mut plus = net.clone();
                plus.parameters_mut()[i] += h;
                let mut minus = net.clone();
                minus.parameters_mut()[i] -= h;
                let numeric = (plus.loss(x.view(), y.view(), kind, 0.01) - minus.loss(x.view(), y.view(), kind, 0.01)) / (2.0 * h);
                assert!((g - numeric).abs() <= 1e-5 * (1.0 + numeric.abs()), "{kind:?} param {i}: {g} vs {numeric}");
            }
        }
    }
}
