use ndarray::{Array2, Axis};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::network::Mlp;
use super::optim::Optimizer;
use super::Hyperparameters;
use crate::features::FitPredict;
use crate::seed::derive;
use crate::{Error, Result};

/// Per-column z-scoring fitted on training rows. Constant columns keep a
/// scale of 1 so they map to 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl Standardizer {
    pub fn fit(rows: &[Vec<f64>]) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || width == 0 {
            return Err(Error::domain("cannot standardize an empty matrix"));
        }
        let n = rows.len() as f64;
        let mut means = vec![0.0; width];
        for r in rows {
            for (m, v) in means.iter_mut().zip(r) {
                *m += v;
            }
        }
        means.iter_mut().for_each(|m| *m /= n);
        let mut stds = vec![0.0; width];
        for r in rows {
            for ((s, v), m) in stds.iter_mut().zip(r).zip(&means) {
                *s += (v - m) * (v - m);
            }
        }
        for s in &mut stds {
            *s = (*s / n).sqrt();
            if !(*s > 0.0) || !s.is_finite() {
                *s = 1.0;
            }
        }
        Ok(Standardizer { means, stds })
    }

    pub fn width(&self) -> usize {
        self.means.len()
    }

    pub fn transform(&self, rows: &[Vec<f64>]) -> Result<Array2<f64>> {
        let mut out = Array2::zeros((rows.len(), self.width()));
        for (i, r) in rows.iter().enumerate() {
            if r.len() != self.width() {
                return Err(Error::domain(format!("row has {} columns, expected {}", r.len(), self.width())));
            }
            for (j, v) in r.iter().enumerate() {
                out[[i, j]] = (v - self.means[j]) / self.stds[j];
            }
        }
        Ok(out)
    }
}

/// A trained network with its input scaling.
#[derive(Clone, Debug, PartialEq)]
pub struct FittedNetwork {
    pub standardizer: Standardizer,
    pub network: Mlp,
    /// Mean mini-batch objective of each epoch.
    pub history: Vec<f64>,
}

impl FittedNetwork {
    pub fn predict(&self, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        let x = self.standardizer.transform(rows)?;
        Ok(self.network.forward(x.view()).outer_iter().map(|r| r.to_vec()).collect())
    }
}

fn check_matrix(rows: &[Vec<f64>], what: &str) -> Result<usize> {
    let width = rows.first().map_or(0, Vec::len);
    if width == 0 {
        return Err(Error::domain(format!("{what} must have at least one column")));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != width {
            return Err(Error::domain(format!("{what} row {i} has {} columns, expected {width}", r.len())));
        }
        if r.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain(format!("{what} row {i} contains a non-finite value")));
        }
    }
    Ok(width)
}

/// Train a network on `inputs -> outputs` with mini-batch gradient descent.
pub fn fit(inputs: &[Vec<f64>], outputs: &[Vec<f64>], hp: &Hyperparameters) -> Result<FittedNetwork> {
    hp.validate()?;
    if inputs.len() != outputs.len() {
        return Err(Error::domain(format!("{} input rows but {} output rows", inputs.len(), outputs.len())));
    }
    if inputs.len() < 2 {
        return Err(Error::domain("training needs at least two rows"));
    }
    let width = check_matrix(inputs, "input")?;
    let targets = check_matrix(outputs, "output")?;

    let standardizer = Standardizer::fit(inputs)?;
    let x = standardizer.transform(inputs)?;
    let mut y = Array2::zeros((outputs.len(), targets));
    for (i, r) in outputs.iter().enumerate() {
        for (j, v) in r.iter().enumerate() {
            y[[i, j]] = *v;
        }
    }

    let mut sizes = vec![width];
    sizes.extend(std::iter::repeat_n(hp.neurons_per_layer, hp.hidden_layers));
    sizes.push(targets);
    let mut network = Mlp::new(&sizes, derive(hp.seed, "init"))?;
    let mut optimizer = Optimizer::new(hp.optimizer, hp.learning_rate, network.parameters().len());
    let mut rng = ChaCha8Rng::seed_from_u64(derive(hp.seed, "shuffle"));
    let mut order: Vec<usize> = (0..inputs.len()).collect();
    let mut history = Vec::with_capacity(hp.epochs);

    for _ in 0..hp.epochs {
        order.shuffle(&mut rng);
        let mut total = 0.0;
        let mut batches = 0usize;
        for batch in order.chunks(hp.batch_size) {
            let bx = x.select(Axis(0), batch);
            let by = y.select(Axis(0), batch);
            let (loss, grad) = network.loss_and_gradient(bx.view(), by.view(), hp.loss, hp.l2);
            if !loss.is_finite() || grad.iter().any(|g| !g.is_finite()) {
                return Err(Error::domain("training diverged: non-finite loss or gradient"));
            }
            optimizer.step(network.parameters_mut(), &grad);
            total += loss;
            batches += 1;
        }
        history.push(total / batches as f64);
    }
    if network.parameters().iter().any(|p| !p.is_finite()) {
        return Err(Error::domain("training diverged: non-finite parameters"));
    }
    Ok(FittedNetwork {
        standardizer,
        network,
        history,
    })
}

/// Fits a fresh network for every call.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MlpTrainer {
    pub hyperparameters: Hyperparameters,
}

impl FitPredict for MlpTrainer {
    fn fit_predict(&self, train_x: &[Vec<f64>], train_y: &[Vec<f64>], test_x: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        fit(train_x, train_y, &self.hyperparameters)?.predict(test_x)
    }
}
