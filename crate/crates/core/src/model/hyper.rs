use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerKind {
    Sgd,
    Adam,
    Adagrad,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    Mse,
    Mae,
    Mape,
}

impl std::fmt::Display for OptimizerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OptimizerKind::Sgd => "sgd",
            OptimizerKind::Adam => "adam",
            OptimizerKind::Adagrad => "adagrad",
        })
    }
}

impl std::fmt::Display for LossKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LossKind::Mse => "mse",
            LossKind::Mae => "mae",
            LossKind::Mape => "mape",
        })
    }
}

impl std::str::FromStr for OptimizerKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sgd" => Ok(OptimizerKind::Sgd),
            "adam" => Ok(OptimizerKind::Adam),
            "adagrad" => Ok(OptimizerKind::Adagrad),
            _ => Err(Error::domain(format!("unknown optimizer '{s}' (expected sgd, adam or adagrad)"))),
        }
    }
}

impl std::str::FromStr for LossKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mse" => Ok(LossKind::Mse),
            "mae" => Ok(LossKind::Mae),
            "mape" => Ok(LossKind::Mape),
            _ => Err(Error::domain(format!("unknown loss '{s}' (expected mse, mae or mape)"))),
        }
    }
}

/// Training configuration. The default is the tuned configuration: Adam,
/// MAPE loss, 200 epochs, 4 hidden layers of 256 units, L2 0.01.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Hyperparameters {
    pub optimizer: OptimizerKind,
    pub loss: LossKind,
    pub epochs: usize,
    pub neurons_per_layer: usize,
    pub hidden_layers: usize,
    pub l2: f64,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Hyperparameters {
            optimizer: OptimizerKind::Adam,
            loss: LossKind::Mape,
            epochs: 200,
            neurons_per_layer: 256,
            hidden_layers: 4,
            l2: 0.01,
            learning_rate: 1e-3,
            batch_size: 32,
            seed: 0,
        }
    }
}

impl Hyperparameters {
    /// The smaller network used during feature selection: 3 x 128, 200 epochs.
    pub fn selection() -> Self {
        Hyperparameters {
            neurons_per_layer: 128,
            hidden_layers: 3,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 || self.neurons_per_layer == 0 || self.hidden_layers == 0 || self.batch_size == 0 {
            return Err(Error::domain(
                "epochs, neurons_per_layer, hidden_layers and batch_size must all be >= 1",
            ));
        }
        if !(self.l2.is_finite() && self.l2 >= 0.0) {
            return Err(Error::domain(format!("l2 must be >= 0, got {}", self.l2)));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::domain(format!("learning rate must be > 0, got {}", self.learning_rate)));
        }
        Ok(())
    }
}

/// Per-parameter value lists; combinations are enumerated with the last
/// field varying fastest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub optimizer: Vec<OptimizerKind>,
    pub loss: Vec<LossKind>,
    pub epochs: Vec<usize>,
    pub neurons_per_layer: Vec<usize>,
    pub l2: Vec<f64>,
    pub hidden_layers: Vec<usize>,
    #[serde(default = "default_learning_rates")]
    pub learning_rate: Vec<f64>,
    #[serde(default = "default_batch_sizes")]
    pub batch_size: Vec<usize>,
    #[serde(default)]
    pub seed: u64,
}

fn default_learning_rates() -> Vec<f64> {
    vec![Hyperparameters::default().learning_rate]
}

fn default_batch_sizes() -> Vec<usize> {
    vec![Hyperparameters::default().batch_size]
}

impl Grid {
    /// The full tuning grid: 3 optimizers x 3 losses x 3 epoch counts x
    /// 3 widths x 4 L2 strengths x 4 depths.
    pub fn tuning() -> Self {
        Grid {
            optimizer: vec![OptimizerKind::Sgd, OptimizerKind::Adam, OptimizerKind::Adagrad],
            loss: vec![LossKind::Mse, LossKind::Mae, LossKind::Mape],
            epochs: vec![200, 500, 1000],
            neurons_per_layer: vec![64, 128, 256],
            l2: vec![0.0, 0.0001, 0.001, 0.01],
            hidden_layers: vec![2, 3, 4, 5],
            learning_rate: default_learning_rates(),
            batch_size: default_batch_sizes(),
            seed: 0,
        }
    }

    /// A grid holding exactly `hp`.
    pub fn single(hp: Hyperparameters) -> Self {
        Grid {
            optimizer: vec![hp.optimizer],
            loss: vec![hp.loss],
            epochs: vec![hp.epochs],
            neurons_per_layer: vec![hp.neurons_per_layer],
            l2: vec![hp.l2],
            hidden_layers: vec![hp.hidden_layers],
            learning_rate: vec![hp.learning_rate],
            batch_size: vec![hp.batch_size],
            seed: hp.seed,
        }
    }

    pub fn len(&self) -> usize {
        self.optimizer.len()
            * self.loss.len()
            * self.epochs.len()
            * self.neurons_per_layer.len()
            * self.l2.len()
            * self.hidden_layers.len()
            * self.learning_rate.len()
            * self.batch_size.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn combinations(&self) -> Vec<Hyperparameters> {
        let mut out = Vec::with_capacity(self.len());
        for &optimizer in &self.optimizer {
            for &loss in &self.loss {
                for &epochs in &self.epochs {
                    for &neurons_per_layer in &self.neurons_per_layer {
                        for &l2 in &self.l2 {
                            for &hidden_layers in &self.hidden_layers {
                                for &learning_rate in &self.learning_rate {
                                    for &batch_size in &self.batch_size {
                                        out.push(Hyperparameters {
                                            optimizer,
                                            loss,
                                            epochs,
                                            neurons_per_layer,
                                            hidden_layers,
                                            l2,
                                            learning_rate,
                                            batch_size,
                                            seed: self.seed,
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}
