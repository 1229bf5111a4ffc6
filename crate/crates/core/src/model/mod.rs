//! Multi-target regression of execution-time ratios with a fully connected
//! ReLU network trained from scratch.

mod cv;
mod eval;
mod fit;
mod hyper;
mod io;
pub mod loss;
pub mod network;
pub mod optim;
mod regression;

pub use cv::{basesize_study, basesize_csv, cross_validate, cross_validate_folds, grid_search, CvConfig, GridSearch, LeaderboardEntry};
pub use eval::{evaluate, EvaluationMetrics};
pub use fit::{fit, FittedNetwork, MlpTrainer, Standardizer};
pub use hyper::{Grid, Hyperparameters, LossKind, OptimizerKind};
pub use io::{from_json, load_model, save_model, to_json, MODEL_FORMAT_VERSION};
pub use regression::{train, RegressionModel, RATIO_FLOOR};
