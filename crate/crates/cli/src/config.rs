//! Per-subcommand options shared between command-line flags and the JSON
//! config file. Every field is optional in both places; a flag wins over the
//! file, and the file wins over the built-in default.

use std::path::{Path, PathBuf};

use memtune_core::model::{Hyperparameters, LossKind, OptimizerKind};
use serde::Deserialize;

use crate::error::{invalid, CliResult};

macro_rules! options {
    ($(#[$meta:meta])* $name:ident { $( $(#[$fmeta:meta])* $field:ident : $ty:ty, )* }) => {
        $(#[$meta])*
        #[derive(clap::Args, Deserialize, Debug, Default, Clone)]
        #[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
        pub struct $name {
            $( $(#[$fmeta])* #[arg(long)] pub $field: Option<$ty>, )*
        }

        impl $name {
            /// Fill every unset field from `file`.
            pub fn merge(self, file: $name) -> $name {
                $name { $( $field: self.$field.or(file.$field), )* }
            }
        }
    };
    (@with_hyperparameters $(#[$meta:meta])* $name:ident { $($body:tt)* }) => {
        options!($(#[$meta])* $name {
            $($body)*
            /// Optimizer: sgd, adam or adagrad
            optimizer: OptimizerKind,
            /// Loss: mse, mae or mape
            loss: LossKind,
            /// Training epochs
            epochs: usize,
            /// Units per hidden layer
            neurons: usize,
            /// Hidden layers
            layers: usize,
            /// L2 weight-regularization strength
            l2: f64,
            learning_rate: f64,
            batch_size: usize,
        });

        impl $name {
            pub fn hyperparameters(&self, defaults: Hyperparameters, seed: u64) -> CliResult<Hyperparameters> {
                let hp = Hyperparameters {
                    optimizer: self.optimizer.unwrap_or(defaults.optimizer),
                    loss: self.loss.unwrap_or(defaults.loss),
                    epochs: self.epochs.unwrap_or(defaults.epochs),
                    neurons_per_layer: self.neurons.unwrap_or(defaults.neurons_per_layer),
                    hidden_layers: self.layers.unwrap_or(defaults.hidden_layers),
                    l2: self.l2.unwrap_or(defaults.l2),
                    learning_rate: self.learning_rate.unwrap_or(defaults.learning_rate),
                    batch_size: self.batch_size.unwrap_or(defaults.batch_size),
                    seed,
                };
                hp.validate().map_err(|e| invalid(e.to_string()))?;
                Ok(hp)
            }
        }
    };
}

options!(
    /// Generate synthetic function profiles and their measurement dataset
    GenerateOpts {
        /// Number of synthetic functions [default: 2000]
        functions: usize,
        /// Requests per second [default: 30]
        rate: f64,
        /// Measurement duration per memory size, in minutes [default: 10]
        minutes: f64,
        /// Coefficient of variation of the per-request noise [default: 0.1]
        noise_cv: f64,
        /// Output directory for profiles.jsonl and dataset.jsonl [default: data]
        out: PathBuf,
    }
);

options!(
    /// Analyze how long a measurement must run before its metric distributions stabilize
    StabilityOpts {
        /// Number of synthetic functions [default: 50]
        functions: usize,
        /// Requests per second [default: 30]
        rate: f64,
        /// Full measurement window in minutes [default: 15]
        minutes: usize,
        /// Per-request noise coefficient of variation [default: 0.1]
        noise_cv: f64,
        /// Significance level of the Mann-Whitney U test [default: 0.05]
        alpha: f64,
        /// Memory size in MB the traces are recorded at [default: 256]
        memory: u32,
        /// Write the CSV here instead of stdout
        out: PathBuf,
    }
);

options!(@with_hyperparameters
    /// Run the three rounds of sequential forward feature selection
    SelectFeaturesOpts {
        /// Measurement dataset (JSONL)
        dataset: PathBuf,
        /// Base memory size in MB [default: 256]
        base: u32,
        /// Features kept in the first round [default: 13]
        f1_budget: usize,
        /// Features kept in the second round [default: 11]
        f3_budget: usize,
        /// Features kept in the final round [default: 11]
        final_budget: usize,
        /// Cross-validation folds [default: 5]
        folds: usize,
        /// Output directory for selection_trace.csv and features.json [default: selection]
        out: PathBuf,
    }
);

options!(@with_hyperparameters
    /// Train the regression model and write it as JSON
    TrainOpts {
        /// Measurement dataset (JSONL)
        dataset: PathBuf,
        /// Base memory size in MB [default: 256]
        base: u32,
        /// Feature set JSON from select-features [default: built-in set]
        features: PathBuf,
        /// Model output path [default: model.json]
        out: PathBuf,
    }
);

options!(
    /// Cross-validate every combination of a hyperparameter grid
    GridSearchOpts {
        /// Measurement dataset (JSONL)
        dataset: PathBuf,
        /// Base memory size in MB [default: 256]
        base: u32,
        /// Feature set JSON [default: built-in set]
        features: PathBuf,
        /// Grid JSON with one value list per hyperparameter [default: full tuning grid]
        grid: PathBuf,
        /// Cross-validation folds [default: 5]
        folds: usize,
        /// Cross-validation repetitions [default: 1]
        repetitions: usize,
        /// Leaderboard CSV path [default: leaderboard.csv]
        out: PathBuf,
    }
);

options!(@with_hyperparameters
    /// Cross-validate the model with each memory size as base
    BasesizeStudyOpts {
        /// Measurement dataset (JSONL)
        dataset: PathBuf,
        /// Feature set JSON [default: built-in set]
        features: PathBuf,
        /// Cross-validation folds [default: 5]
        folds: usize,
        /// Cross-validation repetitions [default: 1]
        repetitions: usize,
        /// Output CSV path [default: basesize.csv]
        out: PathBuf,
    }
);

options!(
    /// Score a trained model on a dataset
    EvaluateOpts {
        /// Measurement dataset (JSONL)
        dataset: PathBuf,
        /// Model JSON
        model: PathBuf,
        /// Write metrics CSV here instead of stdout
        out: PathBuf,
    }
);

options!(
    /// Predict full execution curves from base-size measurements
    PredictOpts {
        /// Model JSON
        model: PathBuf,
        /// Measurement summaries (JSONL); rows at other sizes than the model base are skipped
        summaries: PathBuf,
        /// Write JSONL here instead of stdout
        out: PathBuf,
    }
);

options!(
    /// Recommend a memory size for each monitored function
    OptimizeOpts {
        /// Model JSON
        model: PathBuf,
        /// Measurement summaries (JSONL)
        summaries: PathBuf,
        /// A single measurement summary given inline as JSON
        inline: String,
        /// Tradeoff between cost (1) and performance (0) [default: 0.75]
        t: f64,
        /// USD per GB-second [default: 0.00001667]
        price_per_gb_second: String,
        /// USD per invocation [default: 0.0000002]
        price_per_invocation: String,
        /// Profiles JSONL from generate; adds rank and benefit against the simulator's ground truth
        ground_truth: PathBuf,
        /// Output format: table, csv or json [default: table for one function, csv otherwise]
        format: String,
        /// Write a rank histogram CSV here (needs --ground-truth)
        histogram: PathBuf,
        /// Write the output here instead of stdout
        out: PathBuf,
    }
);

options!(
    /// Emit CSV series for plotting curves, rank histograms and tradeoff effects
    ReportOpts {
        /// Measurement dataset (JSONL)
        dataset: PathBuf,
        /// Model JSON; enables rank and tradeoff series
        model: PathBuf,
        /// Profiles JSONL; ground truth for rank and tradeoff series
        ground_truth: PathBuf,
        /// USD per GB-second [default: 0.00001667]
        price_per_gb_second: String,
        /// USD per invocation [default: 0.0000002]
        price_per_invocation: String,
        /// Output directory [default: report]
        out: PathBuf,
    }
);

/// Layout of the `--config` file: global keys plus one optional section per subcommand.
#[derive(Deserialize, Debug, Default)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub generate: GenerateOpts,
    pub stability: StabilityOpts,
    pub select_features: SelectFeaturesOpts,
    pub train: TrainOpts,
    pub grid_search: GridSearchOpts,
    pub basesize_study: BasesizeStudyOpts,
    pub evaluate: EvaluateOpts,
    pub predict: PredictOpts,
    pub optimize: OptimizeOpts,
    pub report: ReportOpts,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| invalid(format!("invalid config {}: {e}", path.display())))
    }
}
