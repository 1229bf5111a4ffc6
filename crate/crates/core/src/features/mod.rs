//! Feature sets, ratio targets and sequential forward selection.
//!
//! Feature sets grow in stages: F0 holds the mean of every metric; F1 is the
//! selected subset of F0; F2 adds per-second rates of the F1 metrics; F3 is a
//! selected subset of F2 restricted to the six base metrics; F4 adds the
//! standard deviation and coefficient of variation of every F3 metric.

mod engineering;
mod rounds;
mod selection;
mod set;
mod targets;

pub use engineering::{add_dispersion_features, derive_relative_features};
pub use rounds::{run_feature_rounds, FeatureRounds, RoundsConfig};
pub use selection::{
    mape, sequential_forward_selection, FitPredict, SelectionConfig, SelectionData, SelectionStep, SelectionTrace,
};
pub use set::{Feature, FeatureSet, FeatureStage, BASE_METRICS};
pub use targets::{
    group_by_function, make_targets, training_set, FunctionMeasurements, RegressionRow, TargetVector, TrainingSet,
};
