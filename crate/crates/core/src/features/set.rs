use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::domain::{MeasurementSummary, Metric};
use crate::{Error, Result};

/// The six metrics the final feature set is built from, besides execution time.
pub const BASE_METRICS: [Metric; 6] = [
    Metric::HeapUsed,
    Metric::UserCpuTime,
    Metric::SystemCpuTime,
    Metric::VolContextSwitches,
    Metric::FsWrites,
    Metric::BytesReceived,
];

/// A scalar derived from a [`MeasurementSummary`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Feature {
    Mean(Metric),
    /// Mean divided by mean execution time in seconds.
    PerSecond(Metric),
    Std(Metric),
    /// `std / mean`, defined as 0 when the mean is 0.
    Cv(Metric),
}

impl Feature {
    pub fn metric(self) -> Metric {
        match self {
            Feature::Mean(m) | Feature::PerSecond(m) | Feature::Std(m) | Feature::Cv(m) => m,
        }
    }

    pub fn value(self, summary: &MeasurementSummary) -> Result<f64> {
        let mean = summary.mean.get(self.metric());
        Ok(match self {
            Feature::Mean(_) => mean,
            Feature::PerSecond(_) => per_second(mean, summary.mean.execution_time)?,
            Feature::Std(m) => summary.std.get(m),
            Feature::Cv(m) => coefficient_of_variation(mean, summary.std.get(m)),
        })
    }

    /// Whether the value depends only on base metrics and execution time.
    pub fn uses_base_metrics_only(self) -> bool {
        let m = self.metric();
        m == Metric::ExecutionTime || BASE_METRICS.contains(&m)
    }
}

pub(crate) fn per_second(value: f64, execution_time_ms: f64) -> Result<f64> {
    if !(execution_time_ms.is_finite() && execution_time_ms > 0.0) {
        return Err(Error::domain(format!(
            "execution time must be positive to form rates, got {execution_time_ms} ms"
        )));
    }
    Ok(value / (execution_time_ms / 1000.0))
}

pub(crate) fn coefficient_of_variation(mean: f64, std: f64) -> f64 {
    if mean == 0.0 {
        0.0
    } else {
        std / mean
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (prefix, m) = match self {
            Feature::Mean(m) => ("mean", m),
            Feature::PerSecond(m) => ("per_second", m),
            Feature::Std(m) => ("std", m),
            Feature::Cv(m) => ("cv", m),
        };
        write!(f, "{prefix}:{}", m.name())
    }
}

impl FromStr for Feature {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (prefix, metric) = s
            .split_once(':')
            .ok_or_else(|| Error::domain(format!("feature `{s}` must look like `mean:<metric>`")))?;
        let metric: Metric = metric.parse()?;
        match prefix {
            "mean" => Ok(Feature::Mean(metric)),
            "per_second" => Ok(Feature::PerSecond(metric)),
            "std" => Ok(Feature::Std(metric)),
            "cv" => Ok(Feature::Cv(metric)),
            other => Err(Error::domain(format!("unknown feature kind `{other}`"))),
        }
    }
}

impl Serialize for Feature {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Feature {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FeatureStage {
    F0,
    F1,
    F2,
    F3,
    F4,
}

/// An ordered, duplicate-free list of features belonging to one stage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFeatureSet", into = "RawFeatureSet")]
pub struct FeatureSet {
    stage: FeatureStage,
    features: Vec<Feature>,
}

#[derive(Serialize, Deserialize)]
struct RawFeatureSet {
    stage: FeatureStage,
    features: Vec<Feature>,
}

impl TryFrom<RawFeatureSet> for FeatureSet {
    type Error = Error;
    fn try_from(raw: RawFeatureSet) -> Result<Self> {
        FeatureSet::new(raw.stage, raw.features)
    }
}

impl From<FeatureSet> for RawFeatureSet {
    fn from(set: FeatureSet) -> Self {
        RawFeatureSet {
            stage: set.stage,
            features: set.features,
        }
    }
}

impl FeatureSet {
    /// Build a set, checking the membership rules of `stage`.
    pub fn new(stage: FeatureStage, features: Vec<Feature>) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::domain("a feature set needs at least one feature"));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = features.iter().find(|f| !seen.insert(**f)) {
            return Err(Error::domain(format!("duplicate feature {dup}")));
        }
        let violation = match stage {
            FeatureStage::F0 => (features != Self::all_means()).then(|| "F0 must be the mean of every metric".to_string()),
            FeatureStage::F1 => features
                .iter()
                .find(|f| !matches!(f, Feature::Mean(_)))
                .map(|f| format!("F1 may only contain means, found {f}")),
            FeatureStage::F2 => features
                .iter()
                .find(|f| match f {
                    Feature::Mean(_) => false,
                    Feature::PerSecond(m) => !features.contains(&Feature::Mean(*m)),
                    _ => true,
                })
                .map(|f| format!("F2 may only contain F1 means and their rates, found {f}")),
            FeatureStage::F3 | FeatureStage::F4 => features
                .iter()
                .find(|f| !f.uses_base_metrics_only())
                .map(|f| format!("{stage:?} features must derive from the base metrics, found {f}")),
        };
        if let Some(message) = violation {
            return Err(Error::domain(message));
        }
        if stage == FeatureStage::F3 && features.iter().any(|f| matches!(f, Feature::Std(_) | Feature::Cv(_))) {
            return Err(Error::domain("F3 may not contain dispersion features"));
        }
        Ok(FeatureSet { stage, features })
    }

    fn all_means() -> Vec<Feature> {
        Metric::ALL.iter().map(|&m| Feature::Mean(m)).collect()
    }

    /// Mean of every metric, execution time included.
    pub fn f0() -> Self {
        FeatureSet {
            stage: FeatureStage::F0,
            features: Self::all_means(),
        }
    }

    /// F1 plus the per-second rate of every F1 metric except execution time.
    pub fn relative_from(f1: &FeatureSet) -> Result<Self> {
        let mut features = f1.features.clone();
        features.extend(
            f1.features
                .iter()
                .filter(|f| f.metric() != Metric::ExecutionTime)
                .map(|f| Feature::PerSecond(f.metric())),
        );
        FeatureSet::new(FeatureStage::F2, features)
    }

    /// F3 plus std and CV of every distinct F3 metric, in first-seen order.
    pub fn dispersion_from(f3: &FeatureSet) -> Result<Self> {
        let mut features = f3.features.clone();
        let mut metrics = Vec::new();
        for f in &f3.features {
            if !metrics.contains(&f.metric()) {
                metrics.push(f.metric());
            }
        }
        features.extend(metrics.iter().map(|&m| Feature::Std(m)));
        features.extend(metrics.iter().map(|&m| Feature::Cv(m)));
        FeatureSet::new(FeatureStage::F4, features)
    }

    /// The feature set used when no selection result is supplied: mean
    /// execution time plus, for each base metric, its mean, per-second rate,
    /// std and CV.
    pub fn default_model() -> Self {
        let mut features = vec![Feature::Mean(Metric::ExecutionTime)];
        features.extend(BASE_METRICS.iter().map(|&m| Feature::Mean(m)));
        features.extend(BASE_METRICS.iter().map(|&m| Feature::PerSecond(m)));
        features.extend(BASE_METRICS.iter().map(|&m| Feature::Std(m)));
        features.extend(BASE_METRICS.iter().map(|&m| Feature::Cv(m)));
        FeatureSet {
            stage: FeatureStage::F4,
            features,
        }
    }

    /// Subset of `self` by feature name, in the given order.
    pub fn select(&self, stage: FeatureStage, names: &[String]) -> Result<Self> {
        let features = names
            .iter()
            .map(|n| {
                let f: Feature = n.parse()?;
                if self.features.contains(&f) {
                    Ok(f)
                } else {
                    Err(Error::domain(format!("{f} is not among the candidates")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        FeatureSet::new(stage, features)
    }

    /// Features of `self` whose metric is a base metric or execution time.
    pub fn restricted_to_base_metrics(&self) -> Vec<Feature> {
        self.features.iter().copied().filter(|f| f.uses_base_metrics_only()).collect()
    }

    pub fn stage(&self) -> FeatureStage {
        self.stage
    }

    pub fn features(&self) -> &[Feature] {
        &self.features
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.features.iter().map(ToString::to_string).collect()
    }

    pub fn extract(&self, summary: &MeasurementSummary) -> Result<Vec<f64>> {
        self.features.iter().map(|f| f.value(summary)).collect()
    }
}
