use crate::domain::{MeasurementSummary, Metric};
use crate::{Error, Result};

use super::set::{coefficient_of_variation, per_second};
use super::{FeatureSet, FeatureStage};

/// Append per-second rates to an F1 feature vector.
///
/// `values` holds `f1.extract(summary)`; one rate is appended for every F1
/// metric other than execution time, matching [`FeatureSet::relative_from`].
pub fn derive_relative_features(f1: &FeatureSet, values: &[f64], execution_time_ms: f64) -> Result<Vec<f64>> {
    if f1.stage() != FeatureStage::F1 {
        return Err(Error::domain("relative features are derived from an F1 set"));
    }
    if values.len() != f1.len() {
        return Err(Error::domain(format!(
            "expected {} F1 values, got {}",
            f1.len(),
            values.len()
        )));
    }
    let mut out = values.to_vec();
    for (feature, &value) in f1.features().iter().zip(values) {
        if feature.metric() != Metric::ExecutionTime {
            out.push(per_second(value, execution_time_ms)?);
        }
    }
    if out.len() == values.len() {
        // still validate the execution time when there was nothing to normalize
        per_second(0.0, execution_time_ms)?;
    }
    Ok(out)
}

/// F4 vectors for every summary: the F3 values followed by the std and CV of
/// each distinct F3 metric.
pub fn add_dispersion_features(f3: &FeatureSet, summaries: &[MeasurementSummary]) -> Result<(FeatureSet, Vec<Vec<f64>>)> {
    let f4 = FeatureSet::dispersion_from(f3)?;
    let vectors = summaries
        .iter()
        .map(|s| {
            let mut v = f3.extract(s)?;
            let metrics: Vec<Metric> = f4.features()[f3.len()..]
                .iter()
                .take((f4.len() - f3.len()) / 2)
                .map(|f| f.metric())
                .collect();
            v.extend(metrics.iter().map(|&m| s.std.get(m)));
            v.extend(metrics.iter().map(|&m| coefficient_of_variation(s.mean.get(m), s.std.get(m))));
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((f4, vectors))
}
