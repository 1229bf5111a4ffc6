use crate::domain::{ExecutionCurve, MeasurementSummary, MemorySize};
use crate::features::{FeatureSet, TrainingSet};
use crate::{Error, Result};

use super::fit::{fit, FittedNetwork};
use super::Hyperparameters;

/// Lower bound applied to predicted ratios so every predicted time stays positive.
pub const RATIO_FLOOR: f64 = 1e-3;

/// Predicts a function's full execution curve from one measurement at the base size.
#[derive(Clone, Debug, PartialEq)]
pub struct RegressionModel {
    pub base: MemorySize,
    pub feature_set: FeatureSet,
    pub fitted: FittedNetwork,
}

impl RegressionModel {
    /// Target sizes in output order.
    pub fn target_sizes(&self) -> [MemorySize; 5] {
        self.base.others()
    }

    /// Ratios for a raw feature row, floored at `RATIO_FLOOR`.
    pub fn predict_ratios(&self, features: &[f64]) -> Result<[f64; 5]> {
        let out = self.fitted.predict(std::slice::from_ref(&features.to_vec()))?;
        let mut ratios = [0.0; 5];
        for (r, v) in ratios.iter_mut().zip(&out[0]) {
            *r = v.max(RATIO_FLOOR);
        }
        Ok(ratios)
    }

    pub fn predict(&self, summary: &MeasurementSummary) -> Result<ExecutionCurve> {
        if summary.memory != self.base {
            return Err(Error::domain(format!(
                "model expects a measurement at {}, got {}",
                self.base, summary.memory
            )));
        }
        summary.validate()?;
        let ratios = self.predict_ratios(&self.feature_set.extract(summary)?)?;
        let base_time = summary.mean.execution_time;
        let mut pairs = vec![(self.base, base_time)];
        pairs.extend(self.target_sizes().iter().zip(ratios).map(|(&m, r)| (m, r * base_time)));
        ExecutionCurve::from_pairs(pairs)
    }
}

pub fn train(set: &TrainingSet, hp: &Hyperparameters) -> Result<RegressionModel> {
    if let Some(row) = set.rows.iter().find(|r| r.targets.base != set.base) {
        return Err(Error::domain(format!(
            "row {} targets base {} but the set uses {}",
            row.function_id, row.targets.base, set.base
        )));
    }
    let fitted = fit(&set.inputs(), &set.outputs(), hp)?;
    if fitted.standardizer.width() != set.feature_set.len() {
        return Err(Error::domain("feature rows do not match the feature set"));
    }
    Ok(RegressionModel {
        base: set.base,
        feature_set: set.feature_set.clone(),
        fitted,
    })
}
