use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::domain::{MeasurementSummary, MemorySize};
use crate::{Error, Result};

use super::FeatureSet;

/// Execution time at each non-base size divided by the base execution time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetVector {
    pub base: MemorySize,
    /// Ratios for `base.others()`, ascending memory.
    pub ratios: [f64; 5],
}

impl TargetVector {
    pub fn new(base: MemorySize, ratios: [f64; 5]) -> Result<Self> {
        if let Some(r) = ratios.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(Error::domain(format!("target ratios must be positive, got {r}")));
        }
        Ok(TargetVector { base, ratios })
    }

    pub fn sizes(&self) -> [MemorySize; 5] {
        self.base.others()
    }

    pub fn ratio(&self, memory: MemorySize) -> Option<f64> {
        self.sizes().iter().position(|m| *m == memory).map(|i| self.ratios[i])
    }
}

/// Split one function's six summaries into the base-size input and the
/// ratio targets.
pub fn make_targets(summaries: &[MeasurementSummary], base: MemorySize) -> Result<(&MeasurementSummary, TargetVector)> {
    let find = |m: MemorySize| {
        summaries.iter().find(|s| s.memory == m).ok_or_else(|| {
            let id = summaries.first().map(|s| s.function_id.as_str()).unwrap_or("<empty>");
            Error::domain(format!("{id}: no measurement at {m}"))
        })
    };
    let input = find(base)?;
    let base_time = input.mean.execution_time;
    if !(base_time > 0.0) {
        return Err(Error::domain(format!("{}: base execution time must be positive", input.function_id)));
    }
    let mut ratios = [0.0; 5];
    for (ratio, m) in ratios.iter_mut().zip(base.others()) {
        *ratio = find(m)?.mean.execution_time / base_time;
    }
    Ok((input, TargetVector::new(base, ratios)?))
}

/// All six measurements of one function, indexed by [`MemorySize::index`].
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionMeasurements {
    pub function_id: String,
    pub by_size: Vec<MeasurementSummary>,
}

impl FunctionMeasurements {
    pub fn at(&self, memory: MemorySize) -> &MeasurementSummary {
        &self.by_size[memory.index()]
    }

    /// Measured mean execution time at every size.
    pub fn measured_curve(&self) -> Result<crate::domain::ExecutionCurve> {
        crate::domain::ExecutionCurve::new(MemorySize::ALL.map(|m| self.at(m).mean.execution_time))
    }
}

/// Group a dataset by function, keeping first-appearance order. Every
/// function must have exactly one summary per memory size.
pub fn group_by_function(dataset: &[MeasurementSummary]) -> Result<Vec<FunctionMeasurements>> {
    let mut order: Vec<String> = Vec::new();
    let mut slots: HashMap<String, Vec<Option<MeasurementSummary>>> = HashMap::new();
    for (row, s) in dataset.iter().enumerate() {
        let entry = slots.entry(s.function_id.clone()).or_insert_with(|| {
            order.push(s.function_id.clone());
            vec![None; 6]
        });
        let slot = &mut entry[s.memory.index()];
        if slot.is_some() {
            return Err(Error::domain(format!(
                "row {}: duplicate measurement of {} at {}",
                row + 1,
                s.function_id,
                s.memory
            )));
        }
        *slot = Some(s.clone());
    }
    order
        .into_iter()
        .map(|id| {
            let by_size = slots
                .remove(&id)
                .unwrap()
                .into_iter()
                .zip(MemorySize::ALL)
                .map(|(s, m)| s.ok_or_else(|| Error::domain(format!("{id}: no measurement at {m}"))))
                .collect::<Result<Vec<_>>>()?;
            Ok(FunctionMeasurements { function_id: id, by_size })
        })
        .collect()
}

/// One regression example.
#[derive(Clone, Debug, PartialEq)]
pub struct RegressionRow {
    pub function_id: String,
    pub features: Vec<f64>,
    pub targets: TargetVector,
}

/// Regression rows for one base size and feature set.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainingSet {
    pub base: MemorySize,
    pub feature_set: FeatureSet,
    pub rows: Vec<RegressionRow>,
}

impl TrainingSet {
    pub fn subset(&self, indices: &[usize]) -> TrainingSet {
        TrainingSet {
            base: self.base,
            feature_set: self.feature_set.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    pub fn inputs(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.features.clone()).collect()
    }

    pub fn outputs(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.targets.ratios.to_vec()).collect()
    }
}

pub fn training_set(groups: &[FunctionMeasurements], base: MemorySize, feature_set: &FeatureSet) -> Result<TrainingSet> {
    let rows = groups
        .iter()
        .map(|g| {
            let (input, targets) = make_targets(&g.by_size, base)?;
            Ok(RegressionRow {
                function_id: g.function_id.clone(),
                features: feature_set.extract(input)?,
                targets,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TrainingSet {
        base,
        feature_set: feature_set.clone(),
        rows,
    })
}
