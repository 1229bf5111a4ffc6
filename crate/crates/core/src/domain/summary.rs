use serde::{Deserialize, Serialize};

use super::{MemorySize, MetricVector};
use crate::{Error, Result};

/// Aggregated measurements of one function at one memory size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementSummary {
    pub function_id: String,
    pub memory: MemorySize,
    pub sample_count: u64,
    pub mean: MetricVector,
    pub std: MetricVector,
    /// Requests per second of the load that produced the samples.
    pub request_rate: f64,
    /// Measurement duration in seconds.
    pub duration: f64,
}

impl MeasurementSummary {
    pub fn validate(&self) -> Result<()> {
        if self.sample_count == 0 {
            return Err(Error::domain(format!("{}: sample_count must be >= 1", self.function_id)));
        }
        self.mean.check_invariants()?;
        for (metric, s) in self.std.to_array().into_iter().enumerate() {
            if !(s.is_finite() && s >= 0.0) {
                return Err(Error::domain(format!(
                    "{}: std of {} must be >= 0",
                    self.function_id,
                    crate::domain::Metric::ALL[metric]
                )));
            }
            if self.sample_count == 1 && s != 0.0 {
                return Err(Error::domain(format!(
                    "{}: std must be 0 for a single sample",
                    self.function_id
                )));
            }
        }
        if !(self.mean.execution_time > 0.0) {
            return Err(Error::domain(format!(
                "{}: mean execution time must be positive",
                self.function_id
            )));
        }
        Ok(())
    }
}
