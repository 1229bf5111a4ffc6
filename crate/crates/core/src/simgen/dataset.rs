use super::{simulate_measurement, FunctionProfile, WorkloadSpec};
use crate::domain::{MeasurementSummary, MemorySize};
use crate::parallel::{try_par_map, Workers};
use crate::{Error, Result};

/// Measure every profile at every memory size.
///
/// Output order is profile order, then ascending memory; it does not depend
/// on `workers`.
pub fn generate_dataset(
    profiles: &[FunctionProfile],
    workload: &WorkloadSpec,
    workers: Workers,
) -> Result<Vec<MeasurementSummary>> {
    if profiles.is_empty() {
        return Err(Error::domain("dataset generation needs at least one profile"));
    }
    workload.validate()?;
    let per_profile = try_par_map(profiles, workers, |profile| {
        MemorySize::ALL
            .iter()
            .map(|&m| simulate_measurement(profile, m, workload))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(per_profile.into_iter().flatten().collect())
}
