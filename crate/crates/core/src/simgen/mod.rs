//! Parametric ground-truth simulator standing in for a cloud measurement
//! campaign.
//!
//! A [`FunctionProfile`] is an ordered list of [`SegmentSpec`]s, each one of
//! five behavioral archetypes. Every archetype has a declared scaling law in
//! memory size, so the noise-free execution time at any size
//! ([`ground_truth`]) is available as an oracle. [`simulate_measurement`]
//! samples individual requests around that expectation with multiplicative
//! lognormal noise and aggregates them into a
//! [`MeasurementSummary`](crate::domain::MeasurementSummary).

mod dataset;
mod measure;
mod profile;
mod segment;
mod truth;

pub use dataset::generate_dataset;
pub use measure::{simulate_measurement, simulate_trace, RequestTrace, WorkloadSpec};
pub use profile::{generate_profiles, FunctionProfile, ProfileConfig};
pub use segment::{SegmentKind, SegmentSpec, PRESSURE_SLOWDOWN};
pub use truth::{ground_truth, GroundTruthCurve};
