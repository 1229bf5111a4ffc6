//! Core vocabulary shared by every module.

mod curve;
pub mod jsonl;
mod memory;
mod metrics;
mod pricing;
mod summary;

pub use curve::ExecutionCurve;
pub use memory::MemorySize;
pub use metrics::{Metric, MetricVector, METRIC_COUNT};
pub use pricing::{execution_cost, PricingModel};
pub use summary::MeasurementSummary;

pub use rust_decimal::Decimal;
