//! Two-sample tests and measurement-duration analysis.

mod analysis;
mod cliff;
mod mann_whitney;

pub use analysis::{stability_analysis, analyze_trace, StabilityReport, TraceFlags, DEFAULT_ALPHA};
pub use cliff::{cliffs_delta, EffectMagnitude};
pub use mann_whitney::{
    mann_whitney_u, mann_whitney_u_exact, mann_whitney_u_normal, mann_whitney_u_sorted, MannWhitney,
    EXACT_LIMIT,
};
