use crate::domain::{ExecutionCurve, Metric, MemorySize, MetricVector};
use crate::{Error, Result};

use super::FunctionProfile;

const MIB: f64 = 1024.0 * 1024.0;

/// Noise-free execution curve plus the expected metric vector at each size.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundTruthCurve {
    pub curve: ExecutionCurve,
    expected: [MetricVector; 6],
}

impl GroundTruthCurve {
    pub fn expected(&self, memory: MemorySize) -> &MetricVector {
        &self.expected[memory.index()]
    }
}

/// Per-process resource usage of the runtime itself, independent of segments.
fn runtime_baseline(memory: MemorySize) -> MetricVector {
    MetricVector {
        resident_set: 38.0 * MIB,
        max_resident_set: 42.0 * MIB,
        total_heap: 6.0 * MIB,
        heap_used: 4.0 * MIB,
        physical_heap: 5.5 * MIB,
        heap_limit: 0.875 * f64::from(memory.megabytes()) * MIB,
        allocated_memory: 1.0 * MIB,
        external_memory: 1.2 * MIB,
        bytecode_metadata: 0.25 * MIB,
        min_event_loop_lag: 0.01,
        max_event_loop_lag: 0.2,
        mean_event_loop_lag: 0.05,
        std_event_loop_lag: 0.03,
        ..Default::default()
    }
}

fn expected_at(profile: &FunctionProfile, memory: MemorySize) -> MetricVector {
    let mut v = runtime_baseline(memory);
    for segment in &profile.segments {
        let duration = segment.duration_ms(memory);
        v.execution_time += duration;
        for metric in Metric::ALL {
            let coefficient = segment.metric_signature.get(metric);
            let contribution = match metric {
                Metric::ExecutionTime | Metric::AvailableHeap | Metric::HeapLimit => 0.0,
                Metric::UserCpuTime | Metric::SystemCpuTime => coefficient * duration,
                _ => coefficient * segment.work_units,
            };
            *v.get_mut(metric) += contribution;
        }
    }
    v.available_heap = (v.heap_limit - v.total_heap).max(0.0);
    v
}

/// Evaluate the declared scaling laws of every segment at all six sizes.
pub fn ground_truth(profile: &FunctionProfile) -> Result<GroundTruthCurve> {
    profile.validate()?;
    let expected = MemorySize::ALL.map(|m| expected_at(profile, m));
    let curve = ExecutionCurve::new(expected.map(|v| v.execution_time))?;
    for v in &expected {
        v.check_invariants()
            .map_err(|e| Error::domain(format!("{}: {e}", profile.function_id)))?;
    }
    Ok(GroundTruthCurve { curve, expected })
}
