use serde::{Deserialize, Serialize};

use crate::domain::{Metric, MemorySize, MetricVector};
use crate::{Error, Result};

const KIB: f64 = 1024.0;
const MIB: f64 = 1024.0 * 1024.0;

/// Slowdown of a memory-pressure segment: its compute time is multiplied by
/// `1 + PRESSURE_SLOWDOWN * s^2`, where `s` is the fraction of the working set
/// that does not fit in the allocation.
pub const PRESSURE_SLOWDOWN: f64 = 3.0;

/// Behavioral archetype of a function segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    /// Compute; time scales as 1 / capacity, capacity linear in memory.
    CpuBound,
    /// Transfer limited by the remote end; constant in memory.
    NetworkBound,
    /// File-system I/O; capacity grows with the square root of memory.
    FsIo,
    /// Touches a working set of `work_units` MB; scales like CPU work, slowed
    /// by memory pressure that vanishes once memory exceeds the working set.
    MemoryPressure,
    /// Waiting on an external service; constant in memory.
    ExternalServiceWait,
}

impl SegmentKind {
    pub const ALL: [SegmentKind; 5] = [
        SegmentKind::CpuBound,
        SegmentKind::NetworkBound,
        SegmentKind::FsIo,
        SegmentKind::MemoryPressure,
        SegmentKind::ExternalServiceWait,
    ];

    /// Archetype emission coefficients.
    ///
    /// `execution_time` is ms per work unit at the 128 MB reference capacity.
    /// `user_cpu_time` and `system_cpu_time` are CPU ms per ms of realized
    /// segment duration. Every other field is emitted per work unit.
    pub fn signature(self) -> MetricVector {
        match self {
            SegmentKind::CpuBound => MetricVector {
                execution_time: 1.0,
                user_cpu_time: 0.93,
                system_cpu_time: 0.04,
                vol_context_switches: 0.002,
                invol_context_switches: 0.04,
                resident_set: 4.0 * KIB,
                max_resident_set: 6.0 * KIB,
                total_heap: 3.0 * KIB,
                heap_used: 2.0 * KIB,
                physical_heap: 3.0 * KIB,
                allocated_memory: 0.5 * KIB,
                bytecode_metadata: 96.0,
                min_event_loop_lag: 0.0005,
                max_event_loop_lag: 0.05,
                mean_event_loop_lag: 0.01,
                std_event_loop_lag: 0.012,
                ..Default::default()
            },
            SegmentKind::NetworkBound => MetricVector {
                execution_time: 1.0,
                user_cpu_time: 0.06,
                system_cpu_time: 0.10,
                vol_context_switches: 0.4,
                invol_context_switches: 0.005,
                resident_set: 16.0 * KIB,
                max_resident_set: 20.0 * KIB,
                total_heap: 12.0 * KIB,
                heap_used: 8.0 * KIB,
                physical_heap: 10.0 * KIB,
                allocated_memory: 1.0 * KIB,
                external_memory: 16.0 * KIB,
                bytes_received: 25_000.0,
                bytes_transmitted: 2_500.0,
                packages_received: 18.0,
                packages_transmitted: 4.0,
                min_event_loop_lag: 0.0001,
                max_event_loop_lag: 0.004,
                mean_event_loop_lag: 0.001,
                std_event_loop_lag: 0.001,
                ..Default::default()
            },
            SegmentKind::FsIo => MetricVector {
                execution_time: 1.0,
                user_cpu_time: 0.12,
                system_cpu_time: 0.5,
                vol_context_switches: 0.25,
                invol_context_switches: 0.02,
                fs_reads: 1.5,
                fs_writes: 2.5,
                resident_set: 8.0 * KIB,
                max_resident_set: 10.0 * KIB,
                total_heap: 4.0 * KIB,
                heap_used: 3.0 * KIB,
                physical_heap: 4.0 * KIB,
                allocated_memory: 2.0 * KIB,
                external_memory: 4.0 * KIB,
                min_event_loop_lag: 0.0002,
                max_event_loop_lag: 0.01,
                mean_event_loop_lag: 0.002,
                std_event_loop_lag: 0.002,
                ..Default::default()
            },
            SegmentKind::MemoryPressure => MetricVector {
                execution_time: 0.5,
                user_cpu_time: 0.75,
                system_cpu_time: 0.12,
                vol_context_switches: 0.01,
                invol_context_switches: 0.08,
                resident_set: 1.15 * MIB,
                max_resident_set: 1.25 * MIB,
                total_heap: 1.05 * MIB,
                heap_used: 0.95 * MIB,
                physical_heap: 1.0 * MIB,
                allocated_memory: 0.12 * MIB,
                external_memory: 0.02 * MIB,
                min_event_loop_lag: 0.002,
                max_event_loop_lag: 0.8,
                mean_event_loop_lag: 0.08,
                std_event_loop_lag: 0.15,
                ..Default::default()
            },
            SegmentKind::ExternalServiceWait => MetricVector {
                execution_time: 1.0,
                user_cpu_time: 0.01,
                system_cpu_time: 0.015,
                vol_context_switches: 0.03,
                invol_context_switches: 0.001,
                resident_set: 512.0,
                max_resident_set: 1024.0,
                total_heap: 512.0,
                heap_used: 256.0,
                physical_heap: 512.0,
                allocated_memory: 64.0,
                external_memory: 256.0,
                bytes_received: 300.0,
                bytes_transmitted: 200.0,
                packages_received: 0.4,
                packages_transmitted: 0.3,
                max_event_loop_lag: 0.001,
                mean_event_loop_lag: 0.0002,
                std_event_loop_lag: 0.0002,
                ..Default::default()
            },
        }
    }
}

/// One building block of a synthetic function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentSpec {
    pub kind: SegmentKind,
    pub work_units: f64,
    pub metric_signature: MetricVector,
}

impl SegmentSpec {
    /// A segment with its archetype's signature.
    pub fn archetype(kind: SegmentKind, work_units: f64) -> Result<Self> {
        let spec = SegmentSpec {
            kind,
            work_units,
            metric_signature: kind.signature(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.work_units.is_finite() && self.work_units > 0.0) {
            return Err(Error::domain(format!(
                "segment work_units must be positive, got {}",
                self.work_units
            )));
        }
        for metric in Metric::ALL {
            let c = self.metric_signature.get(metric);
            if !(c.is_finite() && c >= 0.0) {
                return Err(Error::domain(format!(
                    "emission coefficient for {metric} must be >= 0, got {c}"
                )));
            }
        }
        Ok(())
    }

    /// Noise-free duration (ms) of this segment at `memory`.
    pub fn duration_ms(&self, memory: MemorySize) -> f64 {
        let capacity = f64::from(memory.megabytes()) / 128.0;
        let reference = self.metric_signature.execution_time * self.work_units;
        match self.kind {
            SegmentKind::CpuBound => reference / capacity,
            SegmentKind::NetworkBound | SegmentKind::ExternalServiceWait => reference,
            SegmentKind::FsIo => reference / capacity.sqrt(),
            SegmentKind::MemoryPressure => {
                let working_set = self.work_units;
                let shortfall = (1.0 - f64::from(memory.megabytes()) / working_set).max(0.0);
                reference / capacity * (1.0 + PRESSURE_SLOWDOWN * shortfall * shortfall)
            }
        }
    }
}
