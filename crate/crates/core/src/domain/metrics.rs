use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

macro_rules! metrics {
    ($( $variant:ident => $field:ident ),+ $(,)?) => {
        /// One of the per-execution resource-consumption metrics.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum Metric {
            $( $variant, )+
        }

        impl Metric {
            /// Every metric in field order.
            pub const ALL: [Metric; METRIC_COUNT] = [ $( Metric::$variant, )+ ];

            pub fn name(self) -> &'static str {
                match self {
                    $( Metric::$variant => stringify!($field), )+
                }
            }
        }

        impl FromStr for Metric {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $( stringify!($field) => Ok(Metric::$variant), )+
                    other => Err(Error::domain(format!("unknown metric `{other}`"))),
                }
            }
        }

        /// One value per [`Metric`]. Times are in ms, sizes in bytes.
        #[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct MetricVector {
            $( pub $field: f64, )+
        }

        impl MetricVector {
            pub fn get(&self, metric: Metric) -> f64 {
                match metric {
                    $( Metric::$variant => self.$field, )+
                }
            }

            pub fn get_mut(&mut self, metric: Metric) -> &mut f64 {
                match metric {
                    $( Metric::$variant => &mut self.$field, )+
                }
            }

            pub fn to_array(&self) -> [f64; METRIC_COUNT] {
                [ $( self.$field, )+ ]
            }

            pub fn from_array(values: [f64; METRIC_COUNT]) -> Self {
                let mut it = values.into_iter();
                MetricVector {
                    $( $field: it.next().unwrap(), )+
                }
            }
        }
    };
}

pub const METRIC_COUNT: usize = 25;

metrics! {
    ExecutionTime => execution_time,
    UserCpuTime => user_cpu_time,
    SystemCpuTime => system_cpu_time,
    VolContextSwitches => vol_context_switches,
    InvolContextSwitches => invol_context_switches,
    FsReads => fs_reads,
    FsWrites => fs_writes,
    ResidentSet => resident_set,
    MaxResidentSet => max_resident_set,
    TotalHeap => total_heap,
    HeapUsed => heap_used,
    PhysicalHeap => physical_heap,
    AvailableHeap => available_heap,
    HeapLimit => heap_limit,
    AllocatedMemory => allocated_memory,
    ExternalMemory => external_memory,
    BytecodeMetadata => bytecode_metadata,
    BytesReceived => bytes_received,
    BytesTransmitted => bytes_transmitted,
    PackagesReceived => packages_received,
    PackagesTransmitted => packages_transmitted,
    MinEventLoopLag => min_event_loop_lag,
    MaxEventLoopLag => max_event_loop_lag,
    MeanEventLoopLag => mean_event_loop_lag,
    StdEventLoopLag => std_event_loop_lag,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Metric {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Metric {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let name = String::deserialize(deserializer)?;
        name.parse().map_err(serde::de::Error::custom)
    }
}

impl MetricVector {
    pub fn map(&self, mut f: impl FnMut(Metric, f64) -> f64) -> Self {
        let mut out = *self;
        for metric in Metric::ALL {
            *out.get_mut(metric) = f(metric, self.get(metric));
        }
        out
    }

    /// Check nonnegativity and the ordering relations between related fields.
    pub fn check_invariants(&self) -> Result<()> {
        for metric in Metric::ALL {
            let v = self.get(metric);
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::domain(format!("metric {metric} must be finite and >= 0, got {v}")));
            }
        }
        // relative slack for values that went through float accumulation
        let leq = |a: f64, b: f64| a <= b + 1e-9 * b.abs().max(1.0);
        if !(leq(self.min_event_loop_lag, self.mean_event_loop_lag)
            && leq(self.mean_event_loop_lag, self.max_event_loop_lag))
        {
            return Err(Error::domain(format!(
                "event loop lag must satisfy min <= mean <= max, got {} / {} / {}",
                self.min_event_loop_lag, self.mean_event_loop_lag, self.max_event_loop_lag
            )));
        }
        if !leq(self.heap_used, self.total_heap) {
            return Err(Error::domain(format!(
                "heap_used {} exceeds total_heap {}",
                self.heap_used, self.total_heap
            )));
        }
        Ok(())
    }
}
