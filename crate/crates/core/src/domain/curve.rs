use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::MemorySize;
use crate::{Error, Result};

/// Mean execution time (ms) at each of the six memory sizes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExecutionCurve {
    times: [f64; 6],
}

impl ExecutionCurve {
    /// Times in [`MemorySize::ALL`] order; every entry must be positive.
    pub fn new(times: [f64; 6]) -> Result<Self> {
        for (m, t) in MemorySize::ALL.iter().zip(times) {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::domain(format!("execution time at {m} must be positive, got {t}")));
            }
        }
        Ok(ExecutionCurve { times })
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (MemorySize, f64)>) -> Result<Self> {
        let mut times = [f64::NAN; 6];
        let mut seen = [false; 6];
        for (m, t) in pairs {
            times[m.index()] = t;
            seen[m.index()] = true;
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::domain(format!(
                "execution curve is missing {}",
                MemorySize::ALL[i]
            )));
        }
        Self::new(times)
    }

    pub fn time(&self, memory: MemorySize) -> f64 {
        self.times[memory.index()]
    }

    pub fn times(&self) -> [f64; 6] {
        self.times
    }

    pub fn iter(&self) -> impl Iterator<Item = (MemorySize, f64)> + '_ {
        MemorySize::ALL.into_iter().zip(self.times)
    }

    /// Multiply every time by `factor` (> 0).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.times.map(|t| t * factor))
    }
}

impl Serialize for ExecutionCurve {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<u32, f64> = self.iter().map(|(m, t)| (m.megabytes(), t)).collect();
        map.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExecutionCurve {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let map = BTreeMap::<u32, f64>::deserialize(deserializer)?;
        let pairs = map
            .into_iter()
            .map(|(mb, t)| MemorySize::new(mb).map(|m| (m, t)))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        ExecutionCurve::from_pairs(pairs).map_err(serde::de::Error::custom)
    }
}
