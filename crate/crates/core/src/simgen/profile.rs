use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{SegmentKind, SegmentSpec};
use crate::{seed, Error, Result};

pub const MAX_SEGMENTS: usize = 8;
pub const MAX_NOISE_CV: f64 = 0.5;

/// Ground-truth description of one synthetic function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionProfile {
    pub function_id: String,
    pub segments: Vec<SegmentSpec>,
    /// Coefficient of variation of the per-request multiplicative noise.
    pub noise_cv: f64,
    pub seed: u64,
}

impl FunctionProfile {
    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() || self.segments.len() > MAX_SEGMENTS {
            return Err(Error::domain(format!(
                "{}: a profile needs 1..={MAX_SEGMENTS} segments, got {}",
                self.function_id,
                self.segments.len()
            )));
        }
        if !(0.0..=MAX_NOISE_CV).contains(&self.noise_cv) {
            return Err(Error::domain(format!(
                "{}: noise_cv must be in [0, {MAX_NOISE_CV}], got {}",
                self.function_id, self.noise_cv
            )));
        }
        self.segments.iter().try_for_each(SegmentSpec::validate)
    }

    /// Structural identity of the segment list, used to reject duplicates.
    fn structure_key(&self) -> Vec<(SegmentKind, u64)> {
        self.segments
            .iter()
            .map(|s| (s.kind, s.work_units.to_bits()))
            .collect()
    }
}

/// Knobs for [`generate_profiles`].
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileConfig {
    pub noise_cv: f64,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        ProfileConfig { noise_cv: 0.1 }
    }
}

/// Relative draw weight and log-uniform work range of each archetype.
fn kind_table() -> [(SegmentKind, f64, (f64, f64)); 5] {
    [
        (SegmentKind::CpuBound, 0.30, (20.0, 2500.0)),
        (SegmentKind::NetworkBound, 0.20, (10.0, 500.0)),
        (SegmentKind::FsIo, 0.15, (5.0, 400.0)),
        (SegmentKind::MemoryPressure, 0.15, (32.0, 2048.0)),
        (SegmentKind::ExternalServiceWait, 0.20, (10.0, 600.0)),
    ]
}

fn draw_segment(rng: &mut ChaCha8Rng, allow_memory_pressure: bool) -> SegmentSpec {
    let table = kind_table();
    let total: f64 = table
        .iter()
        .filter(|(k, _, _)| allow_memory_pressure || *k != SegmentKind::MemoryPressure)
        .map(|(_, w, _)| w)
        .sum();
    let mut pick = rng.random::<f64>() * total;
    let mut chosen = table[0];
    for entry in table {
        if !allow_memory_pressure && entry.0 == SegmentKind::MemoryPressure {
            continue;
        }
        chosen = entry;
        if pick < entry.1 {
            break;
        }
        pick -= entry.1;
    }
    let (kind, _, (lo, hi)) = chosen;
    let work = (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp();
    SegmentSpec {
        kind,
        work_units: work,
        metric_signature: kind.signature(),
    }
}

/// Generate `count` pairwise-distinct profiles deterministically from
/// `master_seed`.
///
/// Each profile gets 1 to 8 segments. A function has a single working set, so
/// at most one memory-pressure segment is drawn per profile.
pub fn generate_profiles(count: usize, master_seed: u64, config: &ProfileConfig) -> Result<Vec<FunctionProfile>> {
    if count == 0 {
        return Err(Error::domain("profile count must be at least 1"));
    }
    if !(0.0..=MAX_NOISE_CV).contains(&config.noise_cv) {
        return Err(Error::domain(format!(
            "noise_cv must be in [0, {MAX_NOISE_CV}], got {}",
            config.noise_cv
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(master_seed, "profiles"));
    let mut seen = HashSet::with_capacity(count);
    let mut profiles = Vec::with_capacity(count);
    while profiles.len() < count {
        let n_segments = rng.random_range(1..=MAX_SEGMENTS);
        let mut segments = Vec::with_capacity(n_segments);
        let mut has_working_set = false;
        for _ in 0..n_segments {
            let segment = draw_segment(&mut rng, !has_working_set);
            has_working_set |= segment.kind == SegmentKind::MemoryPressure;
            segments.push(segment);
        }
        let index = profiles.len();
        let profile = FunctionProfile {
            function_id: format!("fn-{index:05}"),
            segments,
            noise_cv: config.noise_cv,
            seed: seed::derive(master_seed, &format!("profile/{index}")),
        };
        if seen.insert(profile.structure_key()) {
            profiles.push(profile);
        }
    }
    Ok(profiles)
}
