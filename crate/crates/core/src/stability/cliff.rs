use crate::{Error, Result};

/// Conventional magnitude bands for |delta|.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EffectMagnitude {
    Negligible,
    Small,
    Medium,
    Large,
}

impl EffectMagnitude {
    pub fn of(delta: f64) -> Self {
        let d = delta.abs();
        if d < 0.147 {
            EffectMagnitude::Negligible
        } else if d < 0.33 {
            EffectMagnitude::Small
        } else if d < 0.474 {
            EffectMagnitude::Medium
        } else {
            EffectMagnitude::Large
        }
    }
}

/// `(#{a > b} - #{a < b}) / (n_a n_b)` over all pairs.
///
/// Runs in `O((n_a + n_b) log n_b)` by binary-searching each `a` in sorted `b`.
pub fn cliffs_delta(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::domain("cliffs_delta needs two nonempty samples"));
    }
    if a.iter().chain(b).any(|x| !x.is_finite()) {
        return Err(Error::domain("cliffs_delta sample contains a non-finite value"));
    }
    let mut sorted_b = b.to_vec();
    sorted_b.sort_by(f64::total_cmp);
    let mut dominance: i64 = 0;
    for &x in a {
        let below = sorted_b.partition_point(|&y| y < x) as i64;
        let not_above = sorted_b.partition_point(|&y| y <= x) as i64;
        let above = sorted_b.len() as i64 - not_above;
        dominance += below - above;
    }
    Ok(dominance as f64 / (a.len() * b.len()) as f64)
}
