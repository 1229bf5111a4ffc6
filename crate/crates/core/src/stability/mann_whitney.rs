use statrs::function::erf::erfc;

use crate::{Error, Result};

/// Pooled sample sizes up to this use exact enumeration.
pub const EXACT_LIMIT: usize = 20;

/// Result of a two-sided Mann-Whitney U test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MannWhitney {
    /// `min(U_a, U_b)`.
    pub u_statistic: f64,
    pub p_value: f64,
}

/// Rank information of a pooled sample.
struct Ranked {
    n_a: usize,
    n_b: usize,
    /// U of sample `a`: rank sum of `a` minus `n_a (n_a + 1) / 2`.
    u_a: f64,
    /// Sum of `t^3 - t` over tie groups.
    tie_term: f64,
    /// Midrank of every pooled value, any order (used by the exact test).
    midranks: Vec<f64>,
}

fn check(sample: &[f64], name: &str) -> Result<()> {
    if sample.is_empty() {
        return Err(Error::domain(format!("{name} must not be empty")));
    }
    if sample.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain(format!("{name} contains a non-finite value")));
    }
    Ok(())
}

/// Merge two ascending samples and assign midranks.
fn rank_sorted(a: &[f64], b: &[f64], keep_midranks: bool) -> Ranked {
    let (n_a, n_b) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut next_rank = 1.0;
    let mut rank_sum_a = 0.0;
    let mut tie_term = 0.0;
    let mut midranks = Vec::new();
    while i < n_a || j < n_b {
        let value = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => unreachable!(),
        };
        let start_a = i;
        while i < n_a && a[i] == value {
            i += 1;
        }
        let start_b = j;
        while j < n_b && b[j] == value {
            j += 1;
        }
        let ties_a = (i - start_a) as f64;
        let group = ties_a + (j - start_b) as f64;
        let midrank = next_rank + (group - 1.0) / 2.0;
        rank_sum_a += ties_a * midrank;
        tie_term += group * group * group - group;
        if keep_midranks {
            midranks.extend(std::iter::repeat_n(midrank, group as usize));
        }
        next_rank += group;
    }
    let na = n_a as f64;
    Ranked {
        n_a,
        n_b,
        u_a: rank_sum_a - na * (na + 1.0) / 2.0,
        tie_term,
        midranks,
    }
}

fn normal_p(r: &Ranked) -> f64 {
    let (na, nb) = (r.n_a as f64, r.n_b as f64);
    let n = na + nb;
    let mu = na * nb / 2.0;
    let tie_correction = if n > 1.0 { r.tie_term / (n * (n - 1.0)) } else { 0.0 };
    let variance = na * nb / 12.0 * ((n + 1.0) - tie_correction);
    if variance <= 0.0 {
        return 1.0;
    }
    let z = ((r.u_a - mu).abs() - 0.5).max(0.0) / variance.sqrt();
    erfc(z / std::f64::consts::SQRT_2).min(1.0)
}

/// Two-sided p-value from enumerating every assignment of the pooled midranks
/// to a group of size `n_a`.
fn exact_p(r: &Ranked) -> f64 {
    let n = r.midranks.len();
    let k = r.n_a;
    let mu = (r.n_a * r.n_b) as f64 / 2.0;
    let observed = (r.u_a - mu).abs();
    let offset = (k * (k + 1)) as f64 / 2.0;
    let mut extreme = 0u64;
    let mut total = 0u64;
    // Gosper's hack over all k-subsets of n positions
    let mut subset: u32 = (1u32 << k) - 1;
    let limit: u32 = 1u32 << n;
    while subset < limit {
        let mut rank_sum = 0.0;
        let mut bits = subset;
        while bits != 0 {
            rank_sum += r.midranks[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        if ((rank_sum - offset) - mu).abs() >= observed - 1e-9 {
            extreme += 1;
        }
        total += 1;
        let lowest = subset & subset.wrapping_neg();
        let ripple = subset + lowest;
        subset = (((ripple ^ subset) >> 2) / lowest) | ripple;
    }
    extreme as f64 / total as f64
}

fn finish(r: &Ranked, p_value: f64) -> MannWhitney {
    let u_b = (r.n_a * r.n_b) as f64 - r.u_a;
    MannWhitney {
        u_statistic: r.u_a.min(u_b),
        p_value,
    }
}

fn sorted(sample: &[f64]) -> Vec<f64> {
    let mut v = sample.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Test on already-sorted (ascending) samples. Exact below
/// [`EXACT_LIMIT`] pooled values, tie-corrected normal approximation with
/// continuity correction above.
pub fn mann_whitney_u_sorted(a: &[f64], b: &[f64]) -> Result<MannWhitney> {
    check(a, "sample_a")?;
    check(b, "sample_b")?;
    let exact = a.len() + b.len() <= EXACT_LIMIT;
    let ranked = rank_sorted(a, b, exact);
    let p = if exact { exact_p(&ranked) } else { normal_p(&ranked) };
    Ok(finish(&ranked, p))
}

/// Two-sided Mann-Whitney U test with midrank tie handling.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<MannWhitney> {
    check(a, "sample_a")?;
    check(b, "sample_b")?;
    mann_whitney_u_sorted(&sorted(a), &sorted(b))
}

/// Always use exact enumeration (pooled size at most [`EXACT_LIMIT`]).
pub fn mann_whitney_u_exact(a: &[f64], b: &[f64]) -> Result<MannWhitney> {
    check(a, "sample_a")?;
    check(b, "sample_b")?;
    if a.len() + b.len() > EXACT_LIMIT {
        return Err(Error::domain(format!(
            "exact test supports at most {EXACT_LIMIT} pooled values"
        )));
    }
    let ranked = rank_sorted(&sorted(a), &sorted(b), true);
    Ok(finish(&ranked, exact_p(&ranked)))
}

/// Always use the normal approximation.
pub fn mann_whitney_u_normal(a: &[f64], b: &[f64]) -> Result<MannWhitney> {
    check(a, "sample_a")?;
    check(b, "sample_b")?;
    let ranked = rank_sorted(&sorted(a), &sorted(b), false);
    Ok(finish(&ranked, normal_p(&ranked)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_separation_small() {
        let r = mann_whitney_u(&[1.0, 2.0], &[3.0, 4.0]).unwrap();
        assert_eq!(r.u_statistic, 0.0);
        assert!((r.p_value - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn identical_samples() {
        let a = [3.0, 1.0, 4.0, 1.5, 9.0];
        let r = mann_whitney_u(&a, &a).unwrap();
        assert_eq!(r.u_statistic, 12.5);
        assert!(r.p_value >= 0.99);
    }

    #[test]
    fn shifted_large_samples() {
        let a: Vec<f64> = (1..=30).map(f64::from).collect();
        let b: Vec<f64> = a.iter().map(|x| x + 100.0).collect();
        let r = mann_whitney_u(&a, &b).unwrap();
        assert_eq!(r.u_statistic, 0.0);
        // z = (450 - 0.5) / sqrt(30*30*61/12)
        let z: f64 = 449.5 / (900.0 * 61.0 / 12.0f64).sqrt();
        let expected = erfc(z / std::f64::consts::SQRT_2);
        assert!((r.p_value - expected).abs() < 1e-15);
        assert!(r.p_value < 0.001);
    }

    #[test]
    fn all_tied_pooled_sample() {
        let r = mann_whitney_u(&[5.0; 40], &[5.0; 30]).unwrap();
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn empty_and_nan_rejected() {
        assert!(mann_whitney_u(&[], &[1.0]).is_err());
        assert!(mann_whitney_u(&[1.0], &[]).is_err());
        assert!(mann_whitney_u(&[f64::NAN], &[1.0]).is_err());
    }

    #[test]
    fn exact_limit_enforced() {
        assert!(mann_whitney_u_exact(&[0.0; 11], &[1.0; 10]).is_err());
    }
}
