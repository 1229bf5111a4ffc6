use crate::domain::{Metric, METRIC_COUNT};
use crate::parallel::{try_par_map, Workers};
use crate::simgen::RequestTrace;
use crate::{Error, Result};

use super::mann_whitney_u_sorted;

pub const DEFAULT_ALPHA: f64 = 0.05;

/// Instability flags of one trace: `flags[metric][k - 1]` is true when the
/// first `k` minutes differ significantly from the full trace.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceFlags {
    pub function_id: String,
    pub flags: Vec<Vec<bool>>,
}

/// Per-metric, per-prefix-length counts of unstable functions.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport {
    pub full_minutes: usize,
    pub function_count: usize,
    /// `unstable[metric][k - 1]`, metrics in [`Metric::ALL`] order.
    pub unstable: Vec<Vec<usize>>,
    /// Smallest prefix length at which no metric is unstable for any function.
    pub recommended_minutes: usize,
}

impl StabilityReport {
    pub fn unstable_count(&self, metric: Metric, minutes: usize) -> usize {
        let index = Metric::ALL.iter().position(|m| *m == metric).unwrap();
        self.unstable[index][minutes - 1]
    }

    pub fn total_flags(&self) -> usize {
        self.unstable.iter().flatten().sum()
    }

    /// `metric,minutes,unstable_count`, one row per metric and prefix length.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,minutes,unstable_count\n");
        for (metric, counts) in Metric::ALL.iter().zip(&self.unstable) {
            for (k, count) in counts.iter().enumerate() {
                out.push_str(&format!("{},{},{}\n", metric.name(), k + 1, count));
            }
        }
        out
    }

    fn from_flags(flags: &[TraceFlags], full_minutes: usize) -> Self {
        let mut unstable = vec![vec![0; full_minutes]; METRIC_COUNT];
        for trace in flags {
            for (metric, per_k) in trace.flags.iter().enumerate() {
                for (k, &flag) in per_k.iter().enumerate() {
                    unstable[metric][k] += usize::from(flag);
                }
            }
        }
        let recommended_minutes = (1..=full_minutes)
            .find(|&k| unstable.iter().all(|per_k| per_k[k - 1] == 0))
            .unwrap_or(full_minutes);
        StabilityReport {
            full_minutes,
            function_count: flags.len(),
            unstable,
            recommended_minutes,
        }
    }
}

fn validate(full_minutes: usize, alpha: f64) -> Result<()> {
    if full_minutes == 0 {
        return Err(Error::domain("full duration must be at least one minute"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha must be in (0, 1), got {alpha}")));
    }
    Ok(())
}

/// Compare every prefix of `trace` against its first `full_minutes` minutes.
///
/// A prefix with no requests cannot be tested and counts as unstable.
pub fn analyze_trace(trace: &RequestTrace, full_minutes: usize, alpha: f64) -> Result<TraceFlags> {
    validate(full_minutes, alpha)?;
    let full_seconds = full_minutes as f64 * 60.0;
    if trace.duration + 1e-9 < full_seconds {
        return Err(Error::domain(format!(
            "{}: trace covers {} s, shorter than the {full_minutes}-minute analysis window",
            trace.function_id, trace.duration
        )));
    }
    let in_window = trace.arrivals.partition_point(|&t| t < full_seconds);
    let arrivals = &trace.arrivals[..in_window];
    let mut flags = Vec::with_capacity(METRIC_COUNT);
    for metric in Metric::ALL {
        let mut by_value: Vec<(f64, f64)> = trace.samples[..in_window]
            .iter()
            .zip(arrivals)
            .map(|(s, &t)| (s.get(metric), t))
            .collect();
        by_value.sort_by(|x, y| x.0.total_cmp(&y.0));
        let full: Vec<f64> = by_value.iter().map(|p| p.0).collect();
        let mut per_k = Vec::with_capacity(full_minutes);
        for k in 1..=full_minutes {
            let cutoff = k as f64 * 60.0;
            let prefix: Vec<f64> = by_value.iter().filter(|p| p.1 < cutoff).map(|p| p.0).collect();
            let flagged = if prefix.is_empty() || full.is_empty() {
                true
            } else {
                mann_whitney_u_sorted(&prefix, &full)?.p_value < alpha
            };
            per_k.push(flagged);
        }
        flags.push(per_k);
    }
    Ok(TraceFlags {
        function_id: trace.function_id.clone(),
        flags,
    })
}

/// Run [`analyze_trace`] on every trace and count instabilities.
pub fn stability_analysis(
    traces: &[RequestTrace],
    full_minutes: usize,
    alpha: f64,
    workers: Workers,
) -> Result<StabilityReport> {
    validate(full_minutes, alpha)?;
    let flags = try_par_map(traces, workers, |t| analyze_trace(t, full_minutes, alpha))?;
    Ok(StabilityReport::from_flags(&flags, full_minutes))
}
