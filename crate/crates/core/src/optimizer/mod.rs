//! Cost/performance scoring of execution curves and memory-size selection.

use std::fmt::Write;

use rust_decimal::prelude::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::domain::{execution_cost, Decimal, ExecutionCurve, MeasurementSummary, MemorySize, PricingModel};
use crate::model::RegressionModel;
use crate::{Error, Result};

/// Weight of cost against performance, in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct TradeoffParameter(f64);

impl TradeoffParameter {
    pub const DEFAULT: TradeoffParameter = TradeoffParameter(0.75);

    pub fn new(t: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&t) {
            Ok(TradeoffParameter(t))
        } else {
            Err(Error::domain(format!("tradeoff t must lie in [0, 1], got {t}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl Default for TradeoffParameter {
    fn default() -> Self {
        Self::DEFAULT
    }
}

impl TryFrom<f64> for TradeoffParameter {
    type Error = Error;
    fn try_from(t: f64) -> Result<Self> {
        Self::new(t)
    }
}

impl From<TradeoffParameter> for f64 {
    fn from(t: TradeoffParameter) -> f64 {
        t.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeScore {
    pub memory: MemorySize,
    pub execution_time: f64,
    pub cost: Decimal,
    pub s_cost: f64,
    pub s_perf: f64,
    pub s_total: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizingRecommendation {
    pub tradeoff: TradeoffParameter,
    /// Ascending memory.
    pub scores: Vec<SizeScore>,
    pub chosen: MemorySize,
    /// Sizes by ascending `s_total`, smaller memory first on ties.
    pub ranking: Vec<MemorySize>,
}

impl SizingRecommendation {
    pub fn score_of(&self, memory: MemorySize) -> &SizeScore {
        &self.scores[memory.index()]
    }

    pub fn chosen_score(&self) -> &SizeScore {
        self.score_of(self.chosen)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("recommendation serialization cannot fail")
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:>7}  {:>12}  {:>14}  {:>8}  {:>8}  {:>8}  {:>4}\n",
            "memory", "time_ms", "cost_usd", "s_cost", "s_perf", "s_total", "rank"
        );
        for s in &self.scores {
            let rank = self.ranking.iter().position(|&m| m == s.memory).unwrap() + 1;
            let marker = if s.memory == self.chosen { " *" } else { "" };
            let _ = writeln!(
                out,
                "{:>7}  {:>12.3}  {:>14.10}  {:>8.4}  {:>8.4}  {:>8.4}  {:>4}{marker}",
                s.memory.to_string(),
                s.execution_time,
                s.cost,
                s.s_cost,
                s.s_perf,
                s.s_total,
                rank
            );
        }
        let _ = writeln!(out, "t = {}, recommended {}", self.tradeoff.get(), self.chosen);
        out
    }
}

/// Score every size of `curve` and choose the argmin of
/// `t * s_cost + (1 - t) * s_perf`.
pub fn score(curve: &ExecutionCurve, pricing: &PricingModel, t: TradeoffParameter) -> Result<SizingRecommendation> {
    let costs = MemorySize::ALL
        .iter()
        .map(|&m| execution_cost(curve.time(m), m, pricing))
        .collect::<Result<Vec<_>>>()?;
    let min_cost = *costs.iter().min().unwrap();
    let min_time = curve.times().iter().copied().fold(f64::INFINITY, f64::min);
    let scores: Vec<SizeScore> = MemorySize::ALL
        .iter()
        .zip(costs)
        .map(|(&m, cost)| {
            let s_cost = if min_cost.is_zero() {
                1.0
            } else {
                (cost / min_cost).to_f64().unwrap_or(f64::INFINITY)
            };
            let s_perf = curve.time(m) / min_time;
            SizeScore {
                memory: m,
                execution_time: curve.time(m),
                cost,
                s_cost,
                s_perf,
                s_total: t.get() * s_cost + (1.0 - t.get()) * s_perf,
            }
        })
        .collect();
    let mut order: Vec<usize> = (0..scores.len()).collect();
    // stable sort keeps ascending memory among equal totals
    order.sort_by(|&a, &b| scores[a].s_total.total_cmp(&scores[b].s_total));
    let ranking: Vec<MemorySize> = order.iter().map(|&i| scores[i].memory).collect();
    Ok(SizingRecommendation {
        tradeoff: t,
        chosen: ranking[0],
        scores,
        ranking,
    })
}

/// Predict the full curve from one monitored size, then score it.
pub fn optimize_from_monitoring(
    summary: &MeasurementSummary,
    model: &RegressionModel,
    pricing: &PricingModel,
    t: TradeoffParameter,
) -> Result<SizingRecommendation> {
    score(&model.predict(summary)?, pricing, t)
}

/// Position of the recommended size in the ground-truth ordering: one more
/// than the number of sizes with a strictly lower ground-truth total.
pub fn rank_quality(
    recommended: &SizingRecommendation,
    ground_truth: &ExecutionCurve,
    pricing: &PricingModel,
    t: TradeoffParameter,
) -> Result<usize> {
    let truth = score(ground_truth, pricing, t)?;
    let chosen = truth.score_of(recommended.chosen).s_total;
    Ok(1 + truth.scores.iter().filter(|s| s.s_total < chosen).count())
}

/// Percentage changes from moving `old` to `new`, each positive when the new size is better.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Benefit {
    pub cost_delta_pct: f64,
    pub speedup_pct: f64,
}

pub fn benefit(old: MemorySize, new: MemorySize, ground_truth: &ExecutionCurve, pricing: &PricingModel) -> Result<Benefit> {
    let old_cost = execution_cost(ground_truth.time(old), old, pricing)?;
    let new_cost = execution_cost(ground_truth.time(new), new, pricing)?;
    let cost_ratio = if old_cost.is_zero() {
        1.0
    } else {
        (new_cost / old_cost).to_f64().unwrap_or(f64::INFINITY)
    };
    Ok(Benefit {
        cost_delta_pct: 100.0 * (1.0 - cost_ratio),
        speedup_pct: 100.0 * (1.0 - ground_truth.time(new) / ground_truth.time(old)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(times: [f64; 6]) -> ExecutionCurve {
        ExecutionCurve::new(times).unwrap()
    }

    fn t(v: f64) -> TradeoffParameter {
        TradeoffParameter::new(v).unwrap()
    }

    #[test]
    fn tradeoff_bounds() {
        assert!(TradeoffParameter::new(-0.01).is_err());
        assert!(TradeoffParameter::new(1.01).is_err());
        assert!(TradeoffParameter::new(f64::NAN).is_err());
        assert_eq!(TradeoffParameter::default().get(), 0.75);
        assert!(serde_json::from_str::<TradeoffParameter>("2.0").is_err());
    }

    #[test]
    fn hand_evaluated_curve() {
        let c = curve([1000.0, 500.0, 400.0, 380.0, 370.0, 365.0]);
        let r = score(&c, &PricingModel::aws_default(), t(0.5)).unwrap();
        let price = 0.000_016_67;
        let cost: Vec<f64> = MemorySize::ALL
            .iter()
            .zip(c.times())
            .map(|(m, d)| d / 1000.0 * m.megabytes() as f64 / 1024.0 * price + 2e-7)
            .collect();
        let min_cost = cost.iter().copied().fold(f64::INFINITY, f64::min);
        for (i, s) in r.scores.iter().enumerate() {
            let s_cost = cost[i] / min_cost;
            let s_perf = c.times()[i] / 365.0;
            assert!((s.s_cost - s_cost).abs() < 1e-12);
            assert!((s.s_total - (0.5 * s_cost + 0.5 * s_perf)).abs() < 1e-12);
        }
        // 128 and 256 cost the same; 256 is faster
        assert_eq!(r.score_of(MemorySize::MB_128).cost, r.score_of(MemorySize::MB_256).cost);
        assert_eq!(r.chosen, MemorySize::MB_256);
        assert_eq!(r.ranking[0], MemorySize::MB_256);
    }

    #[test]
    fn extremes_of_t() {
        let c = curve([1000.0, 500.0, 400.0, 380.0, 370.0, 365.0]);
        let p = PricingModel::aws_default();
        assert_eq!(score(&c, &p, t(0.0)).unwrap().chosen, MemorySize::MB_3008);
        assert_eq!(score(&c, &p, t(1.0)).unwrap().chosen, MemorySize::MB_128);
    }

    #[test]
    fn flat_curve_prefers_smallest() {
        let c = curve([200.0; 6]);
        for v in [0.0, 0.3, 1.0] {
            assert_eq!(score(&c, &PricingModel::aws_default(), t(v)).unwrap().chosen, MemorySize::MB_128);
        }
    }

    #[test]
    fn rank_of_truth_and_second_best() {
        let c = curve([1000.0, 500.0, 400.0, 380.0, 370.0, 365.0]);
        let p = PricingModel::aws_default();
        let truth = score(&c, &p, t(0.75)).unwrap();
        assert_eq!(rank_quality(&truth, &c, &p, t(0.75)).unwrap(), 1);
        let second = SizingRecommendation {
            chosen: truth.ranking[1],
            ..truth.clone()
        };
        assert_eq!(rank_quality(&second, &c, &p, t(0.75)).unwrap(), 2);
    }

    #[test]
    fn benefit_arithmetic() {
        let p = PricingModel::free();
        let c = curve([1000.0, 500.0, 400.0, 380.0, 370.0, 365.0]);
        assert_eq!(
            benefit(MemorySize::MB_256, MemorySize::MB_256, &c, &p).unwrap(),
            Benefit { cost_delta_pct: 0.0, speedup_pct: 0.0 }
        );
        // halving time at double memory leaves cost unchanged
        let b = benefit(MemorySize::MB_128, MemorySize::MB_256, &c, &PricingModel::new(Decimal::new(1667, 8), Decimal::ZERO).unwrap()).unwrap();
        assert_eq!(b.speedup_pct, 50.0);
        assert_eq!(b.cost_delta_pct, 0.0);
    }

    #[test]
    fn table_marks_choice() {
        let r = score(&curve([1000.0, 500.0, 400.0, 380.0, 370.0, 365.0]), &PricingModel::aws_default(), t(0.5)).unwrap();
        let table = r.to_table();
        assert_eq!(table.lines().count(), 8);
        assert!(table.lines().nth(2).unwrap().ends_with('*'));
        let back: SizingRecommendation = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
