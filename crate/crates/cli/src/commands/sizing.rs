use std::collections::HashMap;
use std::fmt::Write;
use std::path::Path;

use memtune_core::domain::{execution_cost, jsonl, ExecutionCurve, MeasurementSummary, MemorySize, PricingModel};
use memtune_core::model::{load_model, RegressionModel};
use memtune_core::optimizer::{
    benefit, optimize_from_monitoring, rank_quality, score, Benefit, SizingRecommendation, TradeoffParameter,
};
use memtune_core::simgen::{ground_truth, FunctionProfile};
use serde::Serialize;

use super::{emit, load_groups, pricing, required, write_output, Context};
use crate::config::{OptimizeOpts, PredictOpts, ReportOpts};
use crate::error::{invalid, Classify, CliResult};

/// Summaries at the model's base size; rows at other sizes are dropped, and
/// an input with none at the base is rejected naming both sizes.
fn base_summaries(rows: Vec<MeasurementSummary>, model: &RegressionModel, source: &str) -> CliResult<Vec<MeasurementSummary>> {
    if rows.is_empty() {
        return Err(invalid(format!("{source} contains no measurements")));
    }
    let other = rows[0].memory;
    let kept: Vec<_> = rows.into_iter().filter(|r| r.memory == model.base).collect();
    if kept.is_empty() {
        return Err(invalid(format!(
            "model base size is {} but {source} holds measurements at {}",
            model.base, other
        )));
    }
    for r in &kept {
        r.validate().map_err(|e| invalid(format!("{source}: {}: {e}", r.function_id)))?;
    }
    Ok(kept)
}

fn read_summaries(path: &Path) -> CliResult<Vec<MeasurementSummary>> {
    jsonl::read(path).input()
}

#[derive(Serialize)]
struct Prediction<'a> {
    function_id: &'a str,
    memory: MemorySize,
    curve: ExecutionCurve,
}

pub fn predict(o: PredictOpts, _ctx: &Context) -> CliResult<()> {
    let model = load_model(&required(o.model.clone(), "model")?).input()?;
    let path = required(o.summaries.clone(), "summaries")?;
    let summaries = base_summaries(read_summaries(&path)?, &model, &path.display().to_string())?;
    let mut out = String::new();
    for s in &summaries {
        let curve = model.predict(s).runtime()?;
        let line = serde_json::to_string(&Prediction {
            function_id: &s.function_id,
            memory: s.memory,
            curve,
        })
        .runtime()?;
        out.push_str(&line);
        out.push('\n');
    }
    emit(o.out.as_ref(), &out)
}

fn load_truth(path: &Path) -> CliResult<HashMap<String, ExecutionCurve>> {
    let profiles: Vec<FunctionProfile> = jsonl::read(path).input()?;
    profiles
        .iter()
        .map(|p| Ok((p.function_id.clone(), ground_truth(p).input()?.curve)))
        .collect()
}

struct Assessment {
    rank: usize,
    optimal: MemorySize,
    benefit: Benefit,
}

fn assess(
    summary: &MeasurementSummary,
    rec: &SizingRecommendation,
    truth: &HashMap<String, ExecutionCurve>,
    pricing: &PricingModel,
) -> CliResult<Assessment> {
    let curve = truth
        .get(&summary.function_id)
        .ok_or_else(|| invalid(format!("no ground-truth profile for {}", summary.function_id)))?;
    Ok(Assessment {
        rank: rank_quality(rec, curve, pricing, rec.tradeoff).runtime()?,
        optimal: score(curve, pricing, rec.tradeoff).runtime()?.chosen,
        benefit: benefit(summary.memory, rec.chosen, curve, pricing).runtime()?,
    })
}

#[derive(Clone, Copy, PartialEq)]
enum Format {
    Table,
    Csv,
    Json,
}

pub fn optimize(o: OptimizeOpts, _ctx: &Context) -> CliResult<()> {
    let t = TradeoffParameter::new(o.t.unwrap_or(TradeoffParameter::DEFAULT.get())).input()?;
    let pricing = pricing(o.price_per_gb_second.as_ref(), o.price_per_invocation.as_ref())?;
    let model = load_model(&required(o.model.clone(), "model")?).input()?;
    let summaries = match (&o.summaries, &o.inline) {
        (Some(_), Some(_)) => return Err(invalid("give either --summaries or --inline, not both")),
        (None, None) => return Err(invalid("missing required option --summaries or --inline")),
        (Some(p), None) => base_summaries(read_summaries(p)?, &model, &p.display().to_string())?,
        (None, Some(json)) => {
            let s: MeasurementSummary =
                serde_json::from_str(json).map_err(|e| invalid(format!("--inline: {e}")))?;
            base_summaries(vec![s], &model, "--inline")?
        }
    };
    let format = match o.format.as_deref() {
        None if summaries.len() == 1 => Format::Table,
        None => Format::Csv,
        Some("table") => Format::Table,
        Some("csv") => Format::Csv,
        Some("json") => Format::Json,
        Some(other) => return Err(invalid(format!("--format must be table, csv or json, got '{other}'"))),
    };
    let truth = o.ground_truth.as_deref().map(load_truth).transpose()?;
    if o.histogram.is_some() && truth.is_none() {
        return Err(invalid("--histogram needs --ground-truth"));
    }

    let mut results = Vec::with_capacity(summaries.len());
    for s in &summaries {
        let rec = optimize_from_monitoring(s, &model, &pricing, t).runtime()?;
        let assessment = match &truth {
            Some(truth) => Some(assess(s, &rec, truth, &pricing)?),
            None => None,
        };
        results.push((rec, assessment));
    }

    let mut out = String::new();
    match format {
        Format::Table => {
            for (s, (rec, a)) in summaries.iter().zip(&results) {
                let _ = writeln!(out, "{} (monitored at {})", s.function_id, s.memory);
                out.push_str(&rec.to_table());
                if let Some(a) = a {
                    let _ = writeln!(
                        out,
                        "ground truth: optimal {}, recommendation rank {}, speedup {:.2}%, cost delta {:.2}%",
                        a.optimal, a.rank, a.benefit.speedup_pct, a.benefit.cost_delta_pct
                    );
                }
            }
        }
        Format::Csv => {
            out.push_str("function_id,monitored_mb,recommended_mb,predicted_time_ms,predicted_cost_usd,s_total");
            if truth.is_some() {
                out.push_str(",optimal_mb,rank,speedup_pct,cost_delta_pct");
            }
            out.push('\n');
            for (s, (rec, a)) in summaries.iter().zip(&results) {
                let c = rec.chosen_score();
                let _ = write!(
                    out,
                    "{},{},{},{},{},{}",
                    s.function_id,
                    s.memory.megabytes(),
                    rec.chosen.megabytes(),
                    c.execution_time,
                    c.cost,
                    c.s_total
                );
                if let Some(a) = a {
                    let _ = write!(
                        out,
                        ",{},{},{},{}",
                        a.optimal.megabytes(),
                        a.rank,
                        a.benefit.speedup_pct,
                        a.benefit.cost_delta_pct
                    );
                }
                out.push('\n');
            }
        }
        Format::Json => {
            let recs: Vec<&SizingRecommendation> = results.iter().map(|(r, _)| r).collect();
            out = serde_json::to_string_pretty(&recs).runtime()?;
            out.push('\n');
        }
    }
    emit(o.out.as_ref(), &out)?;

    if let Some(path) = &o.histogram {
        let ranks: Vec<usize> = results.iter().filter_map(|(_, a)| a.as_ref().map(|a| a.rank)).collect();
        write_output(path, &rank_histogram(&ranks))?;
    }
    Ok(())
}

fn rank_histogram(ranks: &[usize]) -> String {
    let mut counts = [0usize; 6];
    for &r in ranks {
        counts[r - 1] += 1;
    }
    let mut csv = String::from("rank,count\n");
    for (i, c) in counts.iter().enumerate() {
        let _ = writeln!(csv, "{},{c}", i + 1);
    }
    csv
}

/// Tradeoff values of the rank and benefit series.
const REPORT_TRADEOFFS: [f64; 3] = [0.25, 0.5, 0.75];

pub fn report(o: ReportOpts, _ctx: &Context) -> CliResult<()> {
    let pricing = pricing(o.price_per_gb_second.as_ref(), o.price_per_invocation.as_ref())?;
    let groups = load_groups(&required(o.dataset.clone(), "dataset")?)?;
    let out = o.out.unwrap_or_else(|| "report".into());

    let mut curves = String::from("function_id,memory_mb,execution_time_ms,cost_usd\n");
    for g in &groups {
        for s in &g.by_size {
            let cost = execution_cost(s.mean.execution_time, s.memory, &pricing).input()?;
            let _ = writeln!(curves, "{},{},{},{}", g.function_id, s.memory.megabytes(), s.mean.execution_time, cost);
        }
    }
    write_output(&out.join("curves.csv"), &curves)?;
    let mut written = vec!["curves.csv"];

    match (&o.model, &o.ground_truth) {
        (Some(model_path), Some(truth_path)) => {
            let model = load_model(model_path).input()?;
            let truth = load_truth(truth_path)?;
            let mut ranks_csv = String::from("t,rank,count\n");
            let mut tradeoff_csv = String::from("t,functions,mean_speedup_pct,mean_cost_delta_pct,optimal_pct,rank_le2_pct\n");
            for t in REPORT_TRADEOFFS {
                let t = TradeoffParameter::new(t).runtime()?;
                let mut ranks = Vec::with_capacity(groups.len());
                let (mut speedup, mut cost) = (0.0, 0.0);
                for g in &groups {
                    let s = g.at(model.base);
                    let rec = optimize_from_monitoring(s, &model, &pricing, t).runtime()?;
                    let a = assess(s, &rec, &truth, &pricing)?;
                    ranks.push(a.rank);
                    speedup += a.benefit.speedup_pct;
                    cost += a.benefit.cost_delta_pct;
                }
                let n = ranks.len() as f64;
                for line in rank_histogram(&ranks).lines().skip(1) {
                    let _ = writeln!(ranks_csv, "{},{line}", t.get());
                }
                let _ = writeln!(
                    tradeoff_csv,
                    "{},{},{},{},{},{}",
                    t.get(),
                    ranks.len(),
                    speedup / n,
                    cost / n,
                    100.0 * ranks.iter().filter(|&&r| r == 1).count() as f64 / n,
                    100.0 * ranks.iter().filter(|&&r| r <= 2).count() as f64 / n
                );
            }
            write_output(&out.join("ranks.csv"), &ranks_csv)?;
            write_output(&out.join("tradeoff.csv"), &tradeoff_csv)?;
            written.extend(["ranks.csv", "tradeoff.csv"]);
        }
        (None, None) => {}
        _ => return Err(invalid("--model and --ground-truth must be given together")),
    }
    println!("wrote {} to {}", written.join(", "), out.display());
    Ok(())
}
