//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run a subset with `cargo test -p memtune --test acceptance -- 3 4`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use memtune_core::domain::{execution_cost, Decimal, ExecutionCurve, MemorySize, PricingModel};
use memtune_core::features::{
    group_by_function, sequential_forward_selection, training_set, FeatureSet, SelectionConfig, SelectionData,
};
use memtune_core::model::network::Mlp;
use memtune_core::model::{evaluate, train, EvaluationMetrics, Hyperparameters, LossKind, MlpTrainer};
use memtune_core::optimizer::{benefit, optimize_from_monitoring, rank_quality, score, TradeoffParameter};
use memtune_core::parallel::Workers;
use memtune_core::simgen::{generate_dataset, generate_profiles, ground_truth, FunctionProfile, ProfileConfig, WorkloadSpec};
use memtune_core::split::{complement, kfold};
use memtune_core::stability::{cliffs_delta, mann_whitney_u, mann_whitney_u_exact, mann_whitney_u_normal};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed of every simulated dataset in this suite (the CLI default).
const DATA_SEED: u64 = 42;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

// 1 ---------------------------------------------------------------------------

fn pricing_exactness() -> Outcome {
    let cost = execution_cost(3000.0, MemorySize::MB_512, &PricingModel::aws_default()).unwrap();
    let expected = Decimal::new(252, 7);
    // 12 significant digits of a value of order 1e-5: absolute tolerance 5e-17
    let tolerance = Decimal::new(5, 17);
    let diff = (cost - expected).abs();
    outcome(
        diff <= tolerance,
        format!("computed {cost} $, expected 0.0000252 $, |diff| = {diff} (tolerance {tolerance})"),
    )
}

// 2 ---------------------------------------------------------------------------

/// U of `a` in half units: 2 * (#{a > b} + 0.5 #{a = b}).
fn twice_u(a: &[f64], b: &[f64]) -> i64 {
    let mut u = 0;
    for x in a {
        for y in b {
            if x > y {
                u += 2;
            } else if x == y {
                u += 1;
            }
        }
    }
    u
}

/// Two-sided exact p-value by enumerating every split of the pooled values.
fn oracle_p(a: &[f64], b: &[f64]) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (n, na) = (pooled.len(), a.len());
    let center = (a.len() * b.len()) as i64; // 2 * mu
    let observed = (twice_u(a, b) - center).abs();
    let (mut hits, mut total) = (0u64, 0u64);
    let mut chosen = Vec::with_capacity(na);
    fn walk(start: usize, n: usize, need: usize, chosen: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if need == 0 {
            visit(chosen);
            return;
        }
        for i in start..=n - need {
            chosen.push(i);
            walk(i + 1, n, need - 1, chosen, visit);
            chosen.pop();
        }
    }
    walk(0, n, na, &mut chosen, &mut |idx| {
        let sa: Vec<f64> = idx.iter().map(|&i| pooled[i]).collect();
        let sb: Vec<f64> = (0..n).filter(|i| !idx.contains(i)).map(|i| pooled[i]).collect();
        total += 1;
        if (twice_u(&sa, &sb) - center).abs() >= observed {
            hits += 1;
        }
    });
    hits as f64 / total as f64
}

fn oracle_delta(a: &[f64], b: &[f64]) -> f64 {
    let (mut greater, mut less) = (0i64, 0i64);
    for x in a {
        for y in b {
            if x > y {
                greater += 1;
            } else if x < y {
                less += 1;
            }
        }
    }
    (greater - less) as f64 / (a.len() * b.len()) as f64
}

fn sample(rng: &mut ChaCha8Rng, n: usize, ties: bool) -> Vec<f64> {
    (0..n)
        .map(|_| if ties { rng.random_range(0..5) as f64 } else { rng.random::<f64>() })
        .collect()
}

/// No-tie samples whose U for `a` is exactly `u`.
fn samples_with_u(na: usize, nb: usize, mut u: usize) -> (Vec<f64>, Vec<f64>) {
    let b: Vec<f64> = (0..nb).map(|j| j as f64).collect();
    let a = (0..na)
        .map(|i| {
            let above = u.min(nb);
            u -= above;
            above as f64 - 0.5 + i as f64 * 1e-3
        })
        .collect();
    (a, b)
}

fn statistical_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut exact_cases = 0;
    let mut mismatches = Vec::new();
    for n in 2..=12 {
        for na in 1..n {
            let nb = n - na;
            for round in 0..12 {
                let ties = round % 2 == 0;
                let (a, b) = (sample(&mut rng, na, ties), sample(&mut rng, nb, ties));
                let got = mann_whitney_u(&a, &b).unwrap();
                let u_a = twice_u(&a, &b) as f64 / 2.0;
                let u = u_a.min((na * nb) as f64 - u_a);
                let p = oracle_p(&a, &b);
                exact_cases += 1;
                if got.u_statistic != u || got.p_value != p {
                    mismatches.push(format!("({na},{nb}) U {} vs {u}, p {} vs {p}", got.u_statistic, got.p_value));
                }
            }
        }
    }

    let mut delta_mismatch = 0;
    for i in 0..1000 {
        let ties = i % 2 == 0;
        let na = rng.random_range(1..=15);
        let nb = rng.random_range(1..=15);
        let (a, b) = (sample(&mut rng, na, ties), sample(&mut rng, nb, ties));
        if cliffs_delta(&a, &b).unwrap() != oracle_delta(&a, &b) {
            delta_mismatch += 1;
        }
    }

    // every achievable U of every size pair with n_a + n_b <= 20
    let mut worst = (0.0f64, 0, 0);
    let mut worst_both_three = 0.0f64;
    let mut both_branch_cases = 0;
    for n in 2..=20 {
        for na in 1..n {
            let nb = n - na;
            for u in 0..=na * nb {
                let (a, b) = samples_with_u(na, nb, u);
                let exact = mann_whitney_u_exact(&a, &b).unwrap().p_value;
                let approx = mann_whitney_u_normal(&a, &b).unwrap().p_value;
                let d = (exact - approx).abs();
                both_branch_cases += 1;
                if d > worst.0 {
                    worst = (d, na, nb);
                }
                if na >= 3 && nb >= 3 {
                    worst_both_three = worst_both_three.max(d);
                }
            }
        }
    }
    let approx_ok = worst.0 <= 0.05;
    let pass = mismatches.is_empty() && delta_mismatch == 0 && approx_ok;
    let mut detail = format!(
        "U/p vs enumeration: {}/{exact_cases} exact matches; delta: {}/1000 matches; \
         normal vs exact over {both_branch_cases} no-tie cases: max |dp| = {:.4} at n_a={}, n_b={} \
         (limit 0.05; {:.4} when both samples have >= 3 values)",
        exact_cases - mismatches.len(),
        1000 - delta_mismatch,
        worst.0,
        worst.1,
        worst.2,
        worst_both_three
    );
    if let Some(m) = mismatches.first() {
        detail.push_str(&format!("; first mismatch {m}"));
    }
    outcome(pass, detail)
}

// 3 ---------------------------------------------------------------------------

fn gradient_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for net_index in 0..20 {
        let inputs = rng.random_range(2..6);
        let depth = rng.random_range(1..4);
        let mut sizes = vec![inputs];
        for _ in 0..depth {
            sizes.push(rng.random_range(3..9));
        }
        sizes.push(5);
        // random biases too: zero biases can place pre-activations exactly on the ReLU kink
        let count = Mlp::new(&sizes, net_index).unwrap().parameters().len();
        let params: Vec<f64> = (0..count).map(|_| rng.random_range(-1.0..1.0)).collect();
        let net = Mlp::from_parameters(sizes.clone(), params).unwrap();
        let batch = rng.random_range(3..9);
        let x = Array2::from_shape_fn((batch, inputs), |_| rng.random_range(-2.0..2.0));
        let y = Array2::from_shape_fn((batch, 5), |_| rng.random_range(0.2..3.0));
        let l2 = rng.random_range(0.0..0.1);
        for loss in [LossKind::Mse, LossKind::Mae, LossKind::Mape] {
            let (_, analytic) = net.loss_and_gradient(x.view(), y.view(), loss, l2);
            let mut numeric = vec![0.0; analytic.len()];
            for (i, g) in numeric.iter_mut().enumerate() {
                let mut plus = net.clone();
                plus.parameters_mut()[i] += h;
                let mut minus = net.clone();
                minus.parameters_mut()[i] -= h;
                *g = (plus.loss(x.view(), y.view(), loss, l2) - minus.loss(x.view(), y.view(), loss, l2)) / (2.0 * h);
            }
            let diff: f64 = analytic.iter().zip(&numeric).map(|(a, n)| (a - n) * (a - n)).sum::<f64>().sqrt();
            let norm: f64 = analytic.iter().map(|a| a * a).sum::<f64>().sqrt() + numeric.iter().map(|n| n * n).sum::<f64>().sqrt();
            worst = worst.max(if norm > 0.0 { diff / norm } else { 0.0 });
            checks += 1;
        }
    }
    outcome(
        worst < 1e-4,
        format!("{checks} checks (20 networks x MSE/MAE/MAPE + L2): max relative error {worst:.2e} (limit 1e-4)"),
    )
}

// 4 ---------------------------------------------------------------------------

/// Direct arithmetic: cost = seconds * GB * price + fee, scores relative to minima.
fn brute_force_totals(times: &[f64; 6], t: f64) -> [f64; 6] {
    let cost: Vec<f64> = MemorySize::ALL
        .iter()
        .zip(times)
        .map(|(m, d)| d / 1000.0 * m.megabytes() as f64 / 1024.0 * 0.000_016_67 + 0.000_000_2)
        .collect();
    let min_cost = cost.iter().copied().fold(f64::INFINITY, f64::min);
    let min_time = times.iter().copied().fold(f64::INFINITY, f64::min);
    std::array::from_fn(|i| t * cost[i] / min_cost + (1.0 - t) * times[i] / min_time)
}

fn optimizer_scoring() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pricing = PricingModel::aws_default();
    let tradeoffs: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    let (mut disagreements, mut normalization, mut monotonicity) = (0, 0, 0);
    for _ in 0..10_000 {
        let times: [f64; 6] = std::array::from_fn(|_| (rng.random_range(0.0f64..9.0)).exp());
        let curve = ExecutionCurve::new(times).unwrap();
        let t = rng.random::<f64>();
        let rec = score(&curve, &pricing, TradeoffParameter::new(t).unwrap()).unwrap();
        let expected = brute_force_totals(&times, t);
        let mut best = 0;
        for i in 1..6 {
            if expected[i] < expected[best] {
                best = i;
            }
        }
        let near_tie = (0..6).any(|i| i != best && (expected[i] - expected[best]).abs() <= 1e-9 * expected[best]);
        let totals_agree = rec.scores.iter().zip(&expected).all(|(s, e)| (s.s_total - e).abs() <= 1e-9 * e);
        if !totals_agree || (!near_tie && rec.chosen != MemorySize::ALL[best]) {
            disagreements += 1;
        }
        let min_cost = rec.scores.iter().map(|s| s.s_cost).fold(f64::INFINITY, f64::min);
        let min_perf = rec.scores.iter().map(|s| s.s_perf).fold(f64::INFINITY, f64::min);
        if min_cost != 1.0 || min_perf != 1.0 || rec.scores.iter().any(|s| s.s_total < 1.0 - 1e-12) {
            normalization += 1;
        }
        let mut previous: Option<(Decimal, f64)> = None;
        for &tv in &tradeoffs {
            let r = score(&curve, &pricing, TradeoffParameter::new(tv).unwrap()).unwrap();
            let c = r.chosen_score();
            if let Some((cost, time)) = previous {
                if c.cost > cost || c.execution_time < time {
                    monotonicity += 1;
                    break;
                }
            }
            previous = Some((c.cost, c.execution_time));
        }
    }
    outcome(
        disagreements == 0 && normalization == 0 && monotonicity == 0,
        format!(
            "10000 random curves: {disagreements} brute-force disagreements, {normalization} normalization \
             violations, {monotonicity} t-monotonicity violations"
        ),
    )
}

// 5, 6, 7 -----------------------------------------------------------------------

fn dataset(profiles: &[FunctionProfile]) -> Vec<memtune_core::features::FunctionMeasurements> {
    let rows = generate_dataset(profiles, &WorkloadSpec::standard(), Workers::default()).unwrap();
    group_by_function(&rows).unwrap()
}

fn rank_share(ranks: &[usize], at_most: usize) -> f64 {
    ranks.iter().filter(|&&r| r <= at_most).count() as f64 / ranks.len() as f64
}

fn noiseless_end_to_end() -> Outcome {
    let profiles = generate_profiles(400, DATA_SEED, &ProfileConfig { noise_cv: 0.0 }).unwrap();
    let groups = dataset(&profiles);
    let set = training_set(&groups, MemorySize::MB_256, &FeatureSet::default_model()).unwrap();
    let hp = Hyperparameters::default();
    let folds = kfold(set.rows.len(), 5, DATA_SEED).unwrap();
    let pricing = PricingModel::aws_default();
    let t = TradeoffParameter::new(0.75).unwrap();
    let mut metrics = Vec::new();
    let mut ranks = Vec::new();
    for k in 0..folds.len() {
        let model = train(&set.subset(&complement(&folds, k)), &hp).unwrap();
        metrics.push(evaluate(&model, &set.subset(&folds[k]).rows).unwrap());
        for &i in &folds[k] {
            let rec = optimize_from_monitoring(groups[i].at(MemorySize::MB_256), &model, &pricing, t).unwrap();
            let truth = ground_truth(&profiles[i]).unwrap().curve;
            ranks.push(rank_quality(&rec, &truth, &pricing, t).unwrap());
        }
    }
    let mape = EvaluationMetrics::mean(&metrics).mape;
    let optimal = rank_share(&ranks, 1);
    outcome(
        mape < 0.05 && optimal >= 0.95,
        format!(
            "400 functions, 5-fold: held-out MAPE {:.2}% (limit < 5%), rank 1 for {:.1}% (limit >= 95%), rank <= 2 for {:.1}%",
            100.0 * mape,
            100.0 * optimal,
            100.0 * rank_share(&ranks, 2)
        ),
    )
}

struct NoisyRun {
    mape: f64,
    ranks: Vec<usize>,
    /// Mean (speedup %, cost delta %) at t = 0.25, 0.5, 0.75.
    benefits: Vec<(f64, f64, f64)>,
}

fn noisy_run() -> NoisyRun {
    let profiles = generate_profiles(2000, DATA_SEED, &ProfileConfig { noise_cv: 0.1 }).unwrap();
    let groups = dataset(&profiles);
    let set = training_set(&groups, MemorySize::MB_256, &FeatureSet::default_model()).unwrap();
    let train_idx: Vec<usize> = (0..1500).collect();
    let test_idx: Vec<usize> = (1500..2000).collect();
    let model = train(&set.subset(&train_idx), &Hyperparameters::default()).unwrap();
    let mape = evaluate(&model, &set.subset(&test_idx).rows).unwrap().mape;
    let pricing = PricingModel::aws_default();
    let truths: Vec<ExecutionCurve> = test_idx.iter().map(|&i| ground_truth(&profiles[i]).unwrap().curve).collect();
    let mut ranks = Vec::new();
    let mut benefits = Vec::new();
    for t in [0.25, 0.5, 0.75] {
        let t = TradeoffParameter::new(t).unwrap();
        let (mut speedup, mut cost) = (0.0, 0.0);
        for (&i, truth) in test_idx.iter().zip(&truths) {
            let s = groups[i].at(MemorySize::MB_256);
            let rec = optimize_from_monitoring(s, &model, &pricing, t).unwrap();
            let b = benefit(s.memory, rec.chosen, truth, &pricing).unwrap();
            speedup += b.speedup_pct;
            cost += b.cost_delta_pct;
            if t == TradeoffParameter::DEFAULT {
                ranks.push(rank_quality(&rec, truth, &pricing, t).unwrap());
            }
        }
        benefits.push((t.get(), speedup / 500.0, cost / 500.0));
    }
    NoisyRun { mape, ranks, benefits }
}

fn noisy_end_to_end(run: &NoisyRun) -> Outcome {
    let (r1, r2) = (rank_share(&run.ranks, 1), rank_share(&run.ranks, 2));
    outcome(
        run.mape <= 0.15 && r1 >= 0.70 && r2 >= 0.90,
        format!(
            "1500 train / 500 test, noise cv 0.1: held-out MAPE {:.2}% (limit <= 15%), rank 1 {:.1}% (limit >= 70%), \
             rank <= 2 {:.1}% (limit >= 90%)",
            100.0 * run.mape,
            100.0 * r1,
            100.0 * r2
        ),
    )
}

fn tradeoff_behavior(run: &NoisyRun) -> Outcome {
    let b = &run.benefits;
    let speed_ordered = b[0].1 >= b[1].1 && b[1].1 >= b[2].1;
    let cost_ordered = b[0].2 <= b[1].2 && b[1].2 <= b[2].2;
    let series: Vec<String> = b
        .iter()
        .map(|(t, s, c)| format!("t={t}: speedup {s:.1}%, cost delta {c:.1}%"))
        .collect();
    outcome(speed_ordered && cost_ordered, series.join("; "))
}

// 8 ---------------------------------------------------------------------------

fn feature_selection_sanity() -> Outcome {
    let trainer = MlpTrainer {
        hyperparameters: Hyperparameters {
            epochs: 60,
            neurons_per_layer: 32,
            hidden_layers: 2,
            l2: 0.0,
            learning_rate: 0.01,
            ..Hyperparameters::default()
        },
    };
    let relevant = ["x3", "x7"];
    let mut hits = 0;
    let mut picks = Vec::new();
    for run in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(800 + run);
        let rows: Vec<Vec<f64>> = (0..200).map(|_| (0..10).map(|_| rng.random_range(0.0..1.0)).collect()).collect();
        let targets = rows
            .iter()
            .map(|r| {
                let (a, b) = (r[3], r[7]);
                vec![1.0 + a, 1.0 + b, 1.0 + a * b, 2.0 - a + 0.5 * b, 1.0 + (a - b).abs()]
            })
            .collect();
        let data = SelectionData {
            names: (0..10).map(|i| format!("x{i}")).collect(),
            rows,
            targets,
        };
        let config = SelectionConfig {
            budget: 2,
            folds: 5,
            seed: run,
            workers: Workers::default(),
        };
        let trace = sequential_forward_selection(&data.names, &data, &trainer, &config).unwrap();
        let mut first: Vec<&str> = trace.steps.iter().take(2).map(|s| s.feature.as_str()).collect();
        first.sort();
        if first == relevant {
            hits += 1;
        }
        picks.push(first.join("+"));
    }
    outcome(hits >= 9, format!("relevant pair selected first in {hits}/10 runs (limit >= 9); picks {}", picks.join(", ")))
}

// 9, 10 -------------------------------------------------------------------------

fn memtune(args: &[&str], dir: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_memtune"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("memtune binary runs")
}

fn read(dir: &Path, file: &str) -> Vec<u8> {
    std::fs::read(dir.join(file)).unwrap_or_default()
}

fn determinism() -> Outcome {
    let root = tempfile::tempdir().unwrap();
    let mut artifacts: Vec<Vec<Vec<u8>>> = Vec::new();
    let mut failures = Vec::new();
    for (run, workers) in ["1", "3", "1"].iter().enumerate() {
        let dir = root.path().join(format!("run{run}"));
        std::fs::create_dir_all(&dir).unwrap();
        let steps: [&[&str]; 3] = [
            &["generate", "--functions", "120", "--minutes", "1", "--seed", "7", "--out", "data"],
            &["train", "--dataset", "data/dataset.jsonl", "--seed", "7", "--out", "model.json"],
            &["optimize", "--model", "model.json", "--summaries", "data/dataset.jsonl", "--ground-truth", "data/profiles.jsonl", "--out", "rec.csv"],
        ];
        for step in steps {
            let mut args = step.to_vec();
            args.extend(["--workers", workers]);
            let out = memtune(&args, &dir);
            if !out.status.success() {
                failures.push(format!("{} exited with {}", step[0], out.status));
            }
        }
        artifacts.push(
            ["data/profiles.jsonl", "data/dataset.jsonl", "model.json", "rec.csv"]
                .iter()
                .map(|f| read(&dir, f))
                .collect(),
        );
    }
    let identical = artifacts.windows(2).all(|w| w[0] == w[1]) && artifacts[0].iter().all(|a| !a.is_empty());
    outcome(
        identical && failures.is_empty(),
        format!(
            "generate/train/optimize with workers 1, 3, 1: outputs {}{}",
            if identical { "byte-identical" } else { "differ" },
            if failures.is_empty() { String::new() } else { format!("; {}", failures.join("; ")) }
        ),
    )
}

fn stability_shape() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let default = memtune(&["stability", "--out", "stability.csv"], dir.path());
    let csv = String::from_utf8_lossy(&read(dir.path(), "stability.csv")).to_string();
    let mut lines = csv.lines();
    let header_ok = lines.next() == Some("metric,minutes,unstable_count");
    let cells: Vec<(String, usize)> = lines
        .filter_map(|l| {
            let mut f = l.split(',');
            Some((f.next()?.to_string(), f.next()?.parse().ok()?))
        })
        .collect();
    let metrics: std::collections::BTreeSet<&str> = cells.iter().map(|(m, _)| m.as_str()).collect();
    let minutes: std::collections::BTreeSet<usize> = cells.iter().map(|(_, k)| *k).collect();
    let grid_ok = header_ok && cells.len() == 375 && metrics.len() == 25 && minutes == (1..=15).collect();

    let noiseless = memtune(&["stability", "--noise-cv", "0", "--out", "noiseless.csv"], dir.path());
    let stdout = String::from_utf8_lossy(&noiseless.stdout).to_string();
    let one_minute = stdout.contains("recommended measurement duration: 1 minute(s)");
    outcome(
        default.status.success() && noiseless.status.success() && grid_ok && one_minute,
        format!(
            "default run: {} rows over {} metrics x {} minutes; noise 0: {}",
            cells.len(),
            metrics.len(),
            minutes.len(),
            stdout.trim()
        ),
    )
}

// -----------------------------------------------------------------------------

fn main() {
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let wanted = |id: u32| selected.is_empty() || selected.contains(&id);
    let mut noisy: Option<NoisyRun> = None;
    let mut results = Vec::new();

    let mut run = |id: u32, name: &str, f: &mut dyn FnMut() -> Outcome| {
        if !wanted(id) {
            return;
        }
        let start = Instant::now();
        let o = catch_unwind(AssertUnwindSafe(&mut *f)).unwrap_or_else(|e| {
            let message = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {message}"))
        });
        println!(
            "[{}] {id:>2} {name}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
        results.push((id, o.pass));
    };

    run(1, "pricing exactness", &mut pricing_exactness);
    run(2, "statistical-test oracles", &mut statistical_oracles);
    run(3, "gradient check", &mut gradient_check);
    run(4, "optimizer scoring", &mut optimizer_scoring);
    run(5, "noiseless end-to-end", &mut noiseless_end_to_end);
    if wanted(6) || wanted(7) {
        noisy = catch_unwind(noisy_run).ok();
    }
    run(6, "noisy end-to-end", &mut || match &noisy {
        Some(r) => noisy_end_to_end(r),
        None => outcome(false, "noisy run panicked"),
    });
    run(7, "tradeoff behavior", &mut || match &noisy {
        Some(r) => tradeoff_behavior(r),
        None => outcome(false, "noisy run panicked"),
    });
    run(8, "feature selection sanity", &mut feature_selection_sanity);
    run(9, "determinism", &mut determinism);
    run(10, "stability analysis shape", &mut stability_shape);

    let passed = results.iter().filter(|(_, p)| *p).count();
    println!("acceptance: {passed} of {} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
