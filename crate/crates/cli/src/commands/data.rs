use memtune_core::domain::jsonl;
use memtune_core::parallel::try_par_map;
use memtune_core::simgen::{generate_dataset, generate_profiles, simulate_trace, ProfileConfig, WorkloadSpec};
use memtune_core::stability::{stability_analysis, DEFAULT_ALPHA};

use super::{emit, memory_size, write_output, Context};
use crate::config::{GenerateOpts, StabilityOpts};
use crate::error::{invalid, Classify, CliResult};

pub fn generate(o: GenerateOpts, ctx: &Context) -> CliResult<()> {
    let functions = o.functions.unwrap_or(2000);
    let minutes = o.minutes.unwrap_or(10.0);
    let workload = WorkloadSpec::new(o.rate.unwrap_or(30.0), minutes * 60.0).input()?;
    if workload.request_count() == 0 {
        return Err(invalid("rate x duration yields no requests"));
    }
    let config = ProfileConfig {
        noise_cv: o.noise_cv.unwrap_or(0.1),
    };
    let out = o.out.unwrap_or_else(|| "data".into());
    let profiles = generate_profiles(functions, ctx.seed, &config).input()?;
    let dataset = generate_dataset(&profiles, &workload, ctx.workers).runtime()?;

    let profiles_path = out.join("profiles.jsonl");
    let dataset_path = out.join("dataset.jsonl");
    write_output(&profiles_path, &jsonl::to_string(&profiles).runtime()?)?;
    write_output(&dataset_path, &jsonl::to_string(&dataset).runtime()?)?;
    println!(
        "generated {} functions, {} measurements (seed {})",
        profiles.len(),
        dataset.len(),
        ctx.seed
    );
    println!("profiles: {}", profiles_path.display());
    println!("dataset: {}", dataset_path.display());
    Ok(())
}

pub fn stability(o: StabilityOpts, ctx: &Context) -> CliResult<()> {
    let functions = o.functions.unwrap_or(50);
    let minutes = o.minutes.unwrap_or(15);
    let alpha = o.alpha.unwrap_or(DEFAULT_ALPHA);
    if minutes == 0 {
        return Err(invalid("--minutes must be at least 1"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("--alpha must lie in (0, 1), got {alpha}")));
    }
    let memory = memory_size(o.memory)?;
    let workload = WorkloadSpec::new(o.rate.unwrap_or(30.0), minutes as f64 * 60.0).input()?;
    let config = ProfileConfig {
        noise_cv: o.noise_cv.unwrap_or(0.1),
    };
    let profiles = generate_profiles(functions, ctx.seed_for("stability"), &config).input()?;
    let traces = try_par_map(&profiles, ctx.workers, |p| simulate_trace(p, memory, &workload)).runtime()?;
    let report = stability_analysis(&traces, minutes, alpha, ctx.workers).runtime()?;
    let summary = format!(
        "recommended measurement duration: {} minute(s) ({} flags over {} functions)",
        report.recommended_minutes,
        report.total_flags(),
        report.function_count
    );
    emit(o.out.as_ref(), &report.to_csv())?;
    if o.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}
