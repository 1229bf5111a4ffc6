mod data;
mod learn;
mod sizing;

use std::path::{Path, PathBuf};
use std::str::FromStr;

use memtune_core::domain::{jsonl, Decimal, MeasurementSummary, MemorySize, PricingModel};
use memtune_core::features::{group_by_function, FeatureSet, FunctionMeasurements};
use memtune_core::parallel::Workers;

use crate::error::{invalid, Classify, CliResult};

pub use data::{generate, stability};
pub use learn::{basesize_study, evaluate, grid_search, select_features, train};
pub use sizing::{optimize, predict, report};

pub const DEFAULT_SEED: u64 = 42;

pub struct Context {
    pub seed: u64,
    pub workers: Workers,
}

impl Context {
    pub fn new(seed: Option<u64>, workers: Option<usize>) -> CliResult<Self> {
        let workers = match workers {
            Some(n) => Workers::new(n).input()?,
            None => Workers::available(),
        };
        Ok(Context {
            seed: seed.unwrap_or(DEFAULT_SEED),
            workers,
        })
    }

    /// Seed of one pipeline component.
    pub fn seed_for(&self, component: &str) -> u64 {
        memtune_core::seed::derive(self.seed, component)
    }
}

pub fn required<T>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| invalid(format!("missing required option --{flag}")))
}

pub fn memory_size(mb: Option<u32>) -> CliResult<MemorySize> {
    MemorySize::new(mb.unwrap_or(256)).input()
}

pub fn write_output(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)
            .map_err(|e| invalid(format!("cannot create directory {}: {e}", parent.display())))?;
    }
    std::fs::write(path, contents).map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))
}

/// Write to `path` when given, else print to stdout.
pub fn emit(path: Option<&PathBuf>, contents: &str) -> CliResult<()> {
    match path {
        Some(p) => write_output(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

pub fn load_groups(path: &Path) -> CliResult<Vec<FunctionMeasurements>> {
    let rows: Vec<MeasurementSummary> = jsonl::read(path).input()?;
    if rows.is_empty() {
        return Err(invalid(format!("{} contains no measurements", path.display())));
    }
    for (i, r) in rows.iter().enumerate() {
        r.validate()
            .map_err(|e| invalid(format!("{}:{}: {e}", path.display(), i + 1)))?;
    }
    group_by_function(&rows).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

pub fn load_feature_set(path: Option<&PathBuf>) -> CliResult<FeatureSet> {
    match path {
        None => Ok(FeatureSet::default_model()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| invalid(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| invalid(format!("invalid feature set {}: {e}", p.display())))
        }
    }
}

pub fn pricing(per_gb_second: Option<&String>, per_invocation: Option<&String>) -> CliResult<PricingModel> {
    let defaults = PricingModel::aws_default();
    let parse = |v: Option<&String>, default: Decimal, flag: &str| -> CliResult<Decimal> {
        match v {
            None => Ok(default),
            Some(s) => Decimal::from_str(s).map_err(|e| invalid(format!("--{flag}: '{s}' is not a decimal number: {e}"))),
        }
    };
    PricingModel::new(
        parse(per_gb_second, defaults.price_per_gb_second, "price-per-gb-second")?,
        parse(per_invocation, defaults.price_per_invocation, "price-per-invocation")?,
    )
    .input()
}
