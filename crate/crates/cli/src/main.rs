//! `memtune`: generate synthetic serverless measurements, train the
//! execution-time model and recommend memory sizes.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{
    BasesizeStudyOpts, ConfigFile, EvaluateOpts, GenerateOpts, GridSearchOpts, OptimizeOpts, PredictOpts, ReportOpts,
    SelectFeaturesOpts, StabilityOpts, TrainOpts,
};
use error::CliResult;

#[derive(Parser, Debug)]
#[command(name = "memtune", version, about = "Predict execution time across memory sizes and pick the best size")]
struct Cli {
    /// JSON config file; command-line flags take precedence over its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed all randomness derives from [default: 42]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for data-parallel sections [default: available cores]
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    Generate(GenerateOpts),
    Stability(StabilityOpts),
    SelectFeatures(SelectFeaturesOpts),
    Train(TrainOpts),
    GridSearch(GridSearchOpts),
    BasesizeStudy(BasesizeStudyOpts),
    Evaluate(EvaluateOpts),
    Predict(PredictOpts),
    Optimize(OptimizeOpts),
    Report(ReportOpts),
}

fn run(cli: Cli) -> CliResult<()> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let ctx = commands::Context::new(cli.seed.or(file.seed), cli.workers.or(file.workers))?;
    match cli.command {
        Command::Generate(o) => commands::generate(o.merge(file.generate), &ctx),
        Command::Stability(o) => commands::stability(o.merge(file.stability), &ctx),
        Command::SelectFeatures(o) => commands::select_features(o.merge(file.select_features), &ctx),
        Command::Train(o) => commands::train(o.merge(file.train), &ctx),
        Command::GridSearch(o) => commands::grid_search(o.merge(file.grid_search), &ctx),
        Command::BasesizeStudy(o) => commands::basesize_study(o.merge(file.basesize_study), &ctx),
        Command::Evaluate(o) => commands::evaluate(o.merge(file.evaluate), &ctx),
        Command::Predict(o) => commands::predict(o.merge(file.predict), &ctx),
        Command::Optimize(o) => commands::optimize(o.merge(file.optimize), &ctx),
        Command::Report(o) => commands::report(o.merge(file.report), &ctx),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
