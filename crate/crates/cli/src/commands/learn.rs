use std::fmt::Write;

use memtune_core::features::{run_feature_rounds, training_set, RoundsConfig};
use memtune_core::model::{
    basesize_csv, basesize_study as run_basesize_study, evaluate as score_model, grid_search as run_grid_search,
    load_model, save_model, train as fit_model, CvConfig, Grid, Hyperparameters, MlpTrainer,
};

use super::{emit, load_feature_set, load_groups, memory_size, required, write_output, Context};
use crate::config::{BasesizeStudyOpts, EvaluateOpts, GridSearchOpts, SelectFeaturesOpts, TrainOpts};
use crate::error::{invalid, Classify, CliResult};

pub fn select_features(o: SelectFeaturesOpts, ctx: &Context) -> CliResult<()> {
    let hp = o.hyperparameters(Hyperparameters::selection(), ctx.seed_for("select-features/model"))?;
    let groups = load_groups(&required(o.dataset.clone(), "dataset")?)?;
    let config = RoundsConfig {
        base: memory_size(o.base)?,
        f1_budget: o.f1_budget.unwrap_or(13),
        f3_budget: o.f3_budget.unwrap_or(11),
        final_budget: o.final_budget.unwrap_or(11),
        folds: o.folds.unwrap_or(5),
        seed: ctx.seed_for("select-features"),
        workers: ctx.workers,
    };
    if config.f1_budget == 0 || config.f3_budget == 0 || config.final_budget == 0 {
        return Err(invalid("selection budgets must be at least 1"));
    }
    if config.folds < 2 || config.folds > groups.len() {
        return Err(invalid(format!("--folds must lie in [2, {}]", groups.len())));
    }
    let rounds = run_feature_rounds(&groups, &MlpTrainer { hyperparameters: hp }, &config).runtime()?;

    let mut csv = String::from("stage,round,feature,validation_mape\n");
    for (stage, trace) in &rounds.traces {
        for (i, step) in trace.steps.iter().enumerate() {
            let _ = writeln!(csv, "{stage:?},{},{},{}", i + 1, step.feature, step.validation_mape);
        }
    }
    let out = o.out.unwrap_or_else(|| "selection".into());
    write_output(&out.join("selection_trace.csv"), &csv)?;
    let features = serde_json::to_string_pretty(&rounds.selected).runtime()?;
    write_output(&out.join("features.json"), &format!("{features}\n"))?;
    println!("selected {} features:", rounds.selected.len());
    for name in rounds.selected.names() {
        println!("  {name}");
    }
    println!("wrote {}", out.display());
    Ok(())
}

pub fn train(o: TrainOpts, ctx: &Context) -> CliResult<()> {
    let hp = o.hyperparameters(Hyperparameters::default(), ctx.seed_for("train"))?;
    let base = memory_size(o.base)?;
    let features = load_feature_set(o.features.as_ref())?;
    let groups = load_groups(&required(o.dataset.clone(), "dataset")?)?;
    let set = training_set(&groups, base, &features).input()?;
    let model = fit_model(&set, &hp).runtime()?;
    let out = o.out.unwrap_or_else(|| "model.json".into());
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| invalid(format!("cannot create {}: {e}", parent.display())))?;
    }
    save_model(&model, &out).input()?;
    let history = &model.fitted.history;
    println!(
        "trained on {} functions at base {} with {} features; loss {:.4} -> {:.4} over {} epochs",
        set.rows.len(),
        base,
        features.len(),
        history[0],
        history[history.len() - 1],
        history.len()
    );
    println!("model: {}", out.display());
    Ok(())
}

fn cv_config(folds: Option<usize>, repetitions: Option<usize>, rows: usize, ctx: &Context) -> CliResult<CvConfig> {
    let cv = CvConfig {
        folds: folds.unwrap_or(5),
        repetitions: repetitions.unwrap_or(1),
        workers: ctx.workers,
    };
    if cv.folds < 2 || cv.folds > rows {
        return Err(invalid(format!("--folds must lie in [2, {rows}]")));
    }
    if cv.repetitions == 0 {
        return Err(invalid("--repetitions must be at least 1"));
    }
    Ok(cv)
}

pub fn grid_search(o: GridSearchOpts, ctx: &Context) -> CliResult<()> {
    let mut grid = match &o.grid {
        None => Grid::tuning(),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| invalid(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| invalid(format!("invalid grid {}: {e}", p.display())))?
        }
    };
    grid.seed = ctx.seed_for("grid-search");
    if grid.is_empty() {
        return Err(invalid("hyperparameter grid is empty"));
    }
    for hp in grid.combinations() {
        hp.validate().input()?;
    }
    let features = load_feature_set(o.features.as_ref())?;
    let groups = load_groups(&required(o.dataset.clone(), "dataset")?)?;
    let set = training_set(&groups, memory_size(o.base)?, &features).input()?;
    let cv = cv_config(o.folds, o.repetitions, set.rows.len(), ctx)?;
    let search = run_grid_search(&set, &grid, &cv).runtime()?;
    let out = o.out.unwrap_or_else(|| "leaderboard.csv".into());
    write_output(&out, &search.to_csv())?;
    let best = search.best();
    println!("evaluated {} combinations; best mean MAPE {:.6}", search.leaderboard.len(), best.metrics.mape);
    println!("{}", serde_json::to_string_pretty(&best.hyperparameters).runtime()?);
    println!("leaderboard: {}", out.display());
    Ok(())
}

pub fn basesize_study(o: BasesizeStudyOpts, ctx: &Context) -> CliResult<()> {
    let hp = o.hyperparameters(Hyperparameters::default(), ctx.seed_for("basesize-study"))?;
    let features = load_feature_set(o.features.as_ref())?;
    let groups = load_groups(&required(o.dataset.clone(), "dataset")?)?;
    let cv = cv_config(o.folds, o.repetitions, groups.len(), ctx)?;
    let rows = run_basesize_study(&groups, &features, &hp, &cv).runtime()?;
    let out = o.out.unwrap_or_else(|| "basesize.csv".into());
    let csv = basesize_csv(&rows);
    write_output(&out, &csv)?;
    print!("{csv}");
    Ok(())
}

pub fn evaluate(o: EvaluateOpts, _ctx: &Context) -> CliResult<()> {
    let model = load_model(&required(o.model.clone(), "model")?).input()?;
    let groups = load_groups(&required(o.dataset.clone(), "dataset")?)?;
    let set = training_set(&groups, model.base, &model.feature_set).input()?;
    let m = score_model(&model, &set.rows).runtime()?;
    let csv = format!(
        "functions,mse,mape,r_squared,explained_variance\n{},{},{},{},{}\n",
        set.rows.len(),
        m.mse,
        m.mape,
        m.r_squared,
        m.explained_variance
    );
    emit(o.out.as_ref(), &csv)
}
