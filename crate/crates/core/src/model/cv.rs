use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{evaluate, train, EvaluationMetrics, Grid, Hyperparameters};
use crate::domain::MemorySize;
use crate::features::{training_set, FeatureSet, FunctionMeasurements, TrainingSet};
use crate::parallel::{try_par_map, Workers};
use crate::seed::derive;
use crate::split::{complement, kfold};
use crate::{Error, Result};

/// Repeated k-fold settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CvConfig {
    pub folds: usize,
    pub repetitions: usize,
    pub workers: Workers,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig {
            folds: 5,
            repetitions: 1,
            workers: Workers::default(),
        }
    }
}

/// Metrics of every held-out fold, repetition-major.
pub fn cross_validate_folds(set: &TrainingSet, hp: &Hyperparameters, cv: &CvConfig) -> Result<Vec<EvaluationMetrics>> {
    if cv.repetitions == 0 {
        return Err(Error::domain("cross-validation needs at least one repetition"));
    }
    let mut tasks = Vec::with_capacity(cv.folds * cv.repetitions);
    for rep in 0..cv.repetitions {
        let folds = kfold(set.rows.len(), cv.folds, derive(hp.seed, &format!("cv/{rep}")))?;
        for k in 0..folds.len() {
            tasks.push((complement(&folds, k), folds[k].clone()));
        }
    }
    try_par_map(&tasks, cv.workers, |(train_idx, test_idx)| {
        let model = train(&set.subset(train_idx), hp)?;
        let held_out = set.subset(test_idx);
        evaluate(&model, &held_out.rows)
    })
}

/// Mean metrics over `repetitions x folds` held-out folds.
pub fn cross_validate(set: &TrainingSet, hp: &Hyperparameters, cv: &CvConfig) -> Result<EvaluationMetrics> {
    Ok(EvaluationMetrics::mean(&cross_validate_folds(set, hp, cv)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeaderboardEntry {
    pub hyperparameters: Hyperparameters,
    pub metrics: EvaluationMetrics,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridSearch {
    /// In grid enumeration order.
    pub leaderboard: Vec<LeaderboardEntry>,
    pub best: usize,
}

impl GridSearch {
    pub fn best(&self) -> &LeaderboardEntry {
        &self.leaderboard[self.best]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "index,optimizer,loss,epochs,neurons_per_layer,l2,hidden_layers,learning_rate,batch_size,mse,mape,r_squared,explained_variance\n",
        );
        for (i, e) in self.leaderboard.iter().enumerate() {
            let h = &e.hyperparameters;
            let m = &e.metrics;
            let _ = writeln!(
                out,
                "{i},{},{},{},{},{},{},{},{},{},{},{},{}",
                h.optimizer,
                h.loss,
                h.epochs,
                h.neurons_per_layer,
                h.l2,
                h.hidden_layers,
                h.learning_rate,
                h.batch_size,
                m.mse,
                m.mape,
                m.r_squared,
                m.explained_variance
            );
        }
        out
    }
}

/// Cross-validate every grid combination and pick the lowest mean MAPE; the
/// earliest combination wins ties.
pub fn grid_search(set: &TrainingSet, grid: &Grid, cv: &CvConfig) -> Result<GridSearch> {
    let combos = grid.combinations();
    if combos.is_empty() {
        return Err(Error::domain("hyperparameter grid is empty"));
    }
    for hp in &combos {
        hp.validate()?;
    }
    // parallelism lives at the combination level; folds run sequentially inside
    let inner = CvConfig {
        workers: Workers::SEQUENTIAL,
        ..*cv
    };
    let metrics = try_par_map(&combos, cv.workers, |hp| cross_validate(set, hp, &inner))?;
    let leaderboard: Vec<LeaderboardEntry> = combos
        .into_iter()
        .zip(metrics)
        .map(|(hyperparameters, metrics)| LeaderboardEntry { hyperparameters, metrics })
        .collect();
    let mut best = 0;
    for (i, e) in leaderboard.iter().enumerate() {
        if e.metrics.mape < leaderboard[best].metrics.mape {
            best = i;
        }
    }
    Ok(GridSearch { leaderboard, best })
}

/// Cross-validated metrics with each size in turn as the base.
pub fn basesize_study(
    groups: &[FunctionMeasurements],
    feature_set: &FeatureSet,
    hp: &Hyperparameters,
    cv: &CvConfig,
) -> Result<Vec<(MemorySize, EvaluationMetrics)>> {
    MemorySize::ALL
        .iter()
        .map(|&base| {
            let set = training_set(groups, base, feature_set)?;
            Ok((base, cross_validate(&set, hp, cv)?))
        })
        .collect()
}

pub fn basesize_csv(rows: &[(MemorySize, EvaluationMetrics)]) -> String {
    let mut out = String::from("basesize,mse,mape,r_squared,explained_variance\n");
    for (m, e) in rows {
        let _ = writeln!(out, "{},{},{},{},{}", m.megabytes(), e.mse, e.mape, e.r_squared, e.explained_variance);
    }
    out
}
