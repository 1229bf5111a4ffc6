use serde::Serialize;

use crate::parallel::{try_par_map, Workers};
use crate::split::{complement, kfold};
use crate::{Error, Result};

const MAPE_EPSILON: f64 = 1e-8;

/// A regression method that can be fitted on rows and queried on new rows.
pub trait FitPredict: Sync {
    fn fit_predict(&self, train_x: &[Vec<f64>], train_y: &[Vec<f64>], test_x: &[Vec<f64>]) -> Result<Vec<Vec<f64>>>;
}

impl<F> FitPredict for F
where
    F: Fn(&[Vec<f64>], &[Vec<f64>], &[Vec<f64>]) -> Result<Vec<Vec<f64>>> + Sync,
{
    fn fit_predict(&self, train_x: &[Vec<f64>], train_y: &[Vec<f64>], test_x: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        self(train_x, train_y, test_x)
    }
}

/// Mean absolute percentage error pooled over every output of every row.
pub fn mape(predicted: &[Vec<f64>], actual: &[Vec<f64>]) -> f64 {
    let mut total = 0.0;
    let mut count = 0usize;
    for (p, a) in predicted.iter().zip(actual) {
        for (pi, ai) in p.iter().zip(a) {
            total += (pi - ai).abs() / ai.abs().max(MAPE_EPSILON);
            count += 1;
        }
    }
    total / count.max(1) as f64
}

/// Named feature columns plus regression targets.
#[derive(Clone, Debug, PartialEq)]
pub struct SelectionData {
    pub names: Vec<String>,
    /// Row-major, one value per name.
    pub rows: Vec<Vec<f64>>,
    pub targets: Vec<Vec<f64>>,
}

impl SelectionData {
    fn column_index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::domain(format!("candidate `{name}` is not a dataset column")))
    }

    fn project(&self, columns: &[usize], rows: &[usize]) -> Vec<Vec<f64>> {
        rows.iter()
            .map(|&r| columns.iter().map(|&c| self.rows[r][c]).collect())
            .collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SelectionConfig {
    pub budget: usize,
    pub folds: usize,
    pub seed: u64,
    pub workers: Workers,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelectionStep {
    pub feature: String,
    pub validation_mape: f64,
}

/// Greedy selection order with the cross-validated error after each addition.
#[derive(Clone, Debug, PartialEq)]
pub struct SelectionTrace {
    pub steps: Vec<SelectionStep>,
    /// Length of the prefix with the lowest validation error (shorter wins ties).
    pub chosen_len: usize,
}

impl SelectionTrace {
    pub fn chosen(&self) -> Vec<String> {
        self.steps[..self.chosen_len].iter().map(|s| s.feature.clone()).collect()
    }

    /// `round,feature,validation_mape`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("round,feature,validation_mape\n");
        for (i, s) in self.steps.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", i + 1, s.feature, s.validation_mape));
        }
        out
    }
}

fn cross_validated_mape(
    data: &SelectionData,
    columns: &[usize],
    folds: &[Vec<usize>],
    trainer: &dyn FitPredict,
) -> Result<f64> {
    let mut total = 0.0;
    for (i, test) in folds.iter().enumerate() {
        let train = complement(folds, i);
        let train_y: Vec<Vec<f64>> = train.iter().map(|&r| data.targets[r].clone()).collect();
        let test_y: Vec<Vec<f64>> = test.iter().map(|&r| data.targets[r].clone()).collect();
        let predicted = trainer.fit_predict(&data.project(columns, &train), &train_y, &data.project(columns, test))?;
        total += mape(&predicted, &test_y);
    }
    Ok(total / folds.len() as f64)
}

/// Sequential forward selection.
///
/// Each round adds the remaining candidate whose inclusion gives the lowest
/// cross-validated MAPE (earlier candidates win ties). Every evaluation uses
/// the same seeded fold split. Candidates within a round are evaluated
/// concurrently.
pub fn sequential_forward_selection(
    candidates: &[String],
    data: &SelectionData,
    trainer: &dyn FitPredict,
    config: &SelectionConfig,
) -> Result<SelectionTrace> {
    if candidates.is_empty() {
        return Err(Error::domain("feature selection needs at least one candidate"));
    }
    if config.budget == 0 || config.budget > candidates.len() {
        return Err(Error::domain(format!(
            "budget must be in 1..={}, got {}",
            candidates.len(),
            config.budget
        )));
    }
    if data.rows.len() != data.targets.len() {
        return Err(Error::domain("feature rows and targets differ in length"));
    }
    let candidate_columns = candidates
        .iter()
        .map(|c| data.column_index(c))
        .collect::<Result<Vec<_>>>()?;
    let folds = kfold(data.rows.len(), config.folds, config.seed)?;

    let mut selected: Vec<usize> = Vec::new();
    let mut remaining: Vec<usize> = (0..candidates.len()).collect();
    let mut steps = Vec::with_capacity(config.budget);
    while steps.len() < config.budget {
        let scores = try_par_map(&remaining, config.workers, |&candidate| {
            let mut columns: Vec<usize> = selected.iter().map(|&s| candidate_columns[s]).collect();
            columns.push(candidate_columns[candidate]);
            cross_validated_mape(data, &columns, &folds, trainer)
        })?;
        let mut best = 0;
        for (i, score) in scores.iter().enumerate() {
            if score < &scores[best] {
                best = i;
            }
        }
        let chosen = remaining.remove(best);
        selected.push(chosen);
        steps.push(SelectionStep {
            feature: candidates[chosen].clone(),
            validation_mape: scores[best],
        });
    }
    let mut chosen_len = 1;
    for (i, step) in steps.iter().enumerate() {
        if step.validation_mape < steps[chosen_len - 1].validation_mape {
            chosen_len = i + 1;
        }
    }
    Ok(SelectionTrace { steps, chosen_len })
}
