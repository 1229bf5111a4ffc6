use serde::{Deserialize, Serialize};

use super::RegressionModel;
use crate::features::RegressionRow;
use crate::{Error, Result};

const MAPE_EPSILON: f64 = 1e-8;

/// Regression quality pooled over every target of every row. `mape` is a
/// fraction, not a percentage.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EvaluationMetrics {
    pub mse: f64,
    pub mape: f64,
    pub r_squared: f64,
    pub explained_variance: f64,
}

impl EvaluationMetrics {
    pub fn from_predictions(predicted: &[Vec<f64>], actual: &[Vec<f64>]) -> Result<Self> {
        if predicted.len() != actual.len() || predicted.is_empty() {
            return Err(Error::domain("prediction and truth must be non-empty and of equal length"));
        }
        let mut p = Vec::new();
        let mut a = Vec::new();
        for (pr, ar) in predicted.iter().zip(actual) {
            if pr.len() != ar.len() {
                return Err(Error::domain("prediction and truth rows differ in width"));
            }
            p.extend_from_slice(pr);
            a.extend_from_slice(ar);
        }
        let n = p.len() as f64;
        let mse = p.iter().zip(&a).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / n;
        let mape = p.iter().zip(&a).map(|(x, y)| (x - y).abs() / y.abs().max(MAPE_EPSILON)).sum::<f64>() / n;
        let mean_a = a.iter().sum::<f64>() / n;
        let ss_tot = a.iter().map(|y| (y - mean_a) * (y - mean_a)).sum::<f64>();
        let ss_res = mse * n;
        let residuals: Vec<f64> = a.iter().zip(&p).map(|(y, x)| y - x).collect();
        let mean_r = residuals.iter().sum::<f64>() / n;
        let var_r = residuals.iter().map(|r| (r - mean_r) * (r - mean_r)).sum::<f64>() / n;
        let var_a = ss_tot / n;
        // constant truth: 1 for a perfect fit, 0 otherwise
        let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else if ss_res == 0.0 { 1.0 } else { 0.0 };
        let explained_variance = if var_a > 0.0 { 1.0 - var_r / var_a } else if var_r == 0.0 { 1.0 } else { 0.0 };
        Ok(EvaluationMetrics {
            mse,
            mape,
            r_squared,
            explained_variance,
        })
    }

    pub fn mean(all: &[EvaluationMetrics]) -> Self {
        let n = all.len().max(1) as f64;
        let sum = |f: fn(&EvaluationMetrics) -> f64| all.iter().map(f).sum::<f64>() / n;
        EvaluationMetrics {
            mse: sum(|m| m.mse),
            mape: sum(|m| m.mape),
            r_squared: sum(|m| m.r_squared),
            explained_variance: sum(|m| m.explained_variance),
        }
    }
}

/// Score the model's floored ratio predictions on held-out rows.
pub fn evaluate(model: &RegressionModel, rows: &[RegressionRow]) -> Result<EvaluationMetrics> {
    let mut predicted = Vec::with_capacity(rows.len());
    let mut actual = Vec::with_capacity(rows.len());
    for row in rows {
        if row.targets.base != model.base {
            return Err(Error::domain(format!("row {} uses base {}, model uses {}", row.function_id, row.targets.base, model.base)));
        }
        predicted.push(model.predict_ratios(&row.features)?.to_vec());
        actual.push(row.targets.ratios.to_vec());
    }
    EvaluationMetrics::from_predictions(&predicted, &actual)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_prediction() {
        let y = vec![vec![1.0, 2.0], vec![3.0, 4.0]];
        let m = EvaluationMetrics::from_predictions(&y, &y).unwrap();
        assert_eq!(m, EvaluationMetrics { mse: 0.0, mape: 0.0, r_squared: 1.0, explained_variance: 1.0 });
    }

    #[test]
    fn by_hand() {
        // truth [1, 2, 3, 4], prediction [2, 2, 3, 5]: residuals [-1, 0, 0, -1]
        let m = EvaluationMetrics::from_predictions(&[vec![2.0, 2.0], vec![3.0, 5.0]], &[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(m.mse, 0.5);
        assert!((m.mape - (1.0 + 0.25) / 4.0).abs() < 1e-15);
        assert!((m.r_squared - (1.0 - 2.0 / 5.0)).abs() < 1e-15);
        // residual variance 0.25, truth variance 1.25
        assert!((m.explained_variance - (1.0 - 0.25 / 1.25)).abs() < 1e-15);
    }

    #[test]
    fn constant_bias_keeps_explained_variance() {
        let m = EvaluationMetrics::from_predictions(&[vec![2.0, 3.0]], &[vec![1.0, 2.0]]).unwrap();
        assert_eq!(m.explained_variance, 1.0);
        assert!(m.r_squared < 1.0);
    }

    #[test]
    fn constant_truth() {
        let m = EvaluationMetrics::from_predictions(&[vec![1.0, 1.5]], &[vec![1.0, 1.0]]).unwrap();
        assert_eq!(m.r_squared, 0.0);
    }
}
