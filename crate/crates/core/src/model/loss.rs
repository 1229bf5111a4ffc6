//! Regression losses averaged over every output of every row.

use ndarray::{Array2, ArrayView2, Zip};

use super::LossKind;

/// Denominator floor for the percentage loss.
pub const MAPE_EPSILON: f64 = 1e-8;

/// The percentage loss is expressed in percent.
pub const MAPE_SCALE: f64 = 100.0;

/// Loss value and its gradient with respect to `predicted`.
pub fn value_and_gradient(kind: LossKind, predicted: ArrayView2<f64>, target: ArrayView2<f64>) -> (f64, Array2<f64>) {
    let count = predicted.len().max(1) as f64;
    let mut gradient = Array2::zeros(predicted.raw_dim());
    let mut total = 0.0;
    Zip::from(&mut gradient)
        .and(&predicted)
        .and(&target)
        .for_each(|g, &p, &t| {
            let diff = p - t;
            match kind {
                LossKind::Mse => {
                    total += diff * diff;
                    *g = 2.0 * diff / count;
                }
                LossKind::Mae => {
                    total += diff.abs();
                    *g = sign(diff) / count;
                }
                LossKind::Mape => {
                    let denom = t.abs().max(MAPE_EPSILON);
                    total += MAPE_SCALE * diff.abs() / denom;
                    *g = MAPE_SCALE * sign(diff) / denom / count;
                }
            }
        });
    (total / count, gradient)
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}
