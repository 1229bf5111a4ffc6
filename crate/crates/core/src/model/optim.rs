//! Parameter update rules.

use super::OptimizerKind;

pub const ADAM_BETA1: f64 = 0.9;
pub const ADAM_BETA2: f64 = 0.999;
pub const EPSILON: f64 = 1e-8;

/// Optimizer with its per-parameter state.
#[derive(Clone, Debug)]
pub enum Optimizer {
    Sgd { learning_rate: f64 },
    Adam { learning_rate: f64, m: Vec<f64>, v: Vec<f64>, t: i32 },
    Adagrad { learning_rate: f64, accumulator: Vec<f64> },
}

impl Optimizer {
    pub fn new(kind: OptimizerKind, learning_rate: f64, parameter_count: usize) -> Self {
        match kind {
            OptimizerKind::Sgd => Optimizer::Sgd { learning_rate },
            OptimizerKind::Adam => Optimizer::Adam {
                learning_rate,
                m: vec![0.0; parameter_count],
                v: vec![0.0; parameter_count],
                t: 0,
            },
            OptimizerKind::Adagrad => Optimizer::Adagrad {
                learning_rate,
                accumulator: vec![0.0; parameter_count],
            },
        }
    }

    pub fn step(&mut self, params: &mut [f64], gradient: &[f64]) {
        debug_assert_eq!(params.len(), gradient.len());
        match self {
            Optimizer::Sgd { learning_rate } => {
                for (p, g) in params.iter_mut().zip(gradient) {
                    *p -= *learning_rate * g;
                }
            }
            Optimizer::Adam { learning_rate, m, v, t } => {
                *t += 1;
                let correction1 = 1.0 - ADAM_BETA1.powi(*t);
                let correction2 = 1.0 - ADAM_BETA2.powi(*t);
                for i in 0..params.len() {
                    let g = gradient[i];
                    m[i] = ADAM_BETA1 * m[i] + (1.0 - ADAM_BETA1) * g;
                    v[i] = ADAM_BETA2 * v[i] + (1.0 - ADAM_BETA2) * g * g;
                    let m_hat = m[i] / correction1;
                    let v_hat = v[i] / correction2;
                    params[i] -= *learning_rate * m_hat / (v_hat.sqrt() + EPSILON);
                }
            }
            Optimizer::Adagrad { learning_rate, accumulator } => {
                for i in 0..params.len() {
                    let g = gradient[i];
                    accumulator[i] += g * g;
                    params[i] -= *learning_rate * g / (accumulator[i].sqrt() + EPSILON);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // one parameter w = 1.0, gradient 0.5, learning rate 0.1

    #[test]
    fn sgd_single_step() {
        let mut w = [1.0];
        Optimizer::new(OptimizerKind::Sgd, 0.1, 1).step(&mut w, &[0.5]);
        assert_eq!(w[0], 0.95);
    }

    #[test]
    fn adam_single_step() {
        // m = 0.05, v = 0.00025, m_hat = 0.5, v_hat = 0.25, step = 0.1 * 0.5 / (0.5 + 1e-8)
        let mut w = [1.0];
        let mut opt = Optimizer::new(OptimizerKind::Adam, 0.1, 1);
        opt.step(&mut w, &[0.5]);
        let expected = 1.0 - 0.1 * 0.5 / (0.5 + 1e-8);
        assert!((w[0] - expected).abs() < 1e-15, "{}", w[0]);
        // second step with the same gradient: m = 0.095, v = 0.00049975
        opt.step(&mut w, &[0.5]);
        let m_hat = 0.095 / (1.0 - 0.81);
        let v_hat: f64 = 0.000_499_75 / (1.0 - 0.998_001);
        let expected2 = expected - 0.1 * m_hat / (v_hat.sqrt() + 1e-8);
        assert!((w[0] - expected2).abs() < 1e-12);
    }

    #[test]
    fn adagrad_single_step() {
        // accumulator = 0.25, step = 0.1 * 0.5 / (0.5 + 1e-8)
        let mut w = [1.0];
        let mut opt = Optimizer::new(OptimizerKind::Adagrad, 0.1, 1);
        opt.step(&mut w, &[0.5]);
        assert!((w[0] - (1.0 - 0.05 / (0.5 + 1e-8))).abs() < 1e-15);
        // accumulator = 0.5 after a second identical gradient
        let before = w[0];
        opt.step(&mut w, &[0.5]);
        assert!((w[0] - (before - 0.05 / (0.5f64.sqrt() + 1e-8))).abs() < 1e-15);
    }
}
