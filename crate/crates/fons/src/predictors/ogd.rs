//! First-order online gradient descent with sign gradients.

use crate::loss::{gradient_sign, StepOutcome};
use crate::params::HyperParams;
use crate::predictors::{Predictor, PredictorError};
use crate::scalar::Scalar;
use crate::window::SlidingWindow;

/// Online gradient descent over the absolute loss.
///
/// The gradient of `|e|` is `−sign(e)·x`, so the update is
/// `w ← w + sign(e)·(1/μ)·x` whenever `|e| > ε`. O(M) per step.
#[derive(Debug, Clone)]
pub struct Ogd<F = f64> {
    weights: Vec<F>,
    window: SlidingWindow<F>,
    inv_step_size: F,
    epsilon: F,
}

impl<F: Scalar> Ogd<F> {
    pub fn new(params: &HyperParams) -> Self {
        Self {
            weights: vec![F::zero(); params.dim()],
            window: SlidingWindow::new(params.dim()),
            inv_step_size: F::one() / F::from_f64(params.step_size()),
            epsilon: F::from_f64(params.epsilon()),
        }
    }

    pub fn step(&mut self, next_sample: F) -> StepOutcome<F> {
        let prediction = self.window.dot(&self.weights);
        let error = next_sample - prediction;
        let sign = gradient_sign(error, self.epsilon);
        let updated = sign != F::zero();
        if updated {
            let k = sign * self.inv_step_size;
            let (a, b) = self.window.as_slices();
            for (w, x) in self.weights[..a.len()].iter_mut().zip(a) {
                *w = *w + k * *x;
            }
            for (w, x) in self.weights[a.len()..].iter_mut().zip(b) {
                *w = *w + k * *x;
            }
        }
        self.window.push(next_sample);
        StepOutcome {
            prediction,
            error,
            updated,
        }
    }

    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    pub fn window(&self) -> &SlidingWindow<F> {
        &self.window
    }
}

impl Predictor for Ogd<f64> {
    fn step(&mut self, next_sample: f64) -> Result<StepOutcome, PredictorError> {
        Ok(Ogd::step(self, next_sample))
    }

    fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn dim(&self) -> usize {
        self.weights.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(dim: usize, step_size: f64) -> HyperParams {
        HyperParams::new(dim, step_size, 1.0, 1e-8).unwrap()
    }

    #[test]
    fn cold_start_leaves_weights_unchanged() {
        let mut ogd: Ogd = Ogd::new(&params(3, 1.0));
        let out = ogd.step(2.0);
        assert_eq!(out.prediction, 0.0);
        assert_eq!(out.error, 2.0);
        // |e| > eps fired, but the gradient is the zero window
        assert!(out.updated);
        assert_eq!(ogd.weights(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn hand_evaluated_single_tap_update() {
        // M = 1, step size 10, window [1], next sample 2:
        // e = 2, w' = 0 + sign(2) * (1/10) * 1 = 0.1
        let mut ogd: Ogd = Ogd::new(&params(1, 10.0));
        ogd.step(1.0);
        let out = ogd.step(2.0);
        assert_eq!(out.error, 2.0);
        assert!((ogd.weights()[0] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn below_threshold_changes_only_the_window() {
        let eps = 0.5;
        let p = HyperParams::new(2, 1.0, 1.0, eps).unwrap();
        let mut ogd: Ogd = Ogd::new(&p);
        ogd.step(1.0);
        let w_before = ogd.weights().to_vec();
        // prediction is 0, so error 0.4 is below the threshold
        let out = ogd.step(0.4);
        assert!(!out.updated);
        assert_eq!(ogd.weights(), w_before.as_slice());
        assert_eq!(ogd.window().to_vec(), vec![0.4, 1.0]);
    }
}
