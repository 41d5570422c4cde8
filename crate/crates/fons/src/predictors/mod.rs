//! Sequential one-step-ahead learners.
//!
//! Each learner is a deterministic state machine: one call to `step`
//! consumes the next sample, emits the prediction that was made for it
//! from the current window, updates the internal state, and shifts the
//! sample into the window. Step `t+1` depends on step `t`, so a single
//! learner is strictly sequential; distinct learners are independent
//! values and may run on different threads without coordination.

mod fast_ons;
mod ogd;
mod ons;

pub use fast_ons::{BreakdownPolicy, FastOns};
pub use ogd::Ogd;
pub use ons::Ons;

use thiserror::Error;

use crate::loss::StepOutcome;
use crate::scalar::Scalar;
use crate::window::SlidingWindow;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum PredictorError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// The normalization term `η = 1 + xᵀA⁻¹x` lost positivity, meaning
    /// the inverse Hessian proxy is no longer positive definite.
    #[error("numerical divergence: eta = {eta}")]
    NumericalDivergence { eta: f64 },
    /// Finite-precision failure of the hyperbolic rotation pivot,
    /// surfaced when the learner is configured to abort instead of
    /// rebuilding its state.
    #[error("hyperbolic rotation breakdown: |{a}| <= |{b}|")]
    HyperbolicBreakdown { a: f64, b: f64 },
}

/// Linear prediction `wᵀx` over a window, newest-first alignment.
pub fn predict<F: Scalar>(weights: &[F], window: &SlidingWindow<F>) -> Result<F, PredictorError> {
    if weights.len() != window.len() {
        return Err(PredictorError::DimensionMismatch {
            expected: window.len(),
            got: weights.len(),
        });
    }
    Ok(window.dot(weights))
}

/// Object-safe interface the experiment drivers run against (`f64` only).
pub trait Predictor {
    /// Consume the next sample: predict it from the current window,
    /// update the learner state, then shift it into the window.
    fn step(&mut self, next_sample: f64) -> Result<StepOutcome, PredictorError>;

    /// Current weight vector, newest-first alignment.
    fn weights(&self) -> &[f64];

    /// Window length M.
    fn dim(&self) -> usize;

    /// Hyperbolic breakdown events recovered from so far.
    fn breakdown_count(&self) -> u64 {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predict_with_zero_weights_is_zero() {
        let mut w: SlidingWindow = SlidingWindow::new(3);
        for s in [0.1, -2.0, 7.5] {
            w.push(s);
        }
        assert_eq!(predict(&[0.0, 0.0, 0.0], &w).unwrap(), 0.0);
    }

    #[test]
    fn predict_with_first_unit_vector_returns_newest() {
        let mut w: SlidingWindow = SlidingWindow::new(3);
        for s in [1.0, 2.0, 3.0] {
            w.push(s);
        }
        assert_eq!(predict(&[1.0, 0.0, 0.0], &w).unwrap(), 3.0);
    }

    #[test]
    fn predict_matches_naive_dot() {
        let mut state = 12345u64;
        let mut rnd = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for _ in 0..100 {
            let m = 7;
            let mut w: SlidingWindow = SlidingWindow::new(m);
            let mut newest_first = vec![0.0; m];
            for _ in 0..m + 3 {
                w.push(rnd());
            }
            w.write_to(&mut newest_first);
            let weights: Vec<f64> = (0..m).map(|_| rnd()).collect();
            let naive: f64 = weights.iter().zip(&newest_first).map(|(a, b)| a * b).sum();
            assert!((predict(&weights, &w).unwrap() - naive).abs() < 1e-15);
        }
    }

    #[test]
    fn predict_rejects_mismatched_dims() {
        let w: SlidingWindow = SlidingWindow::new(3);
        assert_eq!(
            predict(&[1.0, 2.0], &w),
            Err(PredictorError::DimensionMismatch {
                expected: 3,
                got: 2
            })
        );
    }
}
