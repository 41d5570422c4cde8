//! Absolute loss and the thresholded sign rule.
//!
//! All learners minimize the instantaneous absolute loss `|e|`. Its
//! gradient with respect to the weights is `±x` depending only on the
//! sign of the error, and it is undefined at `e = 0`; the threshold rule
//! treats any error with `|e| ≤ ε` as zero gradient, skipping the weight
//! update for that step.

use crate::scalar::Scalar;

/// Result of one prediction step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome<F = f64> {
    /// One-step-ahead prediction emitted before observing the sample.
    pub prediction: F,
    /// `target − prediction`.
    pub error: F,
    /// Whether `|error| > ε` fired a weight update.
    pub updated: bool,
}

/// Instantaneous absolute loss `|error|`.
pub fn absolute_loss<F: Scalar>(error: F) -> F {
    error.abs()
}

/// Sign of the error, thresholded: returns zero when `|error| ≤ epsilon`,
/// otherwise `±1`. A zero result means the weight update is skipped this
/// step. With `epsilon = 0`, a zero error still yields zero.
pub fn gradient_sign<F: Scalar>(error: F, epsilon: F) -> F {
    debug_assert!(epsilon >= F::zero());
    if error.abs() <= epsilon {
        F::zero()
    } else if error > F::zero() {
        F::one()
    } else {
        -F::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn absolute_loss_of_zero_is_zero() {
        assert_eq!(absolute_loss(0.0), 0.0);
    }

    #[test]
    fn absolute_loss_is_symmetric() {
        assert_eq!(absolute_loss(-2.5), 2.5);
        assert_eq!(absolute_loss(2.5), 2.5);
    }

    #[test]
    fn absolute_loss_matches_abs_oracle() {
        let mut state = 0x9E37_79B9_7F4A_7C15u64;
        for _ in 0..10_000 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            let e = ((state >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 1e6;
            assert_eq!(absolute_loss(e), e.abs());
        }
    }

    #[test]
    fn sign_is_zero_below_threshold() {
        let eps = 1e-3;
        assert_eq!(gradient_sign(0.5 * eps, eps), 0.0);
        assert_eq!(gradient_sign(-0.5 * eps, eps), 0.0);
        // boundary counts as "no update"
        assert_eq!(gradient_sign(eps, eps), 0.0);
    }

    #[test]
    fn sign_above_threshold() {
        assert_eq!(gradient_sign(3.0, 1e-8), 1.0);
        assert_eq!(gradient_sign(-3.0, 1e-8), -1.0);
    }

    #[test]
    fn zero_epsilon_is_valid_and_sign_of_zero_is_zero() {
        assert_eq!(gradient_sign(0.0, 0.0), 0.0);
        assert_eq!(gradient_sign(1e-300, 0.0), 1.0);
    }

    #[test]
    fn sign_is_odd_above_threshold() {
        let eps = 1e-8;
        for e in [1e-6, 0.3, 2.0, 1e9] {
            assert_eq!(gradient_sign(-e, eps), -gradient_sign(e, eps));
        }
    }
}
