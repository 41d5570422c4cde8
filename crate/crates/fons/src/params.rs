//! Shared learner hyperparameters.

use thiserror::Error;

/// Invalid hyperparameter combinations, rejected at construction time so
/// no learner can start from a configuration that produces NaN
/// trajectories.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("window length must be at least 1")]
    ZeroDim,
    #[error("step size must be positive and finite, got {0}")]
    BadStepSize(f64),
    #[error("ridge must be positive and finite, got {0}")]
    BadRidge(f64),
    #[error("epsilon must be non-negative and finite, got {0}")]
    BadEpsilon(f64),
}

/// Hyperparameters shared by all learners.
///
/// The weight update applies `sign(e) / step_size` times the (scaled)
/// gradient direction, so larger `step_size` means smaller updates. The
/// ridge is the initial diagonal loading of the Hessian proxy, and
/// `epsilon` is the error threshold below which the weight update is
/// skipped (the absolute loss is not differentiable at zero error).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperParams {
    dim: usize,
    step_size: f64,
    ridge: f64,
    epsilon: f64,
}

impl HyperParams {
    /// Default error threshold for data scaled to `[-1, 1]`.
    pub const DEFAULT_EPSILON: f64 = 1e-8;

    pub fn new(dim: usize, step_size: f64, ridge: f64, epsilon: f64) -> Result<Self, ParamError> {
        if dim == 0 {
            return Err(ParamError::ZeroDim);
        }
        if !(step_size > 0.0 && step_size.is_finite()) {
            return Err(ParamError::BadStepSize(step_size));
        }
        if !(ridge > 0.0 && ridge.is_finite()) {
            return Err(ParamError::BadRidge(ridge));
        }
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(ParamError::BadEpsilon(epsilon));
        }
        Ok(Self {
            dim,
            step_size,
            ridge,
            epsilon,
        })
    }

    /// `step_size` = 1, `ridge` = 1, `epsilon` = 1e-8.
    pub fn with_dim(dim: usize) -> Result<Self, ParamError> {
        Self::new(dim, 1.0, 1.0, Self::DEFAULT_EPSILON)
    }

    /// Window length M.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Step size μ; updates scale by `1/μ`.
    pub fn step_size(&self) -> f64 {
        self.step_size
    }

    /// Diagonal loading α of the initial Hessian proxy.
    pub fn ridge(&self) -> f64 {
        self.ridge
    }

    /// Update threshold ε.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_valid_params() {
        let p = HyperParams::new(64, 0.003, 1.0, 1e-8).unwrap();
        assert_eq!(p.dim(), 64);
        assert_eq!(p.step_size(), 0.003);
        assert_eq!(p.ridge(), 1.0);
        assert_eq!(p.epsilon(), 1e-8);
    }

    #[test]
    fn rejects_zero_dim() {
        assert_eq!(HyperParams::new(0, 1.0, 1.0, 0.0), Err(ParamError::ZeroDim));
    }

    #[test]
    fn rejects_non_positive_step_size() {
        assert!(matches!(
            HyperParams::new(4, 0.0, 1.0, 0.0),
            Err(ParamError::BadStepSize(_))
        ));
        assert!(matches!(
            HyperParams::new(4, -1.0, 1.0, 0.0),
            Err(ParamError::BadStepSize(_))
        ));
        assert!(matches!(
            HyperParams::new(4, f64::NAN, 1.0, 0.0),
            Err(ParamError::BadStepSize(_))
        ));
    }

    #[test]
    fn rejects_non_positive_ridge() {
        assert!(matches!(
            HyperParams::new(4, 1.0, 0.0, 0.0),
            Err(ParamError::BadRidge(_))
        ));
    }

    #[test]
    fn rejects_negative_epsilon() {
        assert!(matches!(
            HyperParams::new(4, 1.0, 1.0, -1e-9),
            Err(ParamError::BadEpsilon(_))
        ));
    }

    #[test]
    fn zero_epsilon_is_valid() {
        assert!(HyperParams::new(4, 1.0, 1.0, 0.0).is_ok());
    }
}
