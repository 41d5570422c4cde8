//! Online Newton step with an explicit inverse Hessian proxy.

use crate::loss::{gradient_sign, StepOutcome};
use crate::params::HyperParams;
use crate::predictors::{Predictor, PredictorError};
use crate::scalar::Scalar;
use crate::window::SlidingWindow;

/// Regular online Newton step.
///
/// Carries the full `M×M` inverse proxy `A⁻¹`, initialized to `(1/α)·I`,
/// and updates it every step through the matrix inversion lemma:
///
/// ```text
/// g = A⁻¹x,  η = 1 + xᵀg,  A⁻¹ ← A⁻¹ − g gᵀ / η
/// ```
///
/// The weight update `w ← w + sign(e)·(1/μ)·g/η` is applied only when
/// `|e| > ε`; the proxy update runs unconditionally. O(M²) per step.
#[derive(Debug, Clone)]
pub struct Ons<F = f64> {
    weights: Vec<F>,
    /// Row-major `M×M`, symmetric positive definite.
    a_inv: Vec<F>,
    window: SlidingWindow<F>,
    eta: F,
    inv_step_size: F,
    epsilon: F,
    // scratch buffers, reused across steps
    x: Vec<F>,
    g: Vec<F>,
}

impl<F: Scalar> Ons<F> {
    pub fn new(params: &HyperParams) -> Self {
        let m = params.dim();
        let mut a_inv = vec![F::zero(); m * m];
        let diag = F::one() / F::from_f64(params.ridge());
        for i in 0..m {
            a_inv[i * m + i] = diag;
        }
        Self {
            weights: vec![F::zero(); m],
            a_inv,
            window: SlidingWindow::new(m),
            eta: F::one(),
            inv_step_size: F::one() / F::from_f64(params.step_size()),
            epsilon: F::from_f64(params.epsilon()),
            x: vec![F::zero(); m],
            g: vec![F::zero(); m],
        }
    }

    pub fn step(&mut self, next_sample: F) -> Result<StepOutcome<F>, PredictorError> {
        let m = self.weights.len();
        self.window.write_to(&mut self.x);

        let mut prediction = F::zero();
        for (w, x) in self.weights.iter().zip(&self.x) {
            prediction = prediction + *w * *x;
        }
        let error = next_sample - prediction;

        // g = A⁻¹x and η = 1 + xᵀg
        let mut xg = F::zero();
        for i in 0..m {
            let row = &self.a_inv[i * m..(i + 1) * m];
            let mut acc = F::zero();
            for (a, x) in row.iter().zip(&self.x) {
                acc = acc + *a * *x;
            }
            self.g[i] = acc;
            xg = xg + self.x[i] * acc;
        }
        let eta = F::one() + xg;
        if eta.is_nan() || eta <= F::zero() {
            return Err(PredictorError::NumericalDivergence { eta: eta.to_f64() });
        }
        self.eta = eta;

        let sign = gradient_sign(error, self.epsilon);
        let updated = sign != F::zero();
        if updated {
            let k = sign * self.inv_step_size / eta;
            for (w, g) in self.weights.iter_mut().zip(&self.g) {
                *w = *w + k * *g;
            }
        }

        // A⁻¹ ← A⁻¹ − g gᵀ/η, every step
        for i in 0..m {
            let gi = self.g[i] / eta;
            let row = &mut self.a_inv[i * m..(i + 1) * m];
            for (a, g) in row.iter_mut().zip(&self.g) {
                *a = *a - gi * *g;
            }
        }

        self.window.push(next_sample);
        Ok(StepOutcome {
            prediction,
            error,
            updated,
        })
    }

    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    pub fn window(&self) -> &SlidingWindow<F> {
        &self.window
    }

    /// Row-major inverse proxy `A⁻¹`.
    pub fn a_inv(&self) -> &[F] {
        &self.a_inv
    }

    /// Normalization term `η = 1 + xᵀA⁻¹x` of the most recent step.
    pub fn eta(&self) -> F {
        self.eta
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }
}

impl Predictor for Ons<f64> {
    fn step(&mut self, next_sample: f64) -> Result<StepOutcome, PredictorError> {
        Ons::step(self, next_sample)
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

    fn params(dim: usize, step_size: f64, ridge: f64) -> HyperParams {
        HyperParams::new(dim, step_size, ridge, 1e-8).unwrap()
    }

    #[test]
    fn starts_from_scaled_identity() {
        let ons: Ons = Ons::new(&params(2, 1.0, 4.0));
        assert_eq!(ons.a_inv(), &[0.25, 0.0, 0.0, 0.25]);
        assert_eq!(ons.weights(), &[0.0, 0.0]);
    }

    #[test]
    fn zero_window_step_changes_nothing_but_the_window() {
        let mut ons: Ons = Ons::new(&params(3, 1.0, 1.0));
        let a_before = ons.a_inv().to_vec();
        let out = ons.step(5.0).unwrap();
        assert_eq!(out.prediction, 0.0);
        assert_eq!(out.error, 5.0);
        assert_eq!(ons.eta(), 1.0);
        assert_eq!(ons.a_inv(), a_before.as_slice());
        assert_eq!(ons.weights(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn hand_evaluated_single_tap_step() {
        // M=1, ridge 1, step size 1, window [1], next 2:
        // e = 2, η = 2, a_inv' = 1 - 1/2 = 0.5, w' = 0 + 1·(1/1)·(1/2) = 0.5
        let mut ons: Ons = Ons::new(&params(1, 1.0, 1.0));
        ons.step(1.0).unwrap();
        let out = ons.step(2.0).unwrap();
        assert_eq!(out.error, 2.0);
        assert_eq!(ons.eta(), 2.0);
        assert!((ons.a_inv()[0] - 0.5).abs() < 1e-15);
        assert!((ons.weights()[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rank_one_update_matches_direct_inverse_for_ones_window() {
        // With A = I and x = [1, 1]: (I + xxᵀ)⁻¹ = I − (1/3)·xxᵀ
        let p = params(2, 1.0, 1.0);
        let mut ons: Ons = Ons::new(&p);
        ons.window.push(1.0);
        ons.window.push(1.0);
        ons.step(0.0).unwrap();
        let expect = [2.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0];
        for (a, e) in ons.a_inv().iter().zip(&expect) {
            assert!((a - e).abs() < 1e-15, "{:?}", ons.a_inv());
        }
    }

    #[test]
    fn below_threshold_still_updates_the_proxy() {
        let p = HyperParams::new(1, 1.0, 1.0, 10.0).unwrap();
        let mut ons: Ons = Ons::new(&p);
        ons.step(1.0).unwrap();
        let out = ons.step(2.0).unwrap();
        assert!(!out.updated);
        assert_eq!(ons.weights(), &[0.0]);
        // proxy update is unconditional
        assert!((ons.a_inv()[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn a_inv_stays_symmetric() {
        let p = params(4, 1.0, 1.0);
        let mut ons: Ons = Ons::new(&p);
        let mut state = 99u64;
        let mut rnd = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for _ in 0..200 {
            ons.step(rnd()).unwrap();
        }
        let m = 4;
        for i in 0..m {
            for j in 0..m {
                let d = (ons.a_inv()[i * m + j] - ons.a_inv()[j * m + i]).abs();
                assert!(d < 1e-10);
            }
        }
    }
}
