//! Linear-time online Newton step for shift-structured windows.

use crate::loss::{gradient_sign, StepOutcome};
use crate::params::HyperParams;
use crate::predictors::{Predictor, PredictorError};
use crate::rotations::{apply_transform, PreArray, RotationError};
use crate::scalar::Scalar;
use crate::window::SlidingWindow;

/// What to do when the hyperbolic rotation pivot collapses. The collapse
/// cannot happen in exact arithmetic (the pivot carries `η ≥ 1`), so it
/// only signals accumulated round-off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BreakdownPolicy {
    /// Discard the rank-2 statistics and rebuild them from scratch by
    /// replaying the retained window, then continue. The weight vector is
    /// kept.
    #[default]
    Rebuild,
    /// Surface the breakdown as an error and stop.
    Abort,
}

/// Fast online Newton step.
///
/// Tracks the same weight trajectory as [`crate::predictors::Ons`]
/// without ever forming an `M×M` matrix. Because consecutive windows
/// share `M−1` entries, the difference between consecutive embedded
/// inverse proxies has rank 2 and factors as `Δ = Λ Π Λᵀ` with `Λ` of
/// width 2 and `Π = diag(1, −1)`. Each step assembles the `(M+2)×3`
/// pre-array
///
/// ```text
/// ⎡ √η   x̃ᵀΛ ⎤            x̃ = [newest sample; previous window]
/// ⎣ [0;ρ]  Λ  ⎦            ρ = A⁻¹x / √η
/// ```
///
/// and annihilates its first row with one Givens and one hyperbolic
/// rotation; the transformed array directly contains `√η`, `ρ` and `Λ`
/// for the current window. Everything is O(M) per step.
#[derive(Debug, Clone)]
pub struct FastOns<F = f64> {
    weights: Vec<F>,
    sqrt_eta: F,
    /// Normalized Newton direction `A⁻¹x/√η` of the last transform.
    rho: Vec<F>,
    /// Rotation workspace; the rank-2 factor `Λ` lives in columns 1 and 2
    /// (rows `1..M+2`) between steps, column 0 is rebuilt every step.
    arr: PreArray<F>,
    window: SlidingWindow<F>,
    /// Sample discarded by the most recent push; together with the window
    /// it forms the extended vector `x̃`.
    tail: F,
    inv_step_size: F,
    epsilon: F,
    lambda_init: F,
    policy: BreakdownPolicy,
    breakdown_count: u64,
}

impl<F: Scalar> FastOns<F> {
    pub fn new(params: &HyperParams) -> Self {
        Self::with_policy(params, BreakdownPolicy::default())
    }

    pub fn with_policy(params: &HyperParams, policy: BreakdownPolicy) -> Self {
        let m = params.dim();
        let lambda_init = (F::one() / F::from_f64(params.ridge())).sqrt();
        let mut state = Self {
            weights: vec![F::zero(); m],
            sqrt_eta: F::one(),
            rho: vec![F::zero(); m],
            arr: PreArray::zeros(m),
            window: SlidingWindow::new(m),
            tail: F::zero(),
            inv_step_size: F::one() / F::from_f64(params.step_size()),
            epsilon: F::from_f64(params.epsilon()),
            lambda_init,
            policy,
            breakdown_count: 0,
        };
        state.reset_lambda();
        state
    }

    /// `Λ ← √(1/α)·[e₀, e_M]`: a single entry at the top of column one
    /// and at the bottom of column two.
    fn reset_lambda(&mut self) {
        let m = self.weights.len();
        self.arr.col1.fill(F::zero());
        self.arr.col2.fill(F::zero());
        self.arr.col1[1] = self.lambda_init;
        self.arr.col2[1 + m] = self.lambda_init;
    }

    /// Advance `(√η, ρ, Λ)` to the current window: assemble the
    /// pre-array from the state and the extended vector
    /// `x̃ = [window; tail]`, rotate, and read the results back.
    fn run_transform(&mut self) -> Result<(), RotationError> {
        let m = self.weights.len();

        self.arr.col0[0] = self.sqrt_eta;
        self.arr.col0[1] = F::zero();
        self.arr.col0[2..m + 2].copy_from_slice(&self.rho);

        // pivot row tail: [u1, u2] = x̃ᵀΛ
        let (a, b) = self.window.as_slices();
        let mut u1 = self.tail * self.arr.col1[1 + m];
        let mut u2 = self.tail * self.arr.col2[1 + m];
        for (i, x) in a.iter().enumerate() {
            u1 = u1 + *x * self.arr.col1[1 + i];
            u2 = u2 + *x * self.arr.col2[1 + i];
        }
        for (j, x) in b.iter().enumerate() {
            u1 = u1 + *x * self.arr.col1[1 + a.len() + j];
            u2 = u2 + *x * self.arr.col2[1 + a.len() + j];
        }
        self.arr.col1[0] = u1;
        self.arr.col2[0] = u2;

        apply_transform(&mut self.arr)?;

        self.sqrt_eta = self.arr.col0[0];
        self.rho.copy_from_slice(&self.arr.col0[1..m + 1]);
        // the transformed column 0 ends in a structural zero
        debug_assert!(
            self.arr.col0[m + 1].abs() <= F::trailing_zero_tol() * F::max(F::one(), self.sqrt_eta),
            "trailing entry {:?} not annihilated",
            self.arr.col0[m + 1]
        );
        Ok(())
    }

    /// Rebuild the rank-2 statistics from scratch by replaying the
    /// retained window over a fresh zero history, keeping the weights.
    fn rebuild(&mut self) -> Result<(), PredictorError> {
        let m = self.weights.len();
        let retained = self.window.to_vec();
        self.sqrt_eta = F::one();
        self.rho.fill(F::zero());
        self.reset_lambda();
        self.window = SlidingWindow::new(m);
        self.tail = F::zero();
        for &s in retained.iter().rev() {
            self.run_transform().map_err(fatal_breakdown)?;
            self.tail = self.window.push(s);
        }
        Ok(())
    }

    pub fn step(&mut self, next_sample: F) -> Result<StepOutcome<F>, PredictorError> {
        let prediction = self.window.dot(&self.weights);
        let error = next_sample - prediction;

        match self.run_transform() {
            Ok(()) => {}
            Err(RotationError::HyperbolicBreakdown { a, b }) => match self.policy {
                BreakdownPolicy::Abort => return Err(PredictorError::HyperbolicBreakdown { a, b }),
                BreakdownPolicy::Rebuild => {
                    self.breakdown_count += 1;
                    self.rebuild()?;
                    self.run_transform().map_err(fatal_breakdown)?;
                }
            },
            // apply_transform substitutes the identity for a degenerate
            // Givens pair and the pivot here is √η ≥ 1
            Err(RotationError::DegeneratePair) => unreachable!(),
        }

        let sign = gradient_sign(error, self.epsilon);
        let updated = sign != F::zero();
        if updated {
            let k = sign * self.inv_step_size / self.sqrt_eta;
            for (w, r) in self.weights.iter_mut().zip(&self.rho) {
                *w = *w + k * *r;
            }
        }

        self.tail = self.window.push(next_sample);
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

    /// Normalization term `η = 1 + xᵀA⁻¹x` of the most recent step.
    pub fn eta(&self) -> F {
        self.sqrt_eta * self.sqrt_eta
    }

    pub fn sqrt_eta(&self) -> F {
        self.sqrt_eta
    }

    /// Normalized Newton direction `A⁻¹x/√η` of the most recent step.
    pub fn rho(&self) -> &[F] {
        &self.rho
    }

    /// Columns of the rank-2 factor `Λ`, each of length `M+1`.
    pub fn lambda(&self) -> (&[F], &[F]) {
        (&self.arr.col1[1..], &self.arr.col2[1..])
    }

    /// The extended vector `x̃` the next transform will consume.
    pub fn extended_values(&self) -> Vec<F> {
        let mut v = self.window.to_vec();
        v.push(self.tail);
        v
    }

    /// Hyperbolic breakdown events recovered from so far.
    pub fn breakdown_count(&self) -> u64 {
        self.breakdown_count
    }

    /// Total scalars held, all buffers included; linear in M by
    /// construction.
    pub fn state_scalars(&self) -> usize {
        self.weights.len()
            + self.rho.len()
            + self.arr.col0.len()
            + self.arr.col1.len()
            + self.arr.col2.len()
            + self.window.len()
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }
}

fn fatal_breakdown(e: RotationError) -> PredictorError {
    match e {
        RotationError::HyperbolicBreakdown { a, b } => PredictorError::HyperbolicBreakdown { a, b },
        RotationError::DegeneratePair => unreachable!(),
    }
}

impl Predictor for FastOns<f64> {
    fn step(&mut self, next_sample: f64) -> Result<StepOutcome, PredictorError> {
        FastOns::step(self, next_sample)
    }

    fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn dim(&self) -> usize {
        self.weights.len()
    }

    fn breakdown_count(&self) -> u64 {
        self.breakdown_count
    }
}
