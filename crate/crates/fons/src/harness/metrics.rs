//! Per-run metric collection.

use serde::Serialize;

use crate::harness::runner::Algorithm;

/// Version tag stamped into every emitted report.
pub const SCHEMA_VERSION: u32 = 1;

/// Decay of the exponentially weighted MSE estimate.
pub const EWMA_LAMBDA: f64 = 0.01;

/// Metrics of one run over a sample stream.
///
/// A run over `n` samples performs `n − 1` recorded steps: the first
/// sample only seeds the window (its trivial zero-window prediction is
/// not counted). `running_mse[k]` is the mean of the squared errors of
/// recorded steps `0..=k`; `ewma_mse` uses decay [`EWMA_LAMBDA`].
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RunMetrics {
    pub schema_version: u32,
    pub algorithm: Algorithm,
    pub dim: usize,
    /// Recorded prediction steps (samples consumed minus one).
    pub steps: usize,
    pub cumulative_abs_loss: f64,
    pub running_mse: Vec<f64>,
    pub ewma_mse: Vec<f64>,
    pub per_step_abs_error: Option<Vec<f64>>,
    /// Wall time around the step loop only; ingestion excluded.
    pub wall_time_ns: u64,
    pub breakdown_count: u64,
}

impl RunMetrics {
    pub fn final_running_mse(&self) -> Option<f64> {
        self.running_mse.last().copied()
    }
}

/// Lockstep comparison of the fast and regular Newton learners on one
/// stream.
///
/// Deviations are maxima of absolute differences over all recorded
/// steps: weight entries, predictions, normalization terms η, and the
/// running-MSE curves. `first_divergence_step` is the first recorded
/// step at which any of them exceeded `tolerance`.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct EquivalenceReport {
    pub schema_version: u32,
    pub dim: usize,
    pub steps: usize,
    pub tolerance: f64,
    pub max_weight_deviation: f64,
    pub max_prediction_deviation: f64,
    pub max_eta_deviation: f64,
    pub max_mse_deviation: f64,
    pub first_divergence_step: Option<usize>,
    pub breakdown_count: u64,
    /// Whether every deviation stayed within `tolerance`.
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_step: Option<Vec<EquivalenceStep>>,
}

impl EquivalenceReport {
    pub fn max_deviation(&self) -> f64 {
        self.max_weight_deviation
            .max(self.max_prediction_deviation)
            .max(self.max_eta_deviation)
            .max(self.max_mse_deviation)
    }
}

/// One step of the per-step deviation trace.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct EquivalenceStep {
    pub step: usize,
    pub weight_deviation: f64,
    pub prediction_deviation: f64,
    pub eta_deviation: f64,
    pub mse_deviation: f64,
}
