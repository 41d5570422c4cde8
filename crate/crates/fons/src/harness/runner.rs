//! Stream drivers: single-learner runs and lockstep equivalence
//! comparison.

use std::time::Instant;

use serde::Serialize;

use crate::harness::metrics::{
    EquivalenceReport, EquivalenceStep, RunMetrics, EWMA_LAMBDA, SCHEMA_VERSION,
};
use crate::harness::source::StreamSource;
use crate::harness::HarnessError;
use crate::params::HyperParams;
use crate::predictors::{FastOns, Ogd, Ons, Predictor};
use crate::scalar::Scalar;

/// Learner selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Algorithm {
    #[serde(rename = "ogd")]
    Ogd,
    #[serde(rename = "ons")]
    Ons,
    #[serde(rename = "fast-ons")]
    FastOns,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Ogd, Algorithm::Ons, Algorithm::FastOns];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Ogd => "ogd",
            Algorithm::Ons => "ons",
            Algorithm::FastOns => "fast-ons",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ogd" => Ok(Algorithm::Ogd),
            "ons" => Ok(Algorithm::Ons),
            "fast-ons" | "fast_ons" | "fons" => Ok(Algorithm::FastOns),
            other => Err(format!(
                "unknown algorithm {other:?} (expected ogd, ons or fast-ons)"
            )),
        }
    }
}

/// Floating-point width of the learner state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    F64,
    /// Single precision, for numerical-stability studies only.
    F32,
}

pub(crate) fn build_predictor(algo: Algorithm, params: &HyperParams) -> Box<dyn Predictor> {
    match algo {
        Algorithm::Ogd => Box::new(Ogd::new(params)),
        Algorithm::Ons => Box::new(Ons::new(params)),
        Algorithm::FastOns => Box::new(FastOns::new(params)),
    }
}

/// Drive one learner over a source, collecting [`RunMetrics`].
pub fn run_stream(
    algo: Algorithm,
    params: &HyperParams,
    source: &StreamSource,
) -> Result<RunMetrics, HarnessError> {
    let samples = source.collect()?;
    run_samples(algo, params, &samples, true)
}

/// Drive one learner over materialized samples. The first sample only
/// seeds the window; every later sample is predicted from the window
/// ending just before it, so `n` samples produce `n − 1` recorded steps.
pub fn run_samples(
    algo: Algorithm,
    params: &HyperParams,
    samples: &[f64],
    record_per_step: bool,
) -> Result<RunMetrics, HarnessError> {
    let mut predictor = build_predictor(algo, params);
    let steps = samples.len().saturating_sub(1);
    let mut abs_errors = record_per_step.then(|| Vec::with_capacity(steps));
    let mut running_mse = Vec::with_capacity(steps);
    let mut ewma_mse = Vec::with_capacity(steps);
    let mut cumulative_abs_loss = 0.0;
    let mut sum_sq = 0.0;
    let mut ewma = 0.0;

    let start = Instant::now();
    for (i, &s) in samples.iter().enumerate() {
        let out = predictor
            .step(s)
            .map_err(|source| HarnessError::Predictor { step: i, source })?;
        if i == 0 {
            continue;
        }
        let abs_err = out.error.abs();
        cumulative_abs_loss += abs_err;
        sum_sq += out.error * out.error;
        running_mse.push(sum_sq / i as f64);
        ewma = if i == 1 {
            out.error * out.error
        } else {
            (1.0 - EWMA_LAMBDA) * ewma + EWMA_LAMBDA * out.error * out.error
        };
        ewma_mse.push(ewma);
        if let Some(v) = abs_errors.as_mut() {
            v.push(abs_err);
        }
    }
    let wall_time_ns = start.elapsed().as_nanos() as u64;

    Ok(RunMetrics {
        schema_version: SCHEMA_VERSION,
        algorithm: algo,
        dim: params.dim(),
        steps,
        cumulative_abs_loss,
        running_mse,
        ewma_mse,
        per_step_abs_error: abs_errors,
        wall_time_ns,
        breakdown_count: predictor.breakdown_count(),
    })
}

/// Run the fast and regular Newton learners in lockstep on one source and
/// report their worst-case deviations.
pub fn compare_trajectories(
    params: &HyperParams,
    source: &StreamSource,
    tolerance: f64,
) -> Result<EquivalenceReport, HarnessError> {
    let samples = source.collect()?;
    compare_samples(params, &samples, tolerance, Precision::F64, false)
}

/// Lockstep comparison over materialized samples, with a precision
/// switch and optional per-step deviation trace.
pub fn compare_samples(
    params: &HyperParams,
    samples: &[f64],
    tolerance: f64,
    precision: Precision,
    record_per_step: bool,
) -> Result<EquivalenceReport, HarnessError> {
    match precision {
        Precision::F64 => compare_generic::<f64>(params, samples, tolerance, record_per_step),
        Precision::F32 => compare_generic::<f32>(params, samples, tolerance, record_per_step),
    }
}

fn compare_generic<F: Scalar>(
    params: &HyperParams,
    samples: &[f64],
    tolerance: f64,
    record_per_step: bool,
) -> Result<EquivalenceReport, HarnessError> {
    let mut fast: FastOns<F> = FastOns::new(params);
    let mut ons: Ons<F> = Ons::new(params);
    let steps = samples.len().saturating_sub(1);
    let mut per_step = record_per_step.then(|| Vec::with_capacity(steps));

    let mut max_weight = 0.0f64;
    let mut max_prediction = 0.0f64;
    let mut max_eta = 0.0f64;
    let mut max_mse = 0.0f64;
    let mut first_divergence = None;
    let mut sum_sq_fast = 0.0f64;
    let mut sum_sq_ons = 0.0f64;

    for (i, &s) in samples.iter().enumerate() {
        let sf = F::from_f64(s);
        let out_fast = fast
            .step(sf)
            .map_err(|source| HarnessError::Predictor { step: i, source })?;
        let out_ons = ons
            .step(sf)
            .map_err(|source| HarnessError::Predictor { step: i, source })?;
        if i == 0 {
            continue;
        }
        let step = i - 1;

        let mut weight_dev = 0.0f64;
        for (a, b) in fast.weights().iter().zip(ons.weights()) {
            weight_dev = weight_dev.max((*a - *b).abs().to_f64());
        }
        let prediction_dev = (out_fast.prediction - out_ons.prediction).abs().to_f64();
        let eta_dev = (fast.eta() - ons.eta()).abs().to_f64();
        let ef = out_fast.error.to_f64();
        let er = out_ons.error.to_f64();
        sum_sq_fast += ef * ef;
        sum_sq_ons += er * er;
        let mse_dev = ((sum_sq_fast - sum_sq_ons) / i as f64).abs();

        max_weight = max_weight.max(weight_dev);
        max_prediction = max_prediction.max(prediction_dev);
        max_eta = max_eta.max(eta_dev);
        max_mse = max_mse.max(mse_dev);
        if first_divergence.is_none()
            && weight_dev.max(prediction_dev).max(eta_dev).max(mse_dev) > tolerance
        {
            first_divergence = Some(step);
        }
        if let Some(v) = per_step.as_mut() {
            v.push(EquivalenceStep {
                step,
                weight_deviation: weight_dev,
                prediction_deviation: prediction_dev,
                eta_deviation: eta_dev,
                mse_deviation: mse_dev,
            });
        }
    }

    let mut report = EquivalenceReport {
        schema_version: SCHEMA_VERSION,
        dim: params.dim(),
        steps,
        tolerance,
        max_weight_deviation: max_weight,
        max_prediction_deviation: max_prediction,
        max_eta_deviation: max_eta,
        max_mse_deviation: max_mse,
        first_divergence_step: first_divergence,
        breakdown_count: fast.breakdown_count(),
        passed: false,
        per_step,
    };
    report.passed = report.max_deviation() <= tolerance;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::source::{synth_ar, StreamSource, SynthSpec};

    #[test]
    fn algorithm_names_round_trip() {
        for algo in Algorithm::ALL {
            assert_eq!(algo.name().parse::<Algorithm>().unwrap(), algo);
        }
        assert!("newton".parse::<Algorithm>().is_err());
    }

    #[test]
    fn zero_stream_has_zero_error_every_step() {
        let params = HyperParams::with_dim(4).unwrap();
        let samples = vec![0.0; 50];
        for algo in Algorithm::ALL {
            let m = run_samples(algo, &params, &samples, true).unwrap();
            assert_eq!(m.steps, 49);
            assert_eq!(m.cumulative_abs_loss, 0.0);
            assert!(m.running_mse.iter().all(|&v| v == 0.0));
            assert!(m.per_step_abs_error.unwrap().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn empty_and_singleton_streams_run_zero_steps() {
        let params = HyperParams::with_dim(2).unwrap();
        for samples in [vec![], vec![1.0]] {
            let m = run_samples(Algorithm::FastOns, &params, &samples, true).unwrap();
            assert_eq!(m.steps, 0);
            assert!(m.running_mse.is_empty());
        }
    }

    #[test]
    fn noise_free_ar1_is_learned_to_high_accuracy() {
        // x_t = 0.8 x_{t-1} from a unit impulse: perfectly predictable
        // with any window containing the previous sample. The running
        // mean is dominated by the unavoidable first errors and decays
        // like 1/t afterwards.
        let mut spec = SynthSpec::new(vec![0.8], 0.0, 0, 20_000);
        spec.init = vec![1.0];
        let source = StreamSource::SyntheticAr(spec);
        let params = HyperParams::new(1, 1.0, 1.0, 1e-12).unwrap();
        let m = run_stream(Algorithm::FastOns, &params, &source).unwrap();
        assert!(
            m.final_running_mse().unwrap() < 1e-4,
            "final mse {:?}",
            m.final_running_mse()
        );
    }

    #[test]
    fn runs_are_deterministic_modulo_wall_time() {
        let source = synth_ar(vec![0.5, 0.2], 0.1, 9, 300).unwrap();
        let params = HyperParams::with_dim(4).unwrap();
        let mut a = run_stream(Algorithm::Ons, &params, &source).unwrap();
        let mut b = run_stream(Algorithm::Ons, &params, &source).unwrap();
        a.wall_time_ns = 0;
        b.wall_time_ns = 0;
        assert_eq!(a, b);
    }

    #[test]
    fn lockstep_comparison_on_zero_stream_is_exact() {
        let params = HyperParams::with_dim(3).unwrap();
        let samples = vec![0.0; 100];
        let r = compare_samples(&params, &samples, 0.0, Precision::F64, false).unwrap();
        assert_eq!(r.max_deviation(), 0.0);
        assert!(r.passed);
        assert_eq!(r.first_divergence_step, None);
    }

    #[test]
    fn lockstep_comparison_stays_tight_on_noise() {
        let source = synth_ar(vec![0.4, 0.2], 0.3, 3, 1000).unwrap();
        let samples = source.collect().unwrap();
        let params = HyperParams::with_dim(8).unwrap();
        let r = compare_samples(&params, &samples, 1e-9, Precision::F64, true).unwrap();
        assert!(r.passed, "max deviation {}", r.max_deviation());
        assert_eq!(r.steps, 999);
        assert_eq!(r.per_step.as_ref().unwrap().len(), 999);
    }

    #[test]
    fn mse_curves_agree_on_a_long_random_walk() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(64);
        let mut level = 0.0f64;
        let walk: Vec<f64> = (0..50_000)
            .map(|_| {
                level += rng.random_range(-0.01..0.01);
                level
            })
            .collect();
        let samples = crate::harness::source::scale_minmax(walk).unwrap();
        let params = HyperParams::new(64, 1.0, 1.0, 1e-8).unwrap();
        let r = compare_samples(&params, &samples, 1e-6, Precision::F64, false).unwrap();
        assert!(r.passed, "max deviation {}", r.max_deviation());
        assert!(r.max_mse_deviation <= 1e-6);
    }

    #[test]
    fn f32_precision_switch_runs() {
        let source = synth_ar(vec![0.4], 0.3, 5, 500).unwrap();
        let samples = source.collect().unwrap();
        let params = HyperParams::with_dim(4).unwrap();
        let r = compare_samples(&params, &samples, 1e-2, Precision::F32, false).unwrap();
        assert!(r.passed, "f32 max deviation {}", r.max_deviation());
        // f32 runs genuinely in single precision: round-off is visible
        assert!(r.max_deviation() > 1e-9);
    }
}
