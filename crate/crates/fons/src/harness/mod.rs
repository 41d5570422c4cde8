//! Experiment drivers: data sources, metric collection, lockstep
//! equivalence comparison, and timing sweeps.

mod bench;
mod metrics;
mod runner;
mod source;

pub use bench::{bench_sweep, BenchCell, BenchReport, GainPoint, SlopeFit};
pub use metrics::{EquivalenceReport, EquivalenceStep, RunMetrics, EWMA_LAMBDA, SCHEMA_VERSION};
pub use runner::{
    compare_samples, compare_trajectories, run_samples, run_stream, Algorithm, Precision,
};
pub use source::{
    ingest_csv, ingest_pcm16, scale_minmax, synth_ar, ColumnSelector, SourceError, StreamSource,
    SynthSpec,
};

use thiserror::Error;

use crate::predictors::PredictorError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Source(#[from] SourceError),
    #[error("predictor failed at step {step}: {source}")]
    Predictor { step: usize, source: PredictorError },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
