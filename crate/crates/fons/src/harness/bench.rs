//! Per-step timing sweeps across window lengths.
//!
//! Methodology: one warm-up run per cell is discarded, then `repeats`
//! timed runs over the same synthetic stream measure the mean per-step
//! wall time with a monotonic clock around the step loop; the cell value
//! is the median across repeats. Cells execute sequentially so timing is
//! never taken under self-inflicted contention.

use std::time::Instant;

use serde::Serialize;

use crate::harness::metrics::SCHEMA_VERSION;
use crate::harness::runner::Algorithm;
use crate::harness::source::{scale_minmax, SynthSpec};
use crate::harness::HarnessError;
use crate::params::HyperParams;
use crate::predictors::{FastOns, Ogd, Ons, Predictor};

/// Default synthetic stream for benchmarks: a stationary AR(5) process
/// scaled to `[-1, 1]`.
pub const BENCH_AR_COEFFS: [f64; 5] = [0.4, 0.2, 0.1, 0.05, 0.05];
pub const BENCH_NOISE_STD: f64 = 0.1;
pub const BENCH_SEED: u64 = 1729;

/// Timing of one `(algorithm, M)` cell.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BenchCell {
    pub algorithm: Algorithm,
    pub dim: usize,
    /// Median across repeats of the per-run mean step time.
    pub time_per_step_ns: f64,
    /// Per-run mean step times, one entry per repeat.
    pub runs_ns: Vec<f64>,
}

/// Fitted log-log scaling exponent of per-step time versus M.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SlopeFit {
    pub algorithm: Algorithm,
    /// Absent when fewer than three dims were measured.
    pub slope: Option<f64>,
}

/// Speedup ratios at one dim, present when the involved algorithms ran.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct GainPoint {
    pub dim: usize,
    /// `time(ons) / time(fast-ons)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regular_over_fast: Option<f64>,
    /// `time(fast-ons) / time(ogd)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fast_over_ogd: Option<f64>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BenchReport {
    pub schema_version: u32,
    pub dims: Vec<usize>,
    pub steps_per_run: usize,
    pub repeats: usize,
    pub cells: Vec<BenchCell>,
    pub scaling_exponents: Vec<SlopeFit>,
    pub relative_gain: Vec<GainPoint>,
}

impl BenchReport {
    pub fn time_per_step(&self, algo: Algorithm, dim: usize) -> Option<f64> {
        self.cells
            .iter()
            .find(|c| c.algorithm == algo && c.dim == dim)
            .map(|c| c.time_per_step_ns)
    }

    pub fn slope(&self, algo: Algorithm) -> Option<f64> {
        self.scaling_exponents
            .iter()
            .find(|s| s.algorithm == algo)
            .and_then(|s| s.slope)
    }
}

/// Time every `(algorithm, dim)` cell over `steps` prediction steps and
/// fit per-algorithm scaling exponents.
///
/// `dims` must be sorted ascending with every entry at least 2; pick
/// `steps` large enough that per-step cost dominates run overhead
/// (`steps · min(dims)` of at least 10⁶ scalar operations is a sound
/// floor).
pub fn bench_sweep(
    dims: &[usize],
    steps: usize,
    repeats: usize,
    algos: &[Algorithm],
) -> Result<BenchReport, HarnessError> {
    if dims.is_empty() {
        return Err(HarnessError::InvalidConfig("no dims to sweep".into()));
    }
    if dims.windows(2).any(|w| w[0] >= w[1]) {
        return Err(HarnessError::InvalidConfig(
            "dims must be strictly ascending".into(),
        ));
    }
    if dims[0] < 2 {
        return Err(HarnessError::InvalidConfig(
            "dims must be at least 2".into(),
        ));
    }
    if repeats == 0 {
        return Err(HarnessError::InvalidConfig(
            "repeats must be positive".into(),
        ));
    }
    if steps == 0 {
        return Err(HarnessError::InvalidConfig("steps must be positive".into()));
    }
    if algos.is_empty() {
        return Err(HarnessError::InvalidConfig("no algorithms selected".into()));
    }

    let samples = bench_stream(steps)?;
    let warmup = (steps / 10).clamp(1, 20_000);

    let mut cells = Vec::with_capacity(dims.len() * algos.len());
    for &dim in dims {
        let params = HyperParams::new(dim, 1.0, 1.0, 1e-8)
            .map_err(|e| HarnessError::InvalidConfig(e.to_string()))?;
        for &algo in algos {
            time_cell(algo, &params, &samples[..warmup])?;
            let mut runs_ns = Vec::with_capacity(repeats);
            for _ in 0..repeats {
                runs_ns.push(time_cell(algo, &params, &samples)?);
            }
            let time_per_step_ns = median(&runs_ns);
            cells.push(BenchCell {
                algorithm: algo,
                dim,
                time_per_step_ns,
                runs_ns,
            });
        }
    }

    let scaling_exponents = algos
        .iter()
        .map(|&algo| SlopeFit {
            algorithm: algo,
            slope: fit_slope(
                &cells
                    .iter()
                    .filter(|c| c.algorithm == algo)
                    .map(|c| (c.dim as f64, c.time_per_step_ns))
                    .collect::<Vec<_>>(),
            ),
        })
        .collect();

    let relative_gain = dims
        .iter()
        .map(|&dim| {
            let t = |algo| {
                cells
                    .iter()
                    .find(|c| c.algorithm == algo && c.dim == dim)
                    .map(|c| c.time_per_step_ns)
            };
            GainPoint {
                dim,
                regular_over_fast: t(Algorithm::Ons)
                    .zip(t(Algorithm::FastOns))
                    .map(|(r, f)| r / f),
                fast_over_ogd: t(Algorithm::FastOns)
                    .zip(t(Algorithm::Ogd))
                    .map(|(f, o)| f / o),
            }
        })
        .collect();

    Ok(BenchReport {
        schema_version: SCHEMA_VERSION,
        dims: dims.to_vec(),
        steps_per_run: steps,
        repeats,
        cells,
        scaling_exponents,
        relative_gain,
    })
}

/// The default benchmark stream: `steps` samples of the AR(5) process.
pub fn bench_stream(steps: usize) -> Result<Vec<f64>, HarnessError> {
    let spec = SynthSpec::new(BENCH_AR_COEFFS.to_vec(), BENCH_NOISE_STD, BENCH_SEED, steps);
    spec.validate()?;
    let raw = crate::harness::source::StreamSource::SyntheticAr(spec).collect()?;
    Ok(scale_minmax(raw)?)
}

/// Mean per-step time of one fresh run, in nanoseconds.
fn time_cell(algo: Algorithm, params: &HyperParams, samples: &[f64]) -> Result<f64, HarnessError> {
    match algo {
        Algorithm::Ogd => time_loop(Ogd::new(params), samples),
        Algorithm::Ons => time_loop(Ons::new(params), samples),
        Algorithm::FastOns => time_loop(FastOns::new(params), samples),
    }
}

fn time_loop<P: Predictor>(mut p: P, samples: &[f64]) -> Result<f64, HarnessError> {
    let start = Instant::now();
    let mut acc = 0.0;
    for (i, &s) in samples.iter().enumerate() {
        acc += p
            .step(s)
            .map_err(|source| HarnessError::Predictor { step: i, source })?
            .error;
    }
    let elapsed = start.elapsed().as_nanos() as f64;
    std::hint::black_box(acc);
    Ok(elapsed / samples.len() as f64)
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("timings are finite"));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Least-squares slope of `ln time` against `ln dim`; `None` below three
/// points.
fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 3 {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_configurations() {
        assert!(bench_sweep(&[], 100, 1, &Algorithm::ALL).is_err());
        assert!(bench_sweep(&[8, 4], 100, 1, &Algorithm::ALL).is_err());
        assert!(bench_sweep(&[1, 4], 100, 1, &Algorithm::ALL).is_err());
        assert!(bench_sweep(&[4, 8], 100, 0, &Algorithm::ALL).is_err());
        assert!(bench_sweep(&[4, 8], 0, 3, &Algorithm::ALL).is_err());
        assert!(bench_sweep(&[4, 8], 100, 1, &[]).is_err());
    }

    #[test]
    fn single_dim_has_no_slope() {
        let report = bench_sweep(&[4], 500, 1, &[Algorithm::FastOns]).unwrap();
        assert_eq!(report.slope(Algorithm::FastOns), None);
        assert_eq!(report.cells.len(), 1);
        assert!(report.cells[0].time_per_step_ns > 0.0);
    }

    #[test]
    fn sweep_produces_cells_slopes_and_gains() {
        let report = bench_sweep(&[4, 8, 16], 2_000, 2, &Algorithm::ALL).unwrap();
        assert_eq!(report.cells.len(), 9);
        assert!(report.slope(Algorithm::Ons).is_some());
        assert_eq!(report.relative_gain.len(), 3);
        for gain in &report.relative_gain {
            assert!(gain.regular_over_fast.unwrap() > 0.0);
            assert!(gain.fast_over_ogd.unwrap() > 0.0);
        }
    }

    #[test]
    fn slope_fit_recovers_known_exponent() {
        // y = 3 x^2 exactly
        let pts: Vec<(f64, f64)> = [4.0, 8.0, 16.0, 32.0]
            .iter()
            .map(|&x| (x, 3.0 * x * x))
            .collect();
        let slope = fit_slope(&pts).unwrap();
        assert!((slope - 2.0).abs() < 1e-12);
        assert_eq!(fit_slope(&pts[..2]), None);
    }

    #[test]
    fn median_of_even_and_odd_counts() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
