//! Sample stream acquisition: CSV columns, 16-bit mono PCM WAV, and
//! synthetic AR processes.

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SourceError {
    #[error("file not found: {0}")]
    FileNotFound(PathBuf),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("row {row}: cannot parse {value:?} as a real number")]
    Parse { row: u64, value: String },
    #[error("column {0:?} not found in CSV header")]
    MissingColumn(String),
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error("degenerate range: all samples equal")]
    DegenerateRange,
    #[error("unstable AR process: spectral radius {spectral_radius:.6} >= 1")]
    UnstableProcess { spectral_radius: f64 },
}

/// Which CSV field holds the samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelector {
    /// Zero-based field index; the file is read without a header row.
    Index(usize),
    /// Header name; the first row is treated as the header.
    Name(String),
}

impl Default for ColumnSelector {
    fn default() -> Self {
        Self::Index(0)
    }
}

/// Synthetic AR(p) process: `x_t = Σ coeffs[i]·x_{t−1−i} + noise`.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub coeffs: Vec<f64>,
    pub noise_std: f64,
    pub seed: u64,
    /// Number of samples to emit.
    pub n: usize,
    /// Optional deterministic prefix emitted verbatim before the
    /// recursion takes over; useful for noise-free impulse responses.
    pub init: Vec<f64>,
}

impl SynthSpec {
    pub fn new(coeffs: Vec<f64>, noise_std: f64, seed: u64, n: usize) -> Self {
        Self {
            coeffs,
            noise_std,
            seed,
            n,
            init: Vec::new(),
        }
    }

    /// Largest companion-matrix eigenvalue magnitude; the process is
    /// stationary only when this is below one.
    pub fn spectral_radius(&self) -> f64 {
        let p = self.coeffs.len();
        if p == 0 {
            return 0.0;
        }
        let companion = nalgebra::DMatrix::from_fn(p, p, |i, j| {
            if i == 0 {
                self.coeffs[j]
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        companion
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn validate(&self) -> Result<(), SourceError> {
        let radius = self.spectral_radius();
        if radius >= 1.0 {
            return Err(SourceError::UnstableProcess {
                spectral_radius: radius,
            });
        }
        Ok(())
    }

    fn generate(&self) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let noise = if self.noise_std > 0.0 {
            Some(Normal::new(0.0, self.noise_std).expect("finite std dev"))
        } else {
            None
        };
        let mut out = Vec::with_capacity(self.n);
        for t in 0..self.n {
            if t < self.init.len() {
                out.push(self.init[t]);
                continue;
            }
            let mut x = noise.as_ref().map_or(0.0, |d| d.sample(&mut rng));
            for (i, c) in self.coeffs.iter().enumerate() {
                if t > i {
                    x += c * out[t - 1 - i];
                }
            }
            out.push(x);
        }
        out
    }
}

/// A finite (or capped) source of real samples.
#[derive(Debug, Clone, PartialEq)]
pub enum StreamSource {
    CsvColumn {
        path: PathBuf,
        column: ColumnSelector,
        cap: Option<usize>,
    },
    Pcm16Mono {
        path: PathBuf,
        cap: Option<usize>,
    },
    SyntheticAr(SynthSpec),
}

impl StreamSource {
    /// Materialize the samples.
    pub fn collect(&self) -> Result<Vec<f64>, SourceError> {
        match self {
            Self::CsvColumn { path, column, cap } => read_csv(path, column, *cap),
            Self::Pcm16Mono { path, cap } => read_pcm16(path, *cap),
            Self::SyntheticAr(spec) => {
                spec.validate()?;
                Ok(spec.generate())
            }
        }
    }
}

/// CSV source reading one real sample per row from the selected column.
pub fn ingest_csv(
    path: impl Into<PathBuf>,
    column: ColumnSelector,
    cap: Option<usize>,
) -> StreamSource {
    StreamSource::CsvColumn {
        path: path.into(),
        column,
        cap,
    }
}

/// Mono 16-bit PCM WAV source; samples are scaled to `[-1, 1]` by
/// dividing by 32768.
pub fn ingest_pcm16(path: impl Into<PathBuf>, cap: Option<usize>) -> StreamSource {
    StreamSource::Pcm16Mono {
        path: path.into(),
        cap,
    }
}

/// Stationary synthetic AR source; rejects unstable coefficient sets.
pub fn synth_ar(
    coeffs: Vec<f64>,
    noise_std: f64,
    seed: u64,
    n: usize,
) -> Result<StreamSource, SourceError> {
    let spec = SynthSpec::new(coeffs, noise_std, seed, n);
    spec.validate()?;
    Ok(StreamSource::SyntheticAr(spec))
}

/// Affine map sending the sample minimum to −1 and the maximum to +1.
/// Two passes over a buffered stream, as the experiments scale offline.
pub fn scale_minmax(samples: Vec<f64>) -> Result<Vec<f64>, SourceError> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &s in &samples {
        lo = lo.min(s);
        hi = hi.max(s);
    }
    // also catches empty and all-NaN streams
    if hi <= lo || !hi.is_finite() || !lo.is_finite() {
        return Err(SourceError::DegenerateRange);
    }
    let span = hi - lo;
    Ok(samples
        .into_iter()
        .map(|s| 2.0 * (s - lo) / span - 1.0)
        .collect())
}

fn open(path: &Path) -> Result<std::fs::File, SourceError> {
    std::fs::File::open(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            SourceError::FileNotFound(path.to_path_buf())
        } else {
            SourceError::Io(e)
        }
    })
}

fn read_csv(
    path: &Path,
    column: &ColumnSelector,
    cap: Option<usize>,
) -> Result<Vec<f64>, SourceError> {
    let file = open(path)?;
    let has_header = matches!(column, ColumnSelector::Name(_));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let index = match column {
        ColumnSelector::Index(i) => *i,
        ColumnSelector::Name(name) => {
            let headers = reader.headers().map_err(csv_io)?;
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| SourceError::MissingColumn(name.clone()))?
        }
    };

    let cap = cap.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    for record in reader.records() {
        if out.len() >= cap {
            break;
        }
        let record = record.map_err(csv_io)?;
        let row = record.position().map_or(0, |p| p.line());
        let field = record.get(index).ok_or_else(|| SourceError::Parse {
            row,
            value: format!("<missing field {index}>"),
        })?;
        if field.is_empty() {
            continue;
        }
        match field.parse::<f64>() {
            Ok(value) if value.is_finite() => out.push(value),
            // In index mode a non-numeric first row is a header; any
            // later non-numeric (or non-finite) row is an error.
            _ if !has_header && row <= 1 && out.is_empty() => continue,
            _ => {
                return Err(SourceError::Parse {
                    row,
                    value: field.to_string(),
                })
            }
        }
    }
    Ok(out)
}

fn csv_io(e: csv::Error) -> SourceError {
    SourceError::Io(std::io::Error::other(e))
}

fn read_pcm16(path: &Path, cap: Option<usize>) -> Result<Vec<f64>, SourceError> {
    // surface a missing file before hound wraps the error
    open(path)?;
    let mut reader =
        hound::WavReader::open(path).map_err(|e| SourceError::UnsupportedFormat(e.to_string()))?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(SourceError::UnsupportedFormat(format!(
            "{} channels, expected mono",
            spec.channels
        )));
    }
    if spec.sample_format != hound::SampleFormat::Int || spec.bits_per_sample != 16 {
        return Err(SourceError::UnsupportedFormat(format!(
            "{:?} {} bits, expected 16-bit integer PCM",
            spec.sample_format, spec.bits_per_sample
        )));
    }
    let cap = cap.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    for sample in reader.samples::<i16>() {
        if out.len() >= cap {
            break;
        }
        let s = sample.map_err(|e| SourceError::UnsupportedFormat(e.to_string()))?;
        out.push(f64::from(s) / 32768.0);
    }
    Ok(out)
}
