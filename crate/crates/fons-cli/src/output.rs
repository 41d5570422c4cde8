//! Report rendering and atomic file output.
//!
//! CSV outputs start with `#`-prefixed comment lines carrying the schema
//! version and run context, followed by a regular header row.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use fons::harness::{BenchReport, EquivalenceReport, RunMetrics};

use crate::CliError;

pub fn json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.into()))?;
    s.push('\n');
    Ok(s)
}

pub fn run_metrics_csv(m: &RunMetrics) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# fons run-metrics schema_version={} algorithm={} dim={} steps={} \
         cumulative_abs_loss={} wall_time_ns={} breakdown_count={}",
        m.schema_version,
        m.algorithm,
        m.dim,
        m.steps,
        m.cumulative_abs_loss,
        m.wall_time_ns,
        m.breakdown_count
    );
    out.push_str("step,abs_error,running_mse,ewma_mse\n");
    let abs = m.per_step_abs_error.as_deref().unwrap_or(&[]);
    for i in 0..m.steps {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            i,
            abs.get(i).copied().unwrap_or(f64::NAN),
            m.running_mse[i],
            m.ewma_mse[i]
        );
    }
    out
}

pub fn equivalence_csv(r: &EquivalenceReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# fons equivalence schema_version={} dim={} steps={} tolerance={} passed={} \
         max_weight_deviation={:e} max_prediction_deviation={:e} max_eta_deviation={:e} \
         max_mse_deviation={:e} breakdown_count={}",
        r.schema_version,
        r.dim,
        r.steps,
        r.tolerance,
        r.passed,
        r.max_weight_deviation,
        r.max_prediction_deviation,
        r.max_eta_deviation,
        r.max_mse_deviation,
        r.breakdown_count
    );
    out.push_str("step,weight_deviation,prediction_deviation,eta_deviation,mse_deviation\n");
    for s in r.per_step.as_deref().unwrap_or(&[]) {
        let _ = writeln!(
            out,
            "{},{:e},{:e},{:e},{:e}",
            s.step, s.weight_deviation, s.prediction_deviation, s.eta_deviation, s.mse_deviation
        );
    }
    out
}

pub fn bench_csv(r: &BenchReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# fons bench schema_version={} steps_per_run={} repeats={}",
        r.schema_version, r.steps_per_run, r.repeats
    );
    for fit in &r.scaling_exponents {
        let _ = writeln!(
            out,
            "# slope {} {}",
            fit.algorithm,
            fit.slope.map_or("absent".into(), |s| format!("{s:.4}"))
        );
    }
    out.push_str("algorithm,dim,time_per_step_ns,regular_over_fast,fast_over_ogd\n");
    for cell in &r.cells {
        let gain = r.relative_gain.iter().find(|g| g.dim == cell.dim);
        let fmt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.4}"));
        let _ = writeln!(
            out,
            "{},{},{:.2},{},{}",
            cell.algorithm,
            cell.dim,
            cell.time_per_step_ns,
            fmt(gain.and_then(|g| g.regular_over_fast)),
            fmt(gain.and_then(|g| g.fast_over_ogd)),
        );
    }
    out
}

pub fn samples_csv(samples: &[f64]) -> String {
    let mut out = String::from("value\n");
    for s in samples {
        let _ = writeln!(out, "{s}");
    }
    out
}

/// Write to stdout, or atomically to a file: the content lands in a
/// temporary sibling first and is renamed into place only when complete,
/// so failures never leave partial output.
pub fn emit(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
            let mut tmp = match dir {
                Some(dir) => tempfile::NamedTempFile::new_in(dir)?,
                None => tempfile::NamedTempFile::new_in(".")?,
            };
            tmp.write_all(content.as_bytes())?;
            tmp.flush()?;
            tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
            // temp files start out 0600; published reports should not
            #[cfg(unix)]
            {
                use std::os::unix::fs::PermissionsExt;
                let _ = std::fs::set_permissions(path, std::fs::Permissions::from_mode(0o644));
            }
            Ok(())
        }
    }
}
