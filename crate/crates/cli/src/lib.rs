//! Scenario runner for the `ionso` simulator: JSON configs, built-in presets,
//! CSV/SVG artifacts, trajectory analysis and the validation suite.

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod run;
pub mod validate;

use std::fmt::Write as _;
use std::path::Path;

use ionso_core::analysis::record_frequencies;
use ionso_core::{closure_metric, Observable};

pub use config::ScenarioConfig;
pub use error::{CliError, CliResult};
pub use presets::preset;
pub use run::{run, RunReport, Summary};
pub use validate::{validate, ValidateOptions, ValidationReport};

/// Spectral peaks of `<x>` and `<y>` in a trajectory CSV, plus the closure
/// metric of the `(x, y)` path when a candidate period is given.
pub fn analyze(path: &Path, n_peaks: usize, period: Option<f64>) -> CliResult<String> {
    let record = output::read_trajectory(path)?;
    let mut out = String::new();
    writeln!(
        out,
        "{}: {} samples, tau in [{}, {}]",
        path.display(),
        record.len(),
        record.times.first().unwrap_or(&0.0),
        record.times.last().unwrap_or(&0.0)
    )
    .unwrap();
    for o in [Observable::X, Observable::Y] {
        let peaks = record_frequencies(&record, o, n_peaks)?;
        if peaks.is_empty() {
            writeln!(out, "  <{}> no peaks above noise", o.name()).unwrap();
        }
        for (k, p) in peaks.iter().enumerate() {
            writeln!(
                out,
                "  <{}> peak {}: {:.9} cycles/tau = {:.9} rad/tau, amplitude {:.4e}",
                o.name(),
                k + 1,
                p.frequency,
                p.angular(),
                p.amplitude
            )
            .unwrap();
        }
    }
    if let Some(t) = period {
        let c = closure_metric(&record.times, &record.series(Observable::X), &record.series(Observable::Y), t)?;
        writeln!(out, "  closure at T = {t}: {c:.3e}").unwrap();
    }
    Ok(out)
}
