use std::fmt;
use std::path::{Path, PathBuf};

use ionso_core::analysis::record_frequencies;
use ionso_core::analytic::physical_frequencies;
use ionso_core::states::min_eigenvalue;
use ionso_core::{
    dominant_frequencies, evolve, rationalize, Curve, Observable, QuantumState, SpectrumPeak, TrajectoryRecord,
};

use crate::config::ScenarioConfig;
use crate::error::{CliError, CliResult};
use crate::output::{curve_csv, polyline_svg, trajectory_csv, write_file};

/// Largest denominator tried when naming a frequency ratio.
pub const RATIO_MAX_DENOMINATOR: u64 = 20;

/// Diagnostics printed after a run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Summary {
    pub name: String,
    pub samples: usize,
    pub final_trace: Option<f64>,
    pub trace_drift: Option<f64>,
    pub energy_drift: Option<f64>,
    pub max_leakage: Option<f64>,
    pub min_eigenvalue: Option<f64>,
    pub peaks_x: Vec<SpectrumPeak>,
    pub peaks_y: Vec<SpectrumPeak>,
    pub analytic_peaks_x: Vec<SpectrumPeak>,
    pub analytic_peaks_y: Vec<SpectrumPeak>,
    /// `(f_x / f_y, p, q, |ratio - p/q|)` of the analytic curve.
    pub analytic_ratio: Option<(f64, u64, u64, f64)>,
    /// Physical frequencies in Hz of the two analytic components.
    pub physical_hz: Option<(f64, f64)>,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub record: Option<TrajectoryRecord>,
    pub final_state: Option<QuantumState>,
    pub curve: Option<Curve>,
    pub files: Vec<PathBuf>,
    pub summary: Summary,
}

fn top_peak(times: &[f64], signal: &[f64]) -> Vec<SpectrumPeak> {
    dominant_frequencies(times, signal, 3).unwrap_or_default()
}

/// Run a scenario and write its artifacts into `out_dir` (created if missing).
///
/// Every computation is sequential, so identical configs give byte-identical
/// files on one platform; `deterministic` is accepted for interface
/// compatibility and changes nothing.
pub fn run(config: &ScenarioConfig, out_dir: &Path, _deterministic: bool) -> CliResult<RunReport> {
    let prepared = config.prepare()?;
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let mut summary = Summary { name: config.name.clone(), ..Summary::default() };
    let mut files = Vec::new();
    let mut emit = |name: &Option<String>, contents: &dyn Fn() -> String| -> CliResult<()> {
        if let Some(name) = name {
            let path = out_dir.join(name);
            write_file(&path, &contents())?;
            files.push(path);
        }
        Ok(())
    };

    let (mut record, mut final_state) = (None, None);
    if let Some(p) = prepared {
        let evolution = evolve(&p.hamiltonian, &p.state, &p.evolution, &p.observer)?;
        let r = evolution.record;
        summary.samples = r.len();
        summary.final_trace = r.samples.last().map(|s| s.trace);
        summary.trace_drift = Some(r.drift(Observable::Trace));
        summary.energy_drift = Some(r.energy_drift());
        summary.max_leakage = Some(r.max(Observable::Leakage));
        if let QuantumState::Density { matrix, .. } = &evolution.final_state {
            summary.min_eigenvalue = Some(min_eigenvalue(matrix));
        }
        summary.peaks_x = record_frequencies(&r, Observable::X, 3).unwrap_or_default();
        summary.peaks_y = record_frequencies(&r, Observable::Y, 3).unwrap_or_default();
        emit(&config.outputs.csv, &|| trajectory_csv(&r))?;
        emit(&config.outputs.svg, &|| polyline_svg(&r.series(Observable::X), &r.series(Observable::Y)))?;
        record = Some(r);
        final_state = Some(evolution.final_state);
    }

    let mut curve = None;
    if let Some(overlay) = &config.analytic {
        let c = overlay.generate()?;
        summary.analytic_peaks_x = top_peak(&c.tau, &c.x);
        summary.analytic_peaks_y = top_peak(&c.tau, &c.y);
        if let (Some(fx), Some(fy)) = (summary.analytic_peaks_x.first(), summary.analytic_peaks_y.first()) {
            let ratio = fx.frequency / fy.frequency;
            let (p, q, err) = rationalize(ratio, RATIO_MAX_DENOMINATOR)?;
            summary.analytic_ratio = Some((ratio, p, q, err));
        }
        if let Some(units) = &config.units {
            summary.physical_hz = Some(physical_frequencies(overlay.params.varpi(), units.eta_omega_hz)?);
        }
        emit(&config.outputs.analytic_csv, &|| curve_csv(&c))?;
        emit(&config.outputs.analytic_svg, &|| polyline_svg(&c.x, &c.y))?;
        curve = Some(c);
    }
    Ok(RunReport { record, final_state, curve, files, summary })
}

fn peaks(f: &mut fmt::Formatter<'_>, label: &str, peaks: &[SpectrumPeak]) -> fmt::Result {
    if peaks.is_empty() {
        return writeln!(f, "  {label:<22} none above noise");
    }
    let list: Vec<String> =
        peaks.iter().map(|p| format!("{:.6} rad/tau (amp {:.3e})", p.angular(), p.amplitude)).collect();
    writeln!(f, "  {label:<22} {}", list.join(", "))
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {}", self.name)?;
        if self.samples > 0 {
            writeln!(f, "  {:<22} {}", "samples", self.samples)?;
        }
        let scalar = |f: &mut fmt::Formatter<'_>, label: &str, v: Option<f64>| match v {
            Some(v) => writeln!(f, "  {label:<22} {v:.3e}"),
            None => Ok(()),
        };
        scalar(f, "final trace", self.final_trace)?;
        scalar(f, "trace drift", self.trace_drift)?;
        scalar(f, "energy drift (rel)", self.energy_drift)?;
        scalar(f, "max leakage", self.max_leakage)?;
        scalar(f, "min eigenvalue", self.min_eigenvalue)?;
        if self.samples > 0 {
            peaks(f, "frequencies <x>", &self.peaks_x)?;
            peaks(f, "frequencies <y>", &self.peaks_y)?;
        }
        if !self.analytic_peaks_x.is_empty() || !self.analytic_peaks_y.is_empty() {
            peaks(f, "analytic x", &self.analytic_peaks_x)?;
            peaks(f, "analytic y", &self.analytic_peaks_y)?;
        }
        if let Some((ratio, p, q, err)) = self.analytic_ratio {
            writeln!(f, "  {:<22} {ratio:.9} ~ {p}:{q} (error {err:.2e})", "frequency ratio")?;
        }
        if let Some((f1, f2)) = self.physical_hz {
            writeln!(f, "  {:<22} {:.3} kHz, {:.3} kHz", "physical frequencies", f1 / 1e3, f2 / 1e3)?;
        }
        Ok(())
    }
}
