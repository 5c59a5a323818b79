//! Invariant suite behind `ionso validate`.
//!
//! Each check returns a [`Check`]; a check whose computation errors is
//! reported as failed with the error as its detail, never skipped.

use std::fmt;

use ionso_core::analytic::lissajous_period;
use ionso_core::dynamics::{evolve_lindblad, evolve_unitary, Evolution};
use ionso_core::hilbert::{embed, pbar};
use ionso_core::{
    closure_metric, compare, expectation, AnalyticParams, Axis, BoundedForm, EvolutionConfig, FrequencyForm, Method,
    ModelSpec, MomentumMoments, Observable, QuantumState, SpinExpectations, StateSpec,
};

use crate::config::{LayoutConfig, Outputs, Prepared};
use crate::error::{CliError, CliResult};
use crate::presets::{preset, NAMES};
use crate::run::{run, RATIO_MAX_DENOMINATOR};

pub const ORACLE_TOL: f64 = 1e-8;
pub const NORM_TOL: f64 = 1e-9;
pub const ENERGY_TOL: f64 = 1e-8;
pub const MOMENTUM_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-8;
pub const POSITIVITY_TOL: f64 = 1e-6;
pub const LEAKAGE_TOL: f64 = 1e-10;
pub const LOCKING_TOL: f64 = 0.02;
pub const FREQUENCY_TOL: f64 = 0.05;
pub const CLOSURE_TOL: f64 = 1e-9;
pub const RATIO_TOL: f64 = 1e-6;
pub const CONVERGENCE_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }

    fn from_result(name: impl Into<String>, r: CliResult<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Check::new(name, passed, detail),
            Err(e) => Check::new(name, false, format!("error: {e}")),
        }
    }

    /// `value < limit`, formatted.
    fn below(name: impl Into<String>, what: &str, value: f64, limit: f64) -> Self {
        Check::new(name, value < limit, format!("{what} {value:.3e} (limit {limit:.0e})"))
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{mark}  {:<width$}  {}", c.name, c.detail)?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        write!(f, "{} checks, {failed} failed", self.checks.len())
    }
}

#[derive(Clone, Debug, Default)]
pub struct ValidateOptions {
    /// Step size used by the convergence check instead of the default.
    pub dt: Option<f64>,
}

pub fn validate(options: &ValidateOptions) -> ValidationReport {
    let mut checks = vec![hermiticity(), lissajous_closure(), rk4_matches_exact("fig2b")];
    for name in ["fig2b", "fig2c", "fig2d", "fig2e", "fig2f", "zb-rashba"] {
        checks.extend(conservation(name));
    }
    checks.push(lindblad_unitary_limit());
    checks.push(blocking(BoundedForm::Restricted));
    checks.push(blocking(BoundedForm::Literal));
    checks.push(locking());
    checks.push(frequency_arbitration().0);
    checks.push(convergence(options.dt.unwrap_or(1e-3)));
    ValidationReport { checks }
}

fn prepared(name: &str) -> CliResult<Prepared> {
    Ok(preset(name)?.prepare()?.expect("numeric preset"))
}

fn evolve_prepared(p: &Prepared) -> CliResult<Evolution> {
    Ok(ionso_core::evolve(&p.hamiltonian, &p.state, &p.evolution, &p.observer)?)
}

/// Every preset Hamiltonian is Hermitian to 1e-12.
pub fn hermiticity() -> Check {
    Check::from_result(
        "hamiltonians hermitian",
        (|| {
            let mut worst: f64 = 0.0;
            for name in NAMES {
                if let Some(p) = preset(name)?.prepare()? {
                    worst = worst.max(p.hamiltonian.hermiticity_error());
                }
            }
            Ok((worst < 1e-12, format!("max |H - H^dag| {worst:.1e} over presets")))
        })(),
    )
}

/// Values measured on the Lissajous preset.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LissajousMeasurement {
    pub closure: f64,
    pub ratio: f64,
    pub p: u64,
    pub q: u64,
    pub ratio_error: f64,
    pub f1_hz: f64,
    pub f2_hz: f64,
}

pub fn measure_lissajous() -> CliResult<LissajousMeasurement> {
    let mut config = preset("fig2a")?;
    config.outputs = Outputs { csv: None, svg: None, analytic_csv: None, analytic_svg: None, sample_every: None };
    let report = run(&config, &std::env::temp_dir(), true)?;
    let curve = report.curve.expect("analytic preset");
    let varpi = config.analytic.as_ref().unwrap().params.varpi();
    let closure = closure_metric(&curve.tau, &curve.x, &curve.y, lissajous_period(varpi, 5))?;
    let (ratio, p, q, ratio_error) = report.summary.analytic_ratio.ok_or_else(|| {
        CliError::Physics(ionso_core::Error::InsufficientData("no frequency pair in the Lissajous curve".into()))
    })?;
    let (f1_hz, f2_hz) = report.summary.physical_hz.expect("fig2a carries units");
    Ok(LissajousMeasurement { closure, ratio, p, q, ratio_error, f1_hz, f2_hz })
}

pub fn lissajous_closure() -> Check {
    Check::from_result(
        "lissajous closure (fig2a)",
        measure_lissajous().map(|m| {
            let ok = m.closure < CLOSURE_TOL && (m.p, m.q) == (7, 5) && m.ratio_error < RATIO_TOL;
            (
                ok,
                format!(
                    "closure {:.1e}, ratio {:.9} ~ {}:{} (max den {RATIO_MAX_DENOMINATOR})",
                    m.closure, m.ratio, m.p, m.q
                ),
            )
        }),
    )
}

/// Largest deviation over the expectation columns between fixed-step and exact propagation.
pub fn rk4_exact_deviation(name: &str) -> CliResult<f64> {
    let p = prepared(name)?;
    let rk4 = evolve_prepared(&p)?;
    let mut exact_cfg = p.evolution.clone();
    exact_cfg.method = Method::Exact;
    let exact = evolve_unitary(&p.hamiltonian, &p.state, &exact_cfg, &p.observer)?;
    Ok(compare(&rk4.record, &exact.record, &Observable::EXPECTATIONS)?.max_peak())
}

pub fn rk4_matches_exact(name: &str) -> Check {
    Check::from_result(
        format!("rk4 vs exact ({name})"),
        rk4_exact_deviation(name).map(|d| (d < ORACLE_TOL, format!("max deviation {d:.3e} (limit {ORACLE_TOL:.0e})"))),
    )
}

/// Conservation checks appropriate to a preset's dynamics.
pub fn conservation(name: &str) -> Vec<Check> {
    let run = || -> CliResult<(Prepared, Evolution, bool)> {
        let config = preset(name)?;
        let p = config.prepare()?.expect("numeric preset");
        let momentum = config.model.as_ref().is_some_and(ModelSpec::conserves_momentum);
        let e = evolve_prepared(&p)?;
        Ok((p, e, momentum))
    };
    let (p, e, momentum) = match run() {
        Ok(v) => v,
        Err(err) => return vec![Check::new(format!("conservation ({name})"), false, format!("error: {err}"))],
    };
    let r = &e.record;
    let mut checks = Vec::new();
    if p.evolution.is_dissipative() {
        checks.push(Check::below(format!("trace ({name})"), "trace drift", r.drift(Observable::Trace), TRACE_TOL));
        let QuantumState::Density { matrix, .. } = &e.final_state else { unreachable!() };
        let min_eig = ionso_core::states::min_eigenvalue(matrix);
        checks.push(Check::new(
            format!("positivity ({name})"),
            min_eig >= -POSITIVITY_TOL,
            format!("final min eigenvalue {min_eig:.3e}; every sample passed the Cholesky test"),
        ));
    } else {
        checks.push(Check::below(format!("norm ({name})"), "norm drift", r.drift(Observable::Trace), NORM_TOL));
        checks.push(Check::below(format!("energy ({name})"), "relative energy drift", r.energy_drift(), ENERGY_TOL));
    }
    if momentum {
        let (dx, dy) = (r.drift(Observable::Px), r.drift(Observable::Py));
        let d = if dx.is_nan() || dy.is_nan() { f64::NAN } else { dx.max(dy) };
        checks.push(Check::below(format!("momentum ({name})"), "momentum drift", d, MOMENTUM_TOL));
    }
    checks
}

/// A zero damping rate reproduces unitary evolution.
pub fn lindblad_unitary_limit() -> Check {
    Check::from_result(
        "lindblad zeta = 0 vs unitary",
        (|| {
            let mut config = preset("fig2b")?;
            config.layout = Some(LayoutConfig { x: 4, y: Some(4) });
            config.initial.as_mut().unwrap().x = StateSpec::Fock { n: 1 };
            config.initial.as_mut().unwrap().y = Some(StateSpec::Fock { n: 0 });
            config.evolution = Some(EvolutionConfig::new(5.0).with_dt(1e-2));
            let p = config.prepare()?.unwrap();
            let unitary = evolve_unitary(&p.hamiltonian, &p.state, &p.evolution, &p.observer)?;
            let collapse = ionso_core::dynamics::damping_operators(
                &p.layout,
                &["x", "y"].map(|m| ionso_core::Damping { mode: m.into(), rate: 0.0 }),
            )?;
            let lindblad = evolve_lindblad(&p.hamiltonian, &collapse, &p.state, &p.evolution, &p.observer)?;
            let d = compare(&unitary.record, &lindblad.record, &Observable::EXPECTATIONS)?.max_peak();
            Ok((d < ORACLE_TOL, format!("max deviation {d:.3e} (limit {ORACLE_TOL:.0e})")))
        })(),
    )
}

/// Largest population above the cutoff for an `N = 2` model started inside the block.
pub fn blocking_leakage(form: BoundedForm) -> CliResult<f64> {
    let mut config = preset("fig2d")?;
    if let Some(ModelSpec::BoundedRashbaDresselhaus { form: f, .. }) = &mut config.model {
        *f = form;
    }
    config.layout = Some(LayoutConfig { x: 6, y: Some(6) });
    let initial = config.initial.as_mut().unwrap();
    initial.x = StateSpec::Fock { n: 2 };
    initial.y = Some(StateSpec::Fock { n: 1 });
    config.evolution.as_mut().unwrap().dt = 1e-2;
    let p = config.prepare()?.unwrap();
    Ok(evolve_prepared(&p)?.record.max(Observable::Leakage))
}

pub fn blocking(form: BoundedForm) -> Check {
    let name = format!("blocking N = 2 ({})", if form == BoundedForm::Literal { "literal" } else { "restricted" });
    Check::from_result(
        name,
        blocking_leakage(form).map(|l| (l < LEAKAGE_TOL, format!("max leakage {l:.3e} (limit {LEAKAGE_TOL:.0e})"))),
    )
}

/// `(locked drift / oscillation amplitude, analytic kappa_x)` for `zb-locked`.
pub fn locking_measurement() -> CliResult<(f64, f64, f64)> {
    let p = prepared("zb-locked")?;
    let r = evolve_prepared(&p)?.record;
    let drift = r.drift(Observable::X);
    let y = r.series(Observable::Y);
    let amp = if y.iter().any(|v| !v.is_finite()) {
        f64::NAN
    } else {
        (y.iter().copied().fold(f64::NEG_INFINITY, f64::max) - y.iter().copied().fold(f64::INFINITY, f64::min)) / 2.0
    };
    let mut params = AnalyticParams::new(MomentumMoments::default(), SpinExpectations { sx: 0.0, sy: 0.0, sz: 1.0 });
    params.kappa = 1.0;
    Ok((drift, amp, params.kappa_axis(Axis::X)))
}

pub fn locking() -> Check {
    Check::from_result(
        "locking (zb-locked)",
        locking_measurement().map(|(drift, amp, kx)| {
            let ratio = drift / amp;
            (
                ratio < LOCKING_TOL && kx == 0.0,
                format!("x drift / y amplitude {ratio:.3e} (limit {LOCKING_TOL}), kappa_x = {kx}"),
            )
        }),
    )
}

/// Outcome of matching the packet's trembling frequency against the two analytic readings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arbitration {
    pub measured: f64,
    pub momentum: f64,
    pub sqrt_xi: f64,
    pub winner: FrequencyForm,
}

impl Arbitration {
    pub fn relative_error(&self) -> f64 {
        let target = match self.winner {
            FrequencyForm::Momentum => self.momentum,
            FrequencyForm::SqrtXi => self.sqrt_xi,
        };
        (self.measured - target).abs() / target
    }
}

pub fn measure_arbitration() -> CliResult<Arbitration> {
    let p = prepared("zb-rashba")?;
    let r = evolve_prepared(&p)?.record;
    let peak = ionso_core::analysis::record_frequencies(&r, Observable::Y, 1)?
        .into_iter()
        .next()
        .ok_or_else(|| CliError::Physics(ionso_core::Error::InsufficientData("no <y> oscillation".into())))?;
    let second_moment = |label: &str| -> CliResult<f64> {
        let d = p.layout.factor(label)?.dim;
        let pb = pbar(d)?;
        Ok(expectation(&embed(&(&pb * &pb), label, &p.layout)?, &p.state)?.re)
    };
    let px = r.samples[0].px;
    let xi = (second_moment("x")? + second_moment("y")?).sqrt();
    let measured = peak.angular();
    let (momentum, sqrt_xi) = (2.0 * px, 2.0 * xi.sqrt());
    let winner = if (measured - momentum).abs() <= (measured - sqrt_xi).abs() {
        FrequencyForm::Momentum
    } else {
        FrequencyForm::SqrtXi
    };
    Ok(Arbitration { measured, momentum, sqrt_xi, winner })
}

pub fn frequency_arbitration() -> (Check, Option<Arbitration>) {
    match measure_arbitration() {
        Ok(a) => {
            let err = a.relative_error();
            let ok = err < FREQUENCY_TOL && a.winner == FrequencyForm::default();
            let detail = format!(
                "<y> at {:.4} rad/tau; 2<pbar_x> = {:.4}, 2 xi^(1/2) = {:.4}; winner {:?} ({:.2}% off), analytic default {:?}",
                a.measured,
                a.momentum,
                a.sqrt_xi,
                a.winner,
                100.0 * err,
                FrequencyForm::default()
            );
            (Check::new("zitterbewegung frequency (zb-rashba)", ok, detail), Some(a))
        }
        Err(e) => (Check::new("zitterbewegung frequency (zb-rashba)", false, format!("error: {e}")), None),
    }
}

/// Halving the step must not move the `fig2b` trajectory over a short window.
pub fn convergence(dt: f64) -> Check {
    Check::from_result(
        format!("step convergence (dt = {dt})"),
        (|| {
            let config = preset("fig2b")?;
            let base = config.prepare()?.unwrap();
            let cfg = EvolutionConfig::new(5.0).with_dt(dt).with_sample_every(1);
            let coarse = evolve_unitary(&base.hamiltonian, &base.state, &cfg, &base.observer)?;
            let fine_cfg = EvolutionConfig::new(5.0).with_dt(dt / 2.0).with_sample_every(2);
            let fine = evolve_unitary(&base.hamiltonian, &base.state, &fine_cfg, &base.observer)?;
            let d = compare(&coarse.record, &fine.record, &Observable::EXPECTATIONS)?.max_peak();
            Ok((d < CONVERGENCE_TOL, format!("dt vs dt/2 max deviation {d:.3e} (limit {CONVERGENCE_TOL:.0e})")))
        })(),
    )
}
