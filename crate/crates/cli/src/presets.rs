//! Built-in scenarios.
//!
//! | name        | content                                                                   |
//! |-------------|---------------------------------------------------------------------------|
//! | `fig2a`     | closed-form Lissajous curve, `varpi = 1.96`                                |
//! | `fig2b`     | bounded Rashba-Dresselhaus, `N = 1`, unit couplings, `Theta = 1`          |
//! | `fig2c`     | as `fig2b` with `Theta = 1 - i`                                           |
//! | `fig2d`     | as `fig2b` with `N = 2`                                                   |
//! | `fig2e`     | as `fig2d` with `gamma_x / Delta_x = 0.4`                                 |
//! | `fig2f`     | `fig2b` with vibrational damping `zeta = 1e-4` on both modes              |
//! | `zb-rashba` | anisotropic Rashba, Gaussian momentum packet: zitterbewegung along `y`    |
//! | `zb-locked` | `alpha = beta`, spin up: the `x` coordinate locks                         |
//! | `dirac1d`   | one-dimensional Dirac coupling with a Stark gap                            |

use std::f64::consts::{FRAC_PI_2, PI};

use ionso_core::dynamics::Damping;
use ionso_core::{AnalyticParams, BoundedForm, EvolutionConfig, ModelSpec, StateSpec, C64};

use crate::config::{AnalyticOverlay, Equation, InitialConfig, LayoutConfig, Outputs, ScenarioConfig, Units};
use crate::error::{CliError, CliResult};

pub const NAMES: [&str; 9] =
    ["fig2a", "fig2b", "fig2c", "fig2d", "fig2e", "fig2f", "zb-rashba", "zb-locked", "dirac1d"];

/// `varpi` of the Lissajous preset; `varpi : sqrt(varpi) = 7 : 5`.
pub const LISSAJOUS_VARPI: f64 = 1.96;
/// `eta Omega` putting the faster Lissajous frequency at 50 kHz.
pub const LISSAJOUS_ETA_OMEGA_HZ: f64 = 50.0e3 / LISSAJOUS_VARPI;
/// Damping of `fig2f`: `zeta_s = 1e-4 gamma_s / Delta_s` with unit ratios.
pub const FIG2F_ZETA: f64 = 1e-4;

pub fn preset(name: &str) -> CliResult<ScenarioConfig> {
    Ok(match name {
        "fig2a" => lissajous(),
        "fig2b" => bounded("fig2b", 1, 1.0, C64::new(1.0, 0.0), 15),
        "fig2c" => bounded("fig2c", 1, 1.0, C64::new(1.0, -1.0), 18),
        "fig2d" => bounded("fig2d", 2, 1.0, C64::new(1.0, 0.0), 15),
        "fig2e" => bounded("fig2e", 2, 0.4, C64::new(1.0, 0.0), 15),
        "fig2f" => {
            let mut c = bounded("fig2f", 1, 1.0, C64::new(1.0, 0.0), 15);
            let ev = c.evolution.as_mut().unwrap();
            ev.dt = 0.02;
            ev.sample_every = 25;
            ev.dissipation = ["x", "y"].map(|m| Damping { mode: m.into(), rate: FIG2F_ZETA }).to_vec();
            c
        }
        "zb-rashba" => zb_rashba(),
        "zb-locked" => zb_locked(),
        "dirac1d" => dirac1d(),
        other => return Err(CliError::UnknownPreset(other.into())),
    })
}

fn lissajous() -> ScenarioConfig {
    let params = AnalyticParams::lissajous(LISSAJOUS_VARPI);
    // four closure periods, 1024 samples each
    let period = 10.0 * PI / LISSAJOUS_VARPI.sqrt();
    ScenarioConfig {
        name: "fig2a".into(),
        model: None,
        layout: None,
        initial: None,
        evolution: None,
        analytic: Some(AnalyticOverlay { equation: Equation::Eq12, params, tau_max: 4.0 * period, samples: 4096 }),
        outputs: Outputs::default(),
        units: Some(Units { eta_omega_hz: LISSAJOUS_ETA_OMEGA_HZ }),
    }
}

fn up() -> StateSpec {
    StateSpec::Spinor { a: 1.0, b: 0.0, phi: 0.0 }
}

/// Bounded model with unit `y` coupling, both modes in `|Theta>` and spin `|up> - i|down>`.
fn bounded(name: &str, cutoff: usize, beta_x: f64, theta: C64, dim: usize) -> ScenarioConfig {
    let model = ModelSpec::BoundedRashbaDresselhaus {
        cutoff_x: cutoff,
        cutoff_y: cutoff,
        alpha_x: 0.0,
        alpha_y: 0.0,
        beta_x,
        beta_y: 1.0,
        form: BoundedForm::Restricted,
    };
    ScenarioConfig {
        name: name.into(),
        model: Some(model),
        layout: Some(LayoutConfig { x: dim, y: Some(dim) }),
        initial: Some(InitialConfig {
            x: StateSpec::Coherent { theta },
            y: Some(StateSpec::Coherent { theta }),
            spin: StateSpec::Spinor { a: 1.0, b: 1.0, phi: -FRAC_PI_2 },
            aux: None,
        }),
        evolution: Some(EvolutionConfig::new(50.0).with_dt(1e-3).with_sample_every(10)),
        analytic: None,
        outputs: Outputs::default(),
        units: None,
    }
}

fn zb_rashba() -> ScenarioConfig {
    let mut evolution = EvolutionConfig::new(30.0).with_dt(1e-3).with_sample_every(10);
    evolution.tail_exempt = vec!["x".into()];
    ScenarioConfig {
        name: "zb-rashba".into(),
        model: Some(ModelSpec::Rashba2d { alpha_x: 2.0, alpha_y: 0.4, delta_x: 1.0, delta_y: 1.0 }),
        layout: Some(LayoutConfig { x: 61, y: Some(24) }),
        initial: Some(InitialConfig {
            x: StateSpec::GaussianMomentum { p0: 2.0, mu: 0.1 },
            y: Some(StateSpec::Fock { n: 0 }),
            spin: StateSpec::Spinor { a: 0.8, b: 0.6, phi: FRAC_PI_2 },
            aux: None,
        }),
        evolution: Some(evolution),
        analytic: None,
        outputs: Outputs::default(),
        units: None,
    }
}

fn zb_locked() -> ScenarioConfig {
    ScenarioConfig {
        name: "zb-locked".into(),
        model: Some(ModelSpec::RashbaDresselhaus {
            alpha_x: 1.0,
            alpha_y: 1.0,
            beta_x: 1.0,
            beta_y: 1.0,
            delta_x: 1.0,
            delta_y: 1.0,
        }),
        layout: Some(LayoutConfig { x: 20, y: Some(20) }),
        initial: Some(InitialConfig {
            x: StateSpec::Coherent { theta: C64::new(0.0, 1.0) },
            y: Some(StateSpec::Fock { n: 0 }),
            spin: up(),
            aux: None,
        }),
        evolution: Some(EvolutionConfig::new(1.0).with_dt(1e-3).with_sample_every(5)),
        analytic: None,
        outputs: Outputs::default(),
        units: None,
    }
}

fn dirac1d() -> ScenarioConfig {
    ScenarioConfig {
        name: "dirac1d".into(),
        model: Some(ModelSpec::Dirac1d { gamma: 1.0, stark: 1.0, delta_x: 1.0 }),
        // the packet drifts; 60 levels hold it to tau = 10
        layout: Some(LayoutConfig { x: 60, y: None }),
        initial: Some(InitialConfig {
            x: StateSpec::Coherent { theta: C64::new(0.0, 1.0) },
            y: None,
            spin: up(),
            aux: None,
        }),
        evolution: Some(EvolutionConfig::new(10.0).with_dt(1e-3).with_sample_every(10)),
        analytic: None,
        outputs: Outputs::default(),
        units: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_passes_its_own_checks() {
        for name in NAMES {
            let c = preset(name).unwrap();
            assert_eq!(c.name, name);
            c.check().unwrap();
            let back = ScenarioConfig::from_json(&c.to_json()).unwrap();
            assert_eq!(back, c, "{name}");
        }
    }

    #[test]
    fn fig2b_is_unit_coupled_and_fig2d_differs_only_in_cutoff() {
        let b = preset("fig2b").unwrap();
        let Some(ModelSpec::BoundedRashbaDresselhaus { cutoff_x: 1, cutoff_y: 1, beta_x, beta_y, .. }) = b.model else {
            panic!("{:?}", b.model)
        };
        assert_eq!((beta_x, beta_y), (1.0, 1.0));
        let mut d = preset("fig2d").unwrap();
        if let Some(ModelSpec::BoundedRashbaDresselhaus { cutoff_x, cutoff_y, .. }) = &mut d.model {
            (*cutoff_x, *cutoff_y) = (1, 1);
        }
        d.name = "fig2b".into();
        assert_eq!(d, b);
    }

    #[test]
    fn unknown_name_is_an_error() {
        assert!(matches!(preset("fig3"), Err(CliError::UnknownPreset(_))));
    }
}
