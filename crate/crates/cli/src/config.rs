//! Scenario configuration: one JSON document, unknown keys rejected.

use std::path::Path;
use std::sync::Arc;

use ionso_core::analytic::{traj_eq12, traj_eq8, traj_eq8ab, traj_eq9};
use ionso_core::hilbert::{AUX_SPIN, SPIN, X_MODE, Y_MODE};
use ionso_core::{
    build, product, AnalyticParams, Curve, EvolutionConfig, HilbertLayout, ModelSpec, Observer, OperatorMatrix,
    QuantumState, StateSpec,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<LayoutConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evolution: Option<EvolutionConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analytic: Option<AnalyticOverlay>,
    #[serde(default)]
    pub outputs: Outputs,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<Units>,
}

/// Truncation per vibrational mode; `y` is omitted for single-mode models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutConfig {
    pub x: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    pub x: StateSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<StateSpec>,
    pub spin: StateSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aux: Option<StateSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Equation {
    #[serde(rename = "eq8", alias = "8")]
    Eq8,
    #[serde(rename = "eq8ab", alias = "8ab")]
    Eq8ab,
    #[serde(rename = "eq9", alias = "9")]
    Eq9,
    #[serde(rename = "eq12", alias = "12")]
    Eq12,
}

/// Closed-form curve sampled at `tau_k = k tau_max / samples`, `k < samples`.
/// The endpoint is excluded so that a window of whole periods is exactly periodic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticOverlay {
    pub equation: Equation,
    pub params: AnalyticParams,
    pub tau_max: f64,
    pub samples: usize,
}

impl AnalyticOverlay {
    pub fn grid(&self) -> Vec<f64> {
        (0..self.samples).map(|k| self.tau_max * k as f64 / self.samples as f64).collect()
    }

    pub fn generate(&self) -> CliResult<Curve> {
        let tau = self.grid();
        let curve = match self.equation {
            Equation::Eq8 => traj_eq8(&self.params, &tau),
            Equation::Eq8ab => traj_eq8ab(&self.params, &tau),
            Equation::Eq9 => traj_eq9(&self.params, &tau),
            Equation::Eq12 => traj_eq12(&self.params, &tau),
        }?;
        Ok(curve)
    }
}

/// Output file names, relative to the output directory. `None` skips the file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default = "default_csv")]
    pub csv: Option<String>,
    #[serde(default = "default_svg")]
    pub svg: Option<String>,
    #[serde(default = "default_analytic_csv")]
    pub analytic_csv: Option<String>,
    #[serde(default = "default_analytic_svg")]
    pub analytic_svg: Option<String>,
    /// Overrides `evolution.sample_every`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_every: Option<usize>,
}

fn default_csv() -> Option<String> {
    Some("trajectory.csv".into())
}

fn default_svg() -> Option<String> {
    Some("trajectory.svg".into())
}

fn default_analytic_csv() -> Option<String> {
    Some("analytic.csv".into())
}

fn default_analytic_svg() -> Option<String> {
    Some("analytic.svg".into())
}

impl Default for Outputs {
    fn default() -> Self {
        Outputs {
            csv: default_csv(),
            svg: default_svg(),
            analytic_csv: default_analytic_csv(),
            analytic_svg: default_analytic_svg(),
            sample_every: None,
        }
    }
}

/// `eta Omega` in Hz, the scale that turns `tau` frequencies into physical ones.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Units {
    pub eta_omega_hz: f64,
}

/// Everything a numeric run needs, built from a validated config.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub layout: Arc<HilbertLayout>,
    pub hamiltonian: OperatorMatrix,
    pub state: QuantumState,
    pub evolution: EvolutionConfig,
    pub observer: Observer,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::config(if path == "." { "<root>" } else { &path }, e.inner())
        })?;
        config.check()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Structural checks that serde cannot express.
    pub fn check(&self) -> CliResult<()> {
        if self.model.is_none() && self.analytic.is_none() {
            return Err(CliError::config("<root>", "needs a `model`, an `analytic` overlay, or both"));
        }
        if let Some(model) = &self.model {
            let layout = self.layout.as_ref().ok_or_else(|| CliError::config("layout", "required with a model"))?;
            let initial = self.initial.as_ref().ok_or_else(|| CliError::config("initial", "required with a model"))?;
            if self.evolution.is_none() {
                return Err(CliError::config("evolution", "required with a model"));
            }
            let factors = model.required_factors();
            let planar = factors.contains(&Y_MODE);
            match (planar, layout.y, &initial.y) {
                (true, None, _) => return Err(CliError::config("layout.y", "required by a two-mode model")),
                (true, _, None) => return Err(CliError::config("initial.y", "required by a two-mode model")),
                (false, Some(_), _) => return Err(CliError::config("layout.y", "the model has a single mode")),
                (false, _, Some(_)) => return Err(CliError::config("initial.y", "the model has a single mode")),
                _ => {}
            }
            match (factors.contains(&AUX_SPIN), &initial.aux) {
                (true, None) => return Err(CliError::config("initial.aux", "required by a four-level model")),
                (false, Some(_)) => return Err(CliError::config("initial.aux", "the model has no auxiliary spin")),
                _ => {}
            }
        } else {
            for (field, present) in [
                ("layout", self.layout.is_some()),
                ("initial", self.initial.is_some()),
                ("evolution", self.evolution.is_some()),
            ] {
                if present {
                    return Err(CliError::config(field, "has no effect without a model"));
                }
            }
        }
        if let Some(a) = &self.analytic {
            if !(a.tau_max.is_finite() && a.tau_max > 0.0) {
                return Err(CliError::config("analytic.tau_max", "must be positive"));
            }
            if a.samples < 2 {
                return Err(CliError::config("analytic.samples", "must be >= 2"));
            }
        }
        if self.outputs.sample_every == Some(0) {
            return Err(CliError::config("outputs.sample_every", "must be >= 1"));
        }
        if let Some(u) = &self.units {
            if !(u.eta_omega_hz.is_finite() && u.eta_omega_hz > 0.0) {
                return Err(CliError::config("units.eta_omega_hz", "must be positive"));
            }
        }
        Ok(())
    }

    /// Build the layout, Hamiltonian and initial state; `None` for analytic-only configs.
    pub fn prepare(&self) -> CliResult<Option<Prepared>> {
        self.check()?;
        let Some(model) = &self.model else { return Ok(None) };
        let (dims, initial) = (self.layout.as_ref().unwrap(), self.initial.as_ref().unwrap());
        let layout = Arc::new(model.layout(dims.x, dims.y.unwrap_or(0))?);
        let specs: Vec<StateSpec> = layout
            .factors()
            .iter()
            .map(|f| match f.label.as_str() {
                X_MODE => initial.x.clone(),
                Y_MODE => initial.y.clone().unwrap(),
                SPIN => initial.spin.clone(),
                AUX_SPIN => initial.aux.clone().unwrap(),
                other => unreachable!("model layouts have no factor `{other}`"),
            })
            .collect();
        let state = product(&specs, &layout)?;
        let hamiltonian = build(model, &layout)?;
        let mut evolution = self.evolution.clone().unwrap();
        if let Some(n) = self.outputs.sample_every {
            evolution.sample_every = n;
        }
        evolution.validate()?;
        let observer = Observer::new(&layout, &model.bounded_cutoffs())?;
        Ok(Some(Prepared { layout, hamiltonian, state, evolution, observer }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "name": "flat",
        "model": {"kind": "rashba2d", "alpha_x": 0.0, "alpha_y": 0.0},
        "layout": {"x": 4, "y": 4},
        "initial": {"x": {"kind": "fock", "n": 1}, "y": {"kind": "fock", "n": 0},
                    "spin": {"kind": "spinor", "a": 1.0, "b": 0.0, "phi": 0.0}},
        "evolution": {"t_max": 1.0, "dt": 0.01}
    }"#;

    #[test]
    fn minimal_config_prepares() {
        let c = ScenarioConfig::from_json(MINIMAL).unwrap();
        let p = c.prepare().unwrap().unwrap();
        assert_eq!(p.layout.total_dim(), 32);
        assert_eq!(p.evolution.sample_every, 10);
    }

    #[test]
    fn unknown_key_reports_its_path() {
        let text = MINIMAL.replace("\"alpha_y\"", "\"alpha_z\": 1.0, \"alpha_y\"");
        let err = ScenarioConfig::from_json(&text).unwrap_err().to_string();
        assert!(err.contains("model"), "{err}");
        assert!(err.contains("alpha_z"), "{err}");
        let text = MINIMAL.replace("\"dt\": 0.01", "\"dt\": 0.01, \"steps\": 3");
        let err = ScenarioConfig::from_json(&text).unwrap_err().to_string();
        assert!(err.contains("evolution") && err.contains("steps"), "{err}");
    }

    #[test]
    fn structural_errors_name_the_field() {
        let text = MINIMAL.replace("\"x\": 4, \"y\": 4", "\"x\": 4");
        let err = ScenarioConfig::from_json(&text).unwrap_err().to_string();
        assert!(err.contains("layout.y"), "{err}");
        let err = ScenarioConfig::from_json(r#"{"name": "nothing"}"#).unwrap_err().to_string();
        assert!(err.contains("model"), "{err}");
    }

    #[test]
    fn json_round_trip() {
        let c = ScenarioConfig::from_json(MINIMAL).unwrap();
        assert_eq!(ScenarioConfig::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn equation_accepts_bare_numbers() {
        let e: Equation = serde_json::from_str("\"8ab\"").unwrap();
        assert_eq!(e, Equation::Eq8ab);
        let e: Equation = serde_json::from_str("\"eq12\"").unwrap();
        assert_eq!(e, Equation::Eq12);
    }
}
