//! Closed-form mean trajectories `(<xbar>(tau), <ybar>(tau))`.
//!
//! Each generator evaluates its formula as written, with the complementary
//! axis `r` of the chosen axis `s` supplied by [`Axis::other`]. Degenerate
//! parameters (vanishing `xi`, `varkappa` or `<pbar_x>`) are errors, never
//! silently replaced by a limit.
//!
//! The zitterbewegung formula comes in two frequency readings: `2 xi^{1/2}`
//! (the general expression) and `2 <pbar_x>` (its reduced form). Simulation of
//! an anisotropic Rashba packet oscillates at `2 <pbar_x>`, so that is the
//! default [`FrequencyForm`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    #[default]
    X,
    Y,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrequencyForm {
    SqrtXi,
    #[default]
    Momentum,
}

/// First and second momentum moments.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentumMoments {
    pub px: f64,
    pub py: f64,
    pub px2: f64,
    pub py2: f64,
    #[serde(default)]
    pub pxpy: f64,
}

impl MomentumMoments {
    fn first(&self, a: Axis) -> f64 {
        match a {
            Axis::X => self.px,
            Axis::Y => self.py,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinExpectations {
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
}

impl SpinExpectations {
    fn along(&self, a: Axis) -> f64 {
        match a {
            Axis::X => self.sx,
            Axis::Y => self.sy,
        }
    }

    /// Spinor `a|up> + b e^{i phi}|down>` (normalized internally).
    pub fn from_spinor(a: f64, b: f64, phi: f64) -> Self {
        let n = a * a + b * b;
        let (a, b) = (a.abs(), b.abs());
        SpinExpectations { sx: 2.0 * a * b * phi.cos() / n, sy: 2.0 * a * b * phi.sin() / n, sz: (a * a - b * b) / n }
    }
}

fn one() -> f64 {
    1.0
}

/// Inputs of every closed-form generator. Derived quantities (`xi`, `kappa_s`,
/// `varkappa`, `Lambda`, `varpi`) are methods, so they cannot disagree with
/// the primitives they come from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticParams {
    /// Axis `s` of the generator; `r` is the other one.
    #[serde(default)]
    pub axis: Axis,
    /// Anisotropy `delta_x^2 eta_x Omega_x / (delta_y^2 eta_y Omega_y)`.
    #[serde(default = "one")]
    pub epsilon: f64,
    pub moments: MomentumMoments,
    pub spin: SpinExpectations,
    /// `kappa = alpha / beta`.
    #[serde(default = "one")]
    pub kappa: f64,
    /// `gamma_x / gamma_y`; `varpi = (gamma_x / gamma_y) <pbar_y>`.
    #[serde(default = "one")]
    pub gamma_ratio: f64,
    /// Free amplitude `<pbar_s pbar_r^{-1}>` of the `r` motion in the Lissajous form.
    #[serde(default = "one")]
    pub ratio_amplitude: f64,
    #[serde(default)]
    pub x0: f64,
    #[serde(default)]
    pub y0: f64,
    #[serde(default)]
    pub frequency: FrequencyForm,
}

impl AnalyticParams {
    pub fn new(moments: MomentumMoments, spin: SpinExpectations) -> Self {
        AnalyticParams {
            axis: Axis::X,
            epsilon: 1.0,
            moments,
            spin,
            kappa: 1.0,
            gamma_ratio: 1.0,
            ratio_amplitude: 1.0,
            x0: 0.0,
            y0: 0.0,
            frequency: FrequencyForm::default(),
        }
    }

    /// Lissajous parameters with a given `varpi`, `<pbar_y> = 1` and unit amplitudes.
    pub fn lissajous(varpi: f64) -> Self {
        let moments = MomentumMoments { px: 0.0, py: 1.0, px2: 0.0, py2: 1.0, pxpy: 0.0 };
        let mut p = Self::new(moments, SpinExpectations { sx: 0.0, sy: 0.0, sz: 1.0 });
        p.gamma_ratio = varpi;
        p
    }

    pub fn xi(&self) -> f64 {
        (self.moments.px2 + self.moments.py2).sqrt()
    }

    /// `kappa_s = 2 (kappa^2 + (-1)^{1 + delta_sy})`; zero on `x` when `kappa = 1`.
    pub fn kappa_axis(&self, s: Axis) -> f64 {
        let sign = match s {
            Axis::X => -1.0,
            Axis::Y => 1.0,
        };
        2.0 * (self.kappa * self.kappa + sign)
    }

    /// `varkappa = 2 kappa [kappa xi^2 + 2 <pbar_x pbar_y>]`.
    pub fn varkappa(&self) -> f64 {
        let xi = self.xi();
        2.0 * self.kappa * (self.kappa * xi * xi + 2.0 * self.moments.pxpy)
    }

    /// `Lambda = <(kappa pbar_y + pbar_x) sigma_y + (kappa pbar_x + pbar_y) sigma_x>` for a product state.
    pub fn lambda(&self) -> f64 {
        let m = &self.moments;
        (self.kappa * m.py + m.px) * self.spin.sy + (self.kappa * m.px + m.py) * self.spin.sx
    }

    pub fn varpi(&self) -> f64 {
        self.gamma_ratio * self.moments.py
    }

    fn offset(&self, a: Axis) -> f64 {
        match a {
            Axis::X => self.x0,
            Axis::Y => self.y0,
        }
    }

    /// `(-1)^{1 + delta_sx}`: `+1` on `x`, `-1` on `y`.
    fn axis_sign(a: Axis) -> f64 {
        match a {
            Axis::X => 1.0,
            Axis::Y => -1.0,
        }
    }
}

/// Sampled planar curve.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Curve {
    pub tau: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl Curve {
    fn from_axes(tau: &[f64], s: Axis, s_vals: Vec<f64>, r_vals: Vec<f64>) -> Curve {
        let (x, y) = match s {
            Axis::X => (s_vals, r_vals),
            Axis::Y => (r_vals, s_vals),
        };
        Curve { tau: tau.to_vec(), x, y }
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }
}

/// `n` samples spanning `[0, t_max]` inclusive.
pub fn uniform_grid(t_max: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![0.0; n];
    }
    (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect()
}

/// General zitterbewegung mean position.
pub fn traj_eq8(p: &AnalyticParams, tau: &[f64]) -> Result<Curve> {
    let xi = p.xi();
    if !(xi > 0.0) {
        return Err(Error::SingularParameters("xi = 0: the momentum distribution has no second moment".into()));
    }
    let omega = match p.frequency {
        FrequencyForm::SqrtXi => 2.0 * xi.sqrt(),
        FrequencyForm::Momentum => {
            if p.moments.px == 0.0 {
                return Err(Error::SingularParameters("<pbar_x> = 0 leaves the momentum frequency undefined".into()));
            }
            2.0 * p.moments.px
        }
    };
    let eps = p.epsilon;
    let m = &p.moments;
    let spin_mix = p.spin.sx * m.px + eps * p.spin.sy * m.py;
    let component = |s: Axis| -> Vec<f64> {
        let r = s.other();
        let pr = m.first(r);
        let eps_s = if s == Axis::Y { eps } else { 1.0 };
        let drift = AnalyticParams::axis_sign(s) * eps_s * p.spin.along(r);
        let a1 = eps * pr / (2.0 * xi) * p.spin.sz;
        let a2 = eps * pr / (2.0 * xi.powf(1.5)) * spin_mix;
        tau.iter()
            .map(|&t| p.offset(s) + drift * t + a1 * ((omega * t).cos() - 1.0) + a2 * ((omega * t).sin() - omega * t))
            .collect()
    };
    Ok(Curve { tau: tau.to_vec(), x: component(Axis::X), y: component(Axis::Y) })
}

/// Reduced zitterbewegung form for an `x` packet, `y` vacuum and `<sigma_x> = 0`.
///
/// `pbar_x` is the first moment `<pbar_x>`; `pbar_y^2` is the second moment `<pbar_y^2>`.
pub fn traj_eq8ab(p: &AnalyticParams, tau: &[f64]) -> Result<Curve> {
    let px = p.moments.px;
    if px == 0.0 {
        return Err(Error::SingularParameters("<pbar_x> = 0".into()));
    }
    let xi = p.xi();
    if !(xi > 0.0) {
        return Err(Error::SingularParameters("xi = 0".into()));
    }
    let e2py2 = p.epsilon * p.epsilon * p.moments.py2;
    let slope = e2py2 / (2.0 * px * px) - 1.0;
    let amp_x = e2py2 / (2.0 * px.powi(3));
    let amp_y = p.epsilon * px / (2.0 * xi);
    let x = tau.iter().map(|&t| slope * t - amp_x * (2.0 * px * t).sin()).collect();
    let y = tau.iter().map(|&t| amp_y * ((2.0 * px * t).cos() - 1.0)).collect();
    Ok(Curve { tau: tau.to_vec(), x, y })
}

/// Which simplified form applies to the isotropic Rashba-Dresselhaus curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialCase {
    /// `kappa = 1`, spin along `z`: the `s` coordinate is locked.
    Locked,
    /// `kappa = 1`, spin along `s`: uniform motion along `s`.
    Uniform,
}

/// Detect the matched-coupling cases for axis `p.axis`.
pub fn special_case(p: &AnalyticParams) -> Option<SpecialCase> {
    const TOL: f64 = 1e-12;
    if (p.kappa - 1.0).abs() > TOL {
        return None;
    }
    let s = &p.spin;
    if (s.sz.abs() - 1.0).abs() < TOL {
        Some(SpecialCase::Locked)
    } else if (s.along(p.axis).abs() - 1.0).abs() < TOL {
        Some(SpecialCase::Uniform)
    } else {
        None
    }
}

fn require_varkappa(p: &AnalyticParams) -> Result<f64> {
    let vk = p.varkappa();
    if vk == 0.0 || !vk.is_finite() {
        return Err(Error::SingularParameters(format!("varkappa = {vk}")));
    }
    Ok(vk)
}

/// Isotropic Rashba-Dresselhaus mean position.
pub fn traj_eq9(p: &AnalyticParams, tau: &[f64]) -> Result<Curve> {
    let vk = require_varkappa(p)?;
    let lambda = p.lambda();
    let component = |s: Axis| -> Vec<f64> {
        let r = s.other();
        let ks = p.kappa_axis(s);
        let pr = p.moments.first(r);
        let drift = AnalyticParams::axis_sign(s) * (p.spin.along(s) - p.kappa * p.spin.along(r));
        let a1 = ks / (vk * vk) * pr * p.spin.sz;
        let a2 = ks / vk.powi(3) * pr * lambda;
        tau.iter().map(|&t| p.offset(s) + drift * t - a1 * (1.0 - (vk * t).cos()) - a2 * ((vk * t).sin() - t)).collect()
    };
    Ok(Curve { tau: tau.to_vec(), x: component(Axis::X), y: component(Axis::Y) })
}

/// Locked form: `s` frozen (at its offset minus `kappa_s varkappa^-2 <pbar_r>`), `r` harmonic.
pub fn traj_eq10(p: &AnalyticParams, tau: &[f64]) -> Result<Curve> {
    let vk = require_varkappa(p)?;
    let (s, r) = (p.axis, p.axis.other());
    let s_val = p.offset(s) - p.kappa_axis(s) / (vk * vk) * p.moments.first(r);
    let a_r = p.kappa_axis(r) / (vk * vk) * p.moments.first(s);
    let s_vals = vec![s_val; tau.len()];
    let r_vals = tau.iter().map(|&t| p.offset(r) - a_r * (1.0 - (vk * t).cos())).collect();
    Ok(Curve::from_axes(tau, s, s_vals, r_vals))
}

/// Uniform form: drift along `s`, drift plus trembling along `r`.
pub fn traj_eq11(p: &AnalyticParams, tau: &[f64]) -> Result<Curve> {
    let vk = require_varkappa(p)?;
    let (s, r) = (p.axis, p.axis.other());
    let sign = AnalyticParams::axis_sign(s);
    let s_vals = tau.iter().map(|&t| p.offset(s) + sign * p.spin.along(s) * t).collect();
    let a_r = p.kappa_axis(r) / vk.powi(3) * p.moments.first(s) * (p.moments.py + p.moments.px);
    let r_vals = tau.iter().map(|&t| p.offset(r) + sign * t - a_r * ((vk * t).sin() - t)).collect();
    Ok(Curve::from_axes(tau, s, s_vals, r_vals))
}

/// Lissajous curve: `s` at frequency `varpi`, `r` at `sqrt(varpi)`.
pub fn traj_eq12(p: &AnalyticParams, tau: &[f64]) -> Result<Curve> {
    let varpi = p.varpi();
    if !(varpi.is_finite() && varpi > 0.0) {
        return Err(Error::param("varpi", format!("must be positive, got {varpi}")));
    }
    let (s, r) = (p.axis, p.axis.other());
    let pr = p.moments.first(r);
    if pr == 0.0 {
        return Err(Error::SingularParameters("<pbar_r> = 0".into()));
    }
    let w2 = varpi.sqrt();
    let s_vals = tau.iter().map(|&t| p.offset(s) - pr * (1.0 - (varpi * t).cos())).collect();
    let r_vals = tau.iter().map(|&t| p.offset(r) + p.ratio_amplitude * (1.0 - (w2 * t).cos())).collect();
    Ok(Curve::from_axes(tau, s, s_vals, r_vals))
}

/// Closure period `2 pi q / sqrt(varpi)` when `varpi : sqrt(varpi) = p : q`.
pub fn lissajous_period(varpi: f64, q: u64) -> f64 {
    2.0 * std::f64::consts::PI * q as f64 / varpi.sqrt()
}

/// `(eta Omega varpi, eta Omega sqrt(varpi))`, in the units of `eta_omega`.
pub fn physical_frequencies(varpi: f64, eta_omega: f64) -> Result<(f64, f64)> {
    if !(varpi > 0.0 && eta_omega > 0.0) {
        return Err(Error::param("varpi/eta_omega", "must both be positive"));
    }
    Ok((eta_omega * varpi, eta_omega * varpi.sqrt()))
}

/// `hbar * omega` in electron-volts for an angular frequency in rad/s.
///
/// Order-of-magnitude helper for quoting spin-orbit energies.
pub fn energy_ev(angular_frequency: f64) -> f64 {
    const HBAR_EV_S: f64 = 6.582_119_569e-16;
    HBAR_EV_S * angular_frequency
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn packet(px: f64, eps: f64, spin: SpinExpectations) -> AnalyticParams {
        let moments = MomentumMoments { px, py: 0.0, px2: px * px + 0.1, py2: 1.0, pxpy: 0.0 };
        let mut p = AnalyticParams::new(moments, spin);
        p.epsilon = eps;
        p
    }

    #[test]
    fn generators_start_at_offsets() {
        let spin = SpinExpectations::from_spinor(0.8, 0.6, 0.3);
        let mut p = packet(2.0, 1.5, spin);
        p.x0 = 0.4;
        p.y0 = -1.2;
        p.moments.py = 0.7;
        p.moments.pxpy = 0.2;
        p.kappa = 0.6;
        for f in [traj_eq8, traj_eq9, traj_eq12] {
            let c = f(&p, &[0.0]).unwrap();
            assert_eq!((c.x[0], c.y[0]), (0.4, -1.2));
        }
        p.frequency = FrequencyForm::SqrtXi;
        let c = traj_eq8(&p, &[0.0]).unwrap();
        assert_eq!((c.x[0], c.y[0]), (0.4, -1.2));
        let c = traj_eq8ab(&p, &[0.0]).unwrap();
        assert_eq!((c.x[0], c.y[0]), (0.0, 0.0));
    }

    #[test]
    fn eq8_without_spin_is_constant() {
        let mut p = packet(2.0, 1.5, SpinExpectations::default());
        p.x0 = 1.0;
        let c = traj_eq8(&p, &uniform_grid(20.0, 200)).unwrap();
        assert!(c.x.iter().all(|&v| v == 1.0));
        assert!(c.y.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn eq8_degenerate_inputs() {
        let p = AnalyticParams::new(MomentumMoments::default(), SpinExpectations::default());
        assert!(matches!(traj_eq8(&p, &[0.0]), Err(Error::SingularParameters(_))));
        assert!(traj_eq8ab(&p, &[0.0]).is_err());
        assert!(traj_eq9(&p, &[0.0]).is_err());
    }

    #[test]
    fn eq8ab_bounds_and_drift() {
        let spin = SpinExpectations::from_spinor(0.8, 0.6, PI / 2.0);
        let p = packet(1.3, 4.0, spin);
        let tau = uniform_grid(200.0, 20001);
        let c = traj_eq8ab(&p, &tau).unwrap();
        let lo = -p.epsilon * 1.3 / p.xi();
        assert!(c.y.iter().all(|&v| v <= 1e-15 && v >= lo - 1e-15));
        assert!(c.y.iter().any(|&v| (v - lo).abs() < 1e-6));
        // least-squares slope of x over many periods
        let n = tau.len() as f64;
        let (mt, mx) = (tau.iter().sum::<f64>() / n, c.x.iter().sum::<f64>() / n);
        let cov: f64 = tau.iter().zip(&c.x).map(|(t, x)| (t - mt) * (x - mx)).sum();
        let var: f64 = tau.iter().map(|t| (t - mt).powi(2)).sum();
        let expected = p.epsilon.powi(2) * p.moments.py2 / (2.0 * 1.3f64.powi(2)) - 1.0;
        assert!((cov / var - expected).abs() < 1e-3 * expected.abs(), "{} vs {expected}", cov / var);
    }

    /// Golden bound for the reduced form: with the momentum frequency the `y`
    /// residual between the general and reduced forms is exactly
    /// `(1 - <sigma_z>) eps pbar_x / (2 xi) |cos - 1|`, never above
    /// `(1 - <sigma_z>) eps pbar_x / xi`.
    #[test]
    fn reduction_to_reduced_form() {
        for &(px, eps, a) in &[(1.0f64, 3.0, 0.9f64), (2.0, 5.0, 0.8), (0.5, 10.0, 0.99), (1.5, 2.0, 0.6)] {
            let b = (1.0 - a * a).sqrt();
            let spin = SpinExpectations::from_spinor(a, b, PI / 2.0);
            let mut p = packet(px, eps, spin);
            p.moments.py2 = 1.0;
            let tau = uniform_grid(30.0, 3001);
            let general = traj_eq8(&p, &tau).unwrap();
            let reduced = traj_eq8ab(&p, &tau).unwrap();
            let bound = (1.0 - spin.sz) * eps * px / p.xi();
            let resid = general.y.iter().zip(&reduced.y).map(|(g, r)| (g - r).abs()).fold(0.0, f64::max);
            assert!(resid <= bound + 1e-12, "{resid} > {bound}");
            assert!(resid >= 0.5 * bound, "bound should be tight: {resid} vs {bound}");
        }
    }

    #[test]
    fn matched_couplings_lock_x() {
        let mut p = AnalyticParams::new(
            MomentumMoments { px: 2.0, py: 0.0, px2: 5.0, py2: 1.0, pxpy: 0.0 },
            SpinExpectations { sx: 0.0, sy: 0.0, sz: 1.0 },
        );
        p.x0 = 0.3;
        assert_eq!(p.kappa_axis(Axis::X), 0.0);
        assert_eq!(special_case(&p), Some(SpecialCase::Locked));
        let tau = uniform_grid(40.0, 4001);
        let c9 = traj_eq9(&p, &tau).unwrap();
        assert!(c9.x.iter().all(|&v| v == 0.3));
        let c10 = traj_eq10(&p, &tau).unwrap();
        assert!(c10.x.iter().all(|&v| v == 0.3));
        let diff = c9.y.iter().zip(&c10.y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-14);
        assert!(c9.y.iter().any(|v| v.abs() > 0.1));
    }

    #[test]
    fn varkappa_example() {
        let p = AnalyticParams::new(
            MomentumMoments { px: 1.0, py: 0.0, px2: 1.0, py2: 1.0, pxpy: 0.0 },
            SpinExpectations::default(),
        );
        assert!((p.varkappa() - 4.0).abs() < 1e-14);
        assert_eq!(p.kappa_axis(Axis::Y), 4.0);
    }

    #[test]
    fn uniform_case_matches_general_form() {
        let mut p = AnalyticParams::new(
            MomentumMoments { px: 1.2, py: 0.4, px2: 2.0, py2: 1.0, pxpy: 0.3 },
            SpinExpectations { sx: 1.0, sy: 0.0, sz: 0.0 },
        );
        p.y0 = 0.5;
        assert_eq!(special_case(&p), Some(SpecialCase::Uniform));
        let tau = uniform_grid(10.0, 101);
        let a = traj_eq9(&p, &tau).unwrap();
        let b = traj_eq11(&p, &tau).unwrap();
        for i in 0..tau.len() {
            assert!((a.x[i] - b.x[i]).abs() < 1e-12);
            assert!((a.y[i] - b.y[i]).abs() < 1e-12);
        }
        p.kappa = 0.5;
        assert_eq!(special_case(&p), None);
    }

    #[test]
    fn lissajous_values_and_closure() {
        let p = AnalyticParams::lissajous(1.96);
        let t_half = PI / 1.96f64.sqrt();
        assert!((t_half - 2.2440).abs() < 1e-4);
        let c = traj_eq12(&p, &[t_half]).unwrap();
        assert!((c.y[0] - 2.0).abs() < 1e-14);
        let period = lissajous_period(1.96, 5);
        assert!((period - 22.4399).abs() < 1e-4);
        let tau = uniform_grid(period, 500);
        let shifted: Vec<f64> = tau.iter().map(|t| t + period).collect();
        let a = traj_eq12(&p, &tau).unwrap();
        let b = traj_eq12(&p, &shifted).unwrap();
        for i in 0..tau.len() {
            assert!((a.x[i] - b.x[i]).abs() < 1e-12 && (a.y[i] - b.y[i]).abs() < 1e-12);
            assert!((a.x[i] - p.x0).abs() <= 2.0 * p.moments.py.abs() + 1e-15);
        }
        let mut bad = p.clone();
        bad.gamma_ratio = -1.0;
        assert!(traj_eq12(&bad, &tau).is_err());
    }

    #[test]
    fn physical_frequency_examples() {
        let (f1, f2) = physical_frequencies(1.96, 25.5e3).unwrap();
        assert!((f1 - 49.98e3).abs() < 1.0);
        assert!((f2 - 35.7e3).abs() < 1.0);
        let (a, b) = physical_frequencies(1.0, 7.0).unwrap();
        assert_eq!(a, b);
        let (a, b) = physical_frequencies(2.5, 3.3).unwrap();
        assert!((a / b - 2.5f64.sqrt()).abs() < 1e-14);
        assert!(physical_frequencies(0.0, 1.0).is_err());
    }

    #[test]
    fn spinor_expectations() {
        let s = SpinExpectations::from_spinor(1.0, 1.0, PI / 2.0);
        assert!(s.sx.abs() < 1e-15 && (s.sy - 1.0).abs() < 1e-15 && s.sz.abs() < 1e-15);
        assert!(energy_ev(1.0e6) > 6e-10 && energy_ev(1.0e6) < 7e-10);
    }
}
