//! Hamiltonian builders for the spin-orbit families a trapped ion can emulate.
//!
//! All builders work in dimensionless operators. A continuum coupling `alpha`
//! multiplies the physical momentum `p = pbar / (2 delta)`, so the coefficient
//! that actually lands on `pbar` is `alpha / (2 delta)`. Energies are in units
//! of `eta * Omega`, which makes the evolution time the dimensionless `tau`.
//!
//! Sign and axis conventions, each taken literally from the form it names:
//!
//! | model | Hamiltonian |
//! |---|---|
//! | `Rashba2d` | `alpha_x p_x sigma_y - alpha_y p_y sigma_x` |
//! | `Dresselhaus2d` | `beta_x p_x sigma_x - beta_y p_y sigma_y` |
//! | `RashbaDresselhaus` | `alpha_x sigma_x p_y - alpha_y sigma_y p_x + beta_x sigma_x p_x + beta_y sigma_y p_y` |
//! | `Rashba1dGap` | `gamma p_x sigma_y + stark sigma_z` |
//! | `Dirac1d` | `gamma p_x sigma_x + stark sigma_z` |
//! | `FourLevelRashba` | `sigma~_x (x) Gamma (p_x sigma_y - p_y sigma_x)` |
//! | `BoundedJc` | `chi A sigma_k + chi^* A^dag sigma_-k` |
//! | `BoundedRashbaDresselhaus` | `alpha_x p_x^ub sigma_y - alpha_y p_y^ub sigma_x + beta_x p_x^ub sigma_x - beta_y p_y^ub sigma_y` |
//!
//! Note that the combined form swaps which momentum pairs with which Pauli
//! matrix relative to `Rashba2d`; both are kept as written.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{
    accumulate_product, bounded_a_for_cutoff, ladder, pauli, pbar, pbar_bounded, FactorKind, HilbertLayout,
    OperatorMatrix, PauliAxis, AUX_SPIN, SPIN, X_MODE, Y_MODE,
};

const I: C64 = C64 { re: 0.0, im: 1.0 };

fn one() -> f64 {
    1.0
}

fn plus_one() -> i8 {
    1
}

/// How a bounded model treats Fock levels above its cutoff.
///
/// `Restricted` projects the Hamiltonian onto the bounded block
/// (`P H P` with `P` the projector on levels `0..=N` of every bounded mode),
/// so components outside the block are frozen. `Literal` keeps
/// `A(eta) = [1 - eta^2 n/2] a` on the whole truncated space; above the cutoff
/// its matrix elements grow like `n^{3/2}`, which pushes any population there
/// into the truncation edge within a few time units.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundedForm {
    #[default]
    Restricted,
    Literal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    /// Two sideband pairs driving `sigma_+`; rates are already in `tau` units.
    Laser { omega_x: f64, omega_y: f64, eta_x: f64, eta_y: f64, phases: [f64; 4] },
    Rashba2d {
        alpha_x: f64,
        alpha_y: f64,
        #[serde(default = "one")]
        delta_x: f64,
        #[serde(default = "one")]
        delta_y: f64,
    },
    Dresselhaus2d {
        beta_x: f64,
        beta_y: f64,
        #[serde(default = "one")]
        delta_x: f64,
        #[serde(default = "one")]
        delta_y: f64,
    },
    RashbaDresselhaus {
        alpha_x: f64,
        alpha_y: f64,
        beta_x: f64,
        beta_y: f64,
        #[serde(default = "one")]
        delta_x: f64,
        #[serde(default = "one")]
        delta_y: f64,
    },
    Rashba1dGap {
        gamma: f64,
        stark: f64,
        #[serde(default = "one")]
        delta_x: f64,
    },
    Dirac1d {
        gamma: f64,
        stark: f64,
        #[serde(default = "one")]
        delta_x: f64,
    },
    FourLevelRashba {
        gamma: f64,
        #[serde(default = "one")]
        delta: f64,
    },
    /// Bounded Jaynes-Cummings-type coupling on the `x` mode.
    ///
    /// `effective`, when set, replaces `|chi(eta)|`; it is required for `N = 1`
    /// where `chi(eta)` vanishes identically.
    BoundedJc {
        cutoff: usize,
        omega: f64,
        #[serde(default)]
        phi: f64,
        #[serde(default = "plus_one")]
        k: i8,
        #[serde(default)]
        effective: Option<f64>,
        #[serde(default)]
        form: BoundedForm,
    },
    /// Bounded Rashba-Dresselhaus model; couplings are the effective ratios
    /// `gamma_s / delta_s`, so each multiplies `pbar^ub / 2`.
    BoundedRashbaDresselhaus {
        cutoff_x: usize,
        cutoff_y: usize,
        alpha_x: f64,
        alpha_y: f64,
        beta_x: f64,
        beta_y: f64,
        #[serde(default)]
        form: BoundedForm,
    },
}

impl ModelSpec {
    /// Factor labels the model acts on.
    pub fn required_factors(&self) -> &'static [&'static str] {
        match self {
            ModelSpec::Rashba1dGap { .. } | ModelSpec::Dirac1d { .. } | ModelSpec::BoundedJc { .. } => &[X_MODE, SPIN],
            ModelSpec::FourLevelRashba { .. } => &[X_MODE, Y_MODE, SPIN, AUX_SPIN],
            _ => &[X_MODE, Y_MODE, SPIN],
        }
    }

    /// Smallest layout the model fits on, given per-mode truncations.
    pub fn layout(&self, x_dim: usize, y_dim: usize) -> Result<HilbertLayout> {
        match self.required_factors().len() {
            2 => HilbertLayout::line(x_dim),
            4 => HilbertLayout::planar_four_level(x_dim, y_dim),
            _ => HilbertLayout::planar(x_dim, y_dim),
        }
    }

    /// `(mode label, N)` for every bounded mode.
    pub fn bounded_cutoffs(&self) -> Vec<(String, usize)> {
        match self {
            ModelSpec::BoundedJc { cutoff, .. } => vec![(X_MODE.into(), *cutoff)],
            ModelSpec::BoundedRashbaDresselhaus { cutoff_x, cutoff_y, .. } => {
                vec![(X_MODE.into(), *cutoff_x), (Y_MODE.into(), *cutoff_y)]
            }
            _ => Vec::new(),
        }
    }

    /// True for models that are polynomials in the momenta (and so conserve them).
    pub fn conserves_momentum(&self) -> bool {
        matches!(
            self,
            ModelSpec::Rashba2d { .. }
                | ModelSpec::Dresselhaus2d { .. }
                | ModelSpec::RashbaDresselhaus { .. }
                | ModelSpec::FourLevelRashba { .. }
        )
    }

    fn check_finite(&self) -> Result<()> {
        let values: Vec<(&'static str, f64)> = match self {
            ModelSpec::Laser { omega_x, omega_y, eta_x, eta_y, phases } => {
                let mut v = vec![("omega_x", *omega_x), ("omega_y", *omega_y), ("eta_x", *eta_x), ("eta_y", *eta_y)];
                v.extend(phases.iter().map(|p| ("phases", *p)));
                v
            }
            ModelSpec::Rashba2d { alpha_x, alpha_y, .. } => vec![("alpha_x", *alpha_x), ("alpha_y", *alpha_y)],
            ModelSpec::Dresselhaus2d { beta_x, beta_y, .. } => vec![("beta_x", *beta_x), ("beta_y", *beta_y)],
            ModelSpec::RashbaDresselhaus { alpha_x, alpha_y, beta_x, beta_y, .. }
            | ModelSpec::BoundedRashbaDresselhaus { alpha_x, alpha_y, beta_x, beta_y, .. } => {
                vec![("alpha_x", *alpha_x), ("alpha_y", *alpha_y), ("beta_x", *beta_x), ("beta_y", *beta_y)]
            }
            ModelSpec::Rashba1dGap { gamma, stark, .. } | ModelSpec::Dirac1d { gamma, stark, .. } => {
                vec![("gamma", *gamma), ("stark", *stark)]
            }
            ModelSpec::FourLevelRashba { gamma, .. } => vec![("gamma", *gamma)],
            ModelSpec::BoundedJc { omega, phi, effective, .. } => {
                vec![("omega", *omega), ("phi", *phi), ("effective", effective.unwrap_or(0.0))]
            }
        };
        for (name, v) in values {
            if !v.is_finite() {
                return Err(Error::param(name, format!("must be finite, got {v}")));
            }
        }
        let deltas: Vec<f64> = match self {
            ModelSpec::Rashba2d { delta_x, delta_y, .. }
            | ModelSpec::Dresselhaus2d { delta_x, delta_y, .. }
            | ModelSpec::RashbaDresselhaus { delta_x, delta_y, .. } => vec![*delta_x, *delta_y],
            ModelSpec::Rashba1dGap { delta_x, .. } | ModelSpec::Dirac1d { delta_x, .. } => vec![*delta_x],
            ModelSpec::FourLevelRashba { delta, .. } => vec![*delta],
            _ => Vec::new(),
        };
        if deltas.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
            return Err(Error::param("delta", "length scales must be finite and positive"));
        }
        Ok(())
    }
}

/// Rashba coupling from laser parameters, `alpha_s = delta_s eta_s Omega_s`.
pub fn laser_coupling(delta: f64, eta: f64, omega: f64) -> f64 {
    delta * eta * omega
}

/// `chi(eta) = eta (1 - eta^2/2) Omega e^{i phi}`.
pub fn chi(eta: f64, omega: f64, phi: f64) -> C64 {
    C64::from_polar(eta * (1.0 - eta * eta / 2.0) * omega, phi)
}

/// Block coupling `chi_n = sqrt(n+1) (1 - eta^2 n/2) chi(eta)`.
pub fn chi_n(n: usize, eta: f64, omega: f64, phi: f64) -> C64 {
    let nf = n as f64;
    chi(eta, omega, phi) * ((nf + 1.0).sqrt() * (1.0 - eta * eta * nf / 2.0))
}

fn require(layout: &HilbertLayout, labels: &[&str]) -> Result<()> {
    for l in labels {
        let f = layout.factor(l).map_err(|_| Error::MissingFactor((*l).to_string()))?;
        let expected = if *l == SPIN || *l == AUX_SPIN { FactorKind::Spin } else { FactorKind::Mode };
        if f.kind != expected {
            return Err(Error::InvalidLayout(format!("factor `{l}` has the wrong kind")));
        }
    }
    Ok(())
}

struct Builder {
    h: OperatorMatrix,
}

impl Builder {
    fn new(layout: &Arc<HilbertLayout>) -> Self {
        Builder { h: OperatorMatrix::zeros(layout.clone()) }
    }

    fn term(&mut self, factors: &[(&str, &OperatorMatrix)], coeff: f64) -> Result<()> {
        if coeff != 0.0 {
            accumulate_product(&mut self.h, factors, C64::new(coeff, 0.0))?;
        }
        Ok(())
    }

    fn mode_dim(&self, label: &str) -> usize {
        self.h.layout().factor(label).map(|f| f.dim).unwrap_or(0)
    }
}

/// Build the Hamiltonian for `spec` on `layout`.
pub fn build(spec: &ModelSpec, layout: &Arc<HilbertLayout>) -> Result<OperatorMatrix> {
    spec.check_finite()?;
    require(layout, spec.required_factors())?;
    let sx = pauli(PauliAxis::X);
    let sy = pauli(PauliAxis::Y);
    let sz = pauli(PauliAxis::Z);
    let mut b = Builder::new(layout);
    match *spec {
        ModelSpec::Laser { .. } => return build_laser(spec, layout),
        ModelSpec::BoundedJc { .. } => return build_bounded_jc(spec, layout),
        ModelSpec::Rashba2d { alpha_x, alpha_y, delta_x, delta_y } => {
            let (px, py) = (pbar(b.mode_dim(X_MODE))?, pbar(b.mode_dim(Y_MODE))?);
            b.term(&[(X_MODE, &px), (SPIN, &sy)], alpha_x / (2.0 * delta_x))?;
            b.term(&[(Y_MODE, &py), (SPIN, &sx)], -alpha_y / (2.0 * delta_y))?;
        }
        ModelSpec::Dresselhaus2d { beta_x, beta_y, delta_x, delta_y } => {
            let (px, py) = (pbar(b.mode_dim(X_MODE))?, pbar(b.mode_dim(Y_MODE))?);
            b.term(&[(X_MODE, &px), (SPIN, &sx)], beta_x / (2.0 * delta_x))?;
            b.term(&[(Y_MODE, &py), (SPIN, &sy)], -beta_y / (2.0 * delta_y))?;
        }
        ModelSpec::RashbaDresselhaus { alpha_x, alpha_y, beta_x, beta_y, delta_x, delta_y } => {
            let (px, py) = (pbar(b.mode_dim(X_MODE))?, pbar(b.mode_dim(Y_MODE))?);
            let (cx, cy) = (1.0 / (2.0 * delta_x), 1.0 / (2.0 * delta_y));
            b.term(&[(Y_MODE, &py), (SPIN, &sx)], alpha_x * cy)?;
            b.term(&[(X_MODE, &px), (SPIN, &sy)], -alpha_y * cx)?;
            b.term(&[(X_MODE, &px), (SPIN, &sx)], beta_x * cx)?;
            b.term(&[(Y_MODE, &py), (SPIN, &sy)], beta_y * cy)?;
        }
        ModelSpec::Rashba1dGap { gamma, stark, delta_x } | ModelSpec::Dirac1d { gamma, stark, delta_x } => {
            let px = pbar(b.mode_dim(X_MODE))?;
            let axis = if matches!(spec, ModelSpec::Dirac1d { .. }) { &sx } else { &sy };
            b.term(&[(X_MODE, &px), (SPIN, axis)], gamma / (2.0 * delta_x))?;
            b.term(&[(SPIN, &sz)], stark)?;
        }
        ModelSpec::FourLevelRashba { gamma, delta } => {
            let (px, py) = (pbar(b.mode_dim(X_MODE))?, pbar(b.mode_dim(Y_MODE))?);
            let c = gamma / (2.0 * delta);
            b.term(&[(AUX_SPIN, &sx), (X_MODE, &px), (SPIN, &sy)], c)?;
            b.term(&[(AUX_SPIN, &sx), (Y_MODE, &py), (SPIN, &sx)], -c)?;
        }
        ModelSpec::BoundedRashbaDresselhaus { cutoff_x, cutoff_y, alpha_x, alpha_y, beta_x, beta_y, form } => {
            let (dx, dy) = (b.mode_dim(X_MODE), b.mode_dim(Y_MODE));
            check_cutoff(cutoff_x, dx)?;
            check_cutoff(cutoff_y, dy)?;
            let px = pbar_bounded(cutoff_x, dx)?;
            let py = pbar_bounded(cutoff_y, dy)?;
            b.term(&[(X_MODE, &px), (SPIN, &sy)], alpha_x / 2.0)?;
            b.term(&[(Y_MODE, &py), (SPIN, &sx)], -alpha_y / 2.0)?;
            b.term(&[(X_MODE, &px), (SPIN, &sx)], beta_x / 2.0)?;
            b.term(&[(Y_MODE, &py), (SPIN, &sy)], -beta_y / 2.0)?;
            if form == BoundedForm::Restricted {
                restrict(&mut b.h, &[(X_MODE, cutoff_x), (Y_MODE, cutoff_y)])?;
            }
        }
    }
    Ok(b.h)
}

fn check_cutoff(cutoff: usize, dim: usize) -> Result<()> {
    if cutoff < 1 {
        return Err(Error::param("cutoff", "bounded cutoff N must be >= 1"));
    }
    if dim < cutoff + 2 {
        return Err(Error::TruncationTooSmall {
            required: cutoff + 2,
            reason: format!("bounded cutoff {cutoff} needs levels above N to show the blocking"),
        });
    }
    Ok(())
}

/// Zero every entry whose row or column lies outside the bounded block.
fn restrict(h: &mut OperatorMatrix, cutoffs: &[(&str, usize)]) -> Result<()> {
    let layout = h.layout().clone();
    let idx = cutoffs.iter().map(|(l, n)| Ok((layout.factor_index(l)?, *n))).collect::<Result<Vec<_>>>()?;
    let inside: Vec<bool> =
        (0..layout.total_dim()).map(|i| idx.iter().all(|&(f, n)| layout.level(i, f) <= n)).collect();
    let d = layout.total_dim();
    let mut entries = h.entries().clone();
    for c in 0..d {
        for r in 0..d {
            if !(inside[r] && inside[c]) {
                entries[(r, c)] = C64::new(0.0, 0.0);
            }
        }
    }
    *h = OperatorMatrix::new(layout, entries)?;
    Ok(())
}

/// `H = i [Omega_x eta_x (e^{i phi1} a_x + e^{i phi2} a_x^dag) + Omega_y eta_y (...)] sigma_+ + H.c.`
///
/// With phases `(0, pi, pi/2, 3pi/2)` this expands to
/// `-Omega_x eta_x pbar_x sigma_x + Omega_y eta_y pbar_y sigma_y`. That is
/// the Rashba form only after a pi rotation of the spin about the in-plane
/// axis `(1, -1, 0)/sqrt 2`; no rotation about `z` maps one onto the other.
pub fn build_laser(spec: &ModelSpec, layout: &Arc<HilbertLayout>) -> Result<OperatorMatrix> {
    let ModelSpec::Laser { omega_x, omega_y, eta_x, eta_y, phases } = *spec else {
        return Err(Error::param("kind", "build_laser expects a laser spec"));
    };
    spec.check_finite()?;
    require(layout, &[X_MODE, Y_MODE, SPIN])?;
    let sp = pauli(PauliAxis::Plus);
    let mut h = OperatorMatrix::zeros(layout.clone());
    for (label, g, (p_a, p_ad)) in
        [(X_MODE, omega_x * eta_x, (phases[0], phases[1])), (Y_MODE, omega_y * eta_y, (phases[2], phases[3]))]
    {
        if g == 0.0 {
            continue;
        }
        let (a, ad) = ladder(layout.factor(label)?.dim)?;
        let drive = &a.scaled(C64::from_polar(1.0, p_a)) + &ad.scaled(C64::from_polar(1.0, p_ad));
        accumulate_product(&mut h, &[(label, &drive), (SPIN, &sp)], I * g)?;
    }
    let hc = h.adjoint();
    Ok(&h + &hc)
}

/// `chi A sigma_k + chi^* A^dag sigma_-k` on the `x` mode.
pub fn build_bounded_jc(spec: &ModelSpec, layout: &Arc<HilbertLayout>) -> Result<OperatorMatrix> {
    let ModelSpec::BoundedJc { cutoff, omega, phi, k, effective, form } = *spec else {
        return Err(Error::param("kind", "build_bounded_jc expects a bounded JC spec"));
    };
    spec.check_finite()?;
    require(layout, &[X_MODE, SPIN])?;
    let dim = layout.factor(X_MODE)?.dim;
    check_cutoff(cutoff, dim)?;
    let (raise, lower) = match k {
        1 => (PauliAxis::Plus, PauliAxis::Minus),
        -1 => (PauliAxis::Minus, PauliAxis::Plus),
        _ => return Err(Error::param("k", format!("must be +1 or -1, got {k}"))),
    };
    let eta = crate::hilbert::blocking_eta(cutoff);
    let c = match effective {
        Some(g) => C64::from_polar(g, phi),
        None => chi(eta, omega, phi),
    };
    let a = bounded_a_for_cutoff(cutoff, dim)?;
    let ad = a.adjoint();
    let mut h = OperatorMatrix::zeros(layout.clone());
    accumulate_product(&mut h, &[(X_MODE, &a), (SPIN, &pauli(raise))], c)?;
    accumulate_product(&mut h, &[(X_MODE, &ad), (SPIN, &pauli(lower))], c.conj())?;
    if form == BoundedForm::Restricted {
        restrict(&mut h, &[(X_MODE, cutoff)])?;
    }
    Ok(h)
}
