//! Initial-state preparation: Fock, coherent, Gaussian momentum packets, spinors,
//! tensor products and density matrices.

use std::sync::Arc;

use nalgebra::linalg::SymmetricEigen;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{pbar, FactorKind, HilbertLayout};
use crate::numeric::{nan_max, nan_min};

const STATE_TOL: f64 = 1e-10;
/// Poisson mass allowed beyond the truncation when preparing a coherent state.
pub const COHERENT_TAIL_LIMIT: f64 = 1e-10;
/// Packet weight allowed on the outermost tenth of the truncated momentum spectrum.
pub const PACKET_EDGE_LIMIT: f64 = 1e-6;

/// Pure state vector or density matrix on a layout.
#[derive(Clone, Debug, PartialEq)]
pub enum QuantumState {
    Pure { layout: Arc<HilbertLayout>, amplitudes: DVector<C64> },
    Density { layout: Arc<HilbertLayout>, matrix: DMatrix<C64> },
}

impl QuantumState {
    pub fn pure(layout: Arc<HilbertLayout>, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(Error::DimensionMismatch { expected: layout.total_dim(), actual: amplitudes.len() });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("norm {norm} differs from 1")));
        }
        Ok(QuantumState::Pure { layout, amplitudes })
    }

    pub fn density(layout: Arc<HilbertLayout>, matrix: DMatrix<C64>) -> Result<Self> {
        let d = layout.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, actual: matrix.nrows() });
        }
        let herm = (&matrix - matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, nan_max);
        if herm > STATE_TOL {
            return Err(Error::InvalidState(format!("density matrix not Hermitian ({herm:.2e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min_eig = min_eigenvalue(&matrix);
        if min_eig < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:.3e}")));
        }
        Ok(QuantumState::Density { layout, matrix })
    }

    /// Wrap without validation; used by the integrators for intermediate states.
    pub(crate) fn pure_unchecked(layout: Arc<HilbertLayout>, amplitudes: DVector<C64>) -> Self {
        QuantumState::Pure { layout, amplitudes }
    }

    pub(crate) fn density_unchecked(layout: Arc<HilbertLayout>, matrix: DMatrix<C64>) -> Self {
        QuantumState::Density { layout, matrix }
    }

    pub fn layout(&self) -> &Arc<HilbertLayout> {
        match self {
            QuantumState::Pure { layout, .. } | QuantumState::Density { layout, .. } => layout,
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, QuantumState::Pure { .. })
    }

    /// Basis-state occupation probabilities.
    pub fn populations(&self) -> Vec<f64> {
        match self {
            QuantumState::Pure { amplitudes, .. } => amplitudes.iter().map(|z| z.norm_sqr()).collect(),
            QuantumState::Density { matrix, .. } => (0..matrix.nrows()).map(|i| matrix[(i, i)].re).collect(),
        }
    }

    /// `||psi||^2` or `Re Tr rho`.
    pub fn trace(&self) -> f64 {
        match self {
            QuantumState::Pure { amplitudes, .. } => amplitudes.norm_squared(),
            QuantumState::Density { matrix, .. } => matrix.trace().re,
        }
    }

    /// `Tr(rho^2)`; for a pure vector this is `||psi||^4`.
    pub fn purity(&self) -> f64 {
        match self {
            QuantumState::Pure { amplitudes, .. } => amplitudes.norm_squared().powi(2),
            // Tr(rho rho) = sum_ij rho_ij rho_ji = sum |rho_ij|^2 for Hermitian rho
            QuantumState::Density { matrix, .. } => matrix.iter().map(|z| z.norm_sqr()).sum(),
        }
    }

    pub fn to_density(&self) -> QuantumState {
        match self {
            QuantumState::Pure { layout, amplitudes } => {
                QuantumState::Density { layout: layout.clone(), matrix: amplitudes * amplitudes.adjoint() }
            }
            QuantumState::Density { .. } => self.clone(),
        }
    }
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(matrix: &DMatrix<C64>) -> f64 {
    let h = (matrix + matrix.adjoint()) * C64::new(0.5, 0.0);
    SymmetricEigen::new(h).eigenvalues.iter().copied().fold(f64::INFINITY, nan_min)
}

/// Per-factor initial state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Fock {
        n: usize,
    },
    /// Coherent state; `theta` is `[re, im]`.
    Coherent {
        theta: C64,
    },
    GaussianMomentum {
        p0: f64,
        mu: f64,
    },
    /// `a|up> + b e^{i phi}|down>` with `a, b >= 0`.
    Spinor {
        a: f64,
        b: f64,
        phi: f64,
    },
}

impl StateSpec {
    pub fn prepare(&self, kind: FactorKind, dim: usize) -> Result<DVector<C64>> {
        match (self, kind) {
            (StateSpec::Spinor { a, b, phi }, FactorKind::Spin) => spinor(*a, *b, *phi),
            (StateSpec::Spinor { .. }, FactorKind::Mode) => {
                Err(Error::InvalidState("spinor assigned to a vibrational mode".into()))
            }
            (StateSpec::Fock { n }, FactorKind::Spin) if *n < 2 => Ok(fock(*n, 2)?),
            (_, FactorKind::Spin) => Err(Error::InvalidState("spin factors take a spinor or a Fock index 0/1".into())),
            (StateSpec::Fock { n }, FactorKind::Mode) => fock(*n, dim),
            (StateSpec::Coherent { theta }, FactorKind::Mode) => coherent(*theta, dim),
            (StateSpec::GaussianMomentum { p0, mu }, FactorKind::Mode) => gaussian_momentum(*p0, *mu, dim),
        }
    }
}

pub fn fock(n: usize, dim: usize) -> Result<DVector<C64>> {
    if n >= dim {
        return Err(Error::TruncationTooSmall {
            required: n + 1,
            reason: format!("Fock level {n} outside a {dim}-level mode"),
        });
    }
    let mut v = DVector::zeros(dim);
    v[n] = C64::new(1.0, 0.0);
    Ok(v)
}

/// Poisson mass `sum_{n >= dim} e^{-l} l^n / n!` with mean `l`.
pub fn poisson_tail(mean: f64, dim: usize) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    let ln_mean = mean.ln();
    let mut log_term = -mean;
    for n in 1..=dim {
        log_term += ln_mean - (n as f64).ln();
    }
    let mut tail = 0.0;
    let mut n = dim;
    loop {
        let term = log_term.exp();
        tail += term;
        if (n as f64) > mean && term < tail * 1e-17 {
            break;
        }
        n += 1;
        log_term += ln_mean - (n as f64).ln();
    }
    tail
}

/// Coherent state `|theta>` truncated at `dim` levels and renormalized.
pub fn coherent(theta: C64, dim: usize) -> Result<DVector<C64>> {
    if !(theta.re.is_finite() && theta.im.is_finite()) {
        return Err(Error::param("theta", "must be finite"));
    }
    if dim < 2 {
        return Err(Error::InvalidDimension { dim, reason: "mode needs dim >= 2".into() });
    }
    let mean = theta.norm_sqr();
    if poisson_tail(mean, dim) >= COHERENT_TAIL_LIMIT {
        let mut required = dim;
        while poisson_tail(mean, required) >= COHERENT_TAIL_LIMIT {
            required += 1;
        }
        return Err(Error::TruncationTooSmall {
            required,
            reason: format!("coherent state |theta|^2 = {mean} leaks past {dim} levels"),
        });
    }
    let mut v = DVector::zeros(dim);
    v[0] = C64::new((-mean / 2.0).exp(), 0.0);
    for n in 1..dim {
        v[n] = v[n - 1] * theta / (n as f64).sqrt();
    }
    let norm = v.norm();
    Ok(v / C64::new(norm, 0.0))
}

/// Eigen-decomposition of the truncated `pbar`, eigenvalues ascending.
///
/// Each eigenvector's phase is fixed so its vacuum component is real and
/// positive, mirroring the continuum `<0|p> > 0`. Without this the packet's
/// position would depend on the eigensolver's arbitrary phases.
pub fn momentum_eigenbasis(dim: usize) -> Result<(Vec<f64>, DMatrix<C64>)> {
    let eig = SymmetricEigen::new(pbar(dim)?.into_entries());
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(dim, dim);
    for (k, &i) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(i);
        let v0 = col[0];
        let phase = if v0.norm() > 0.0 { v0.conj() / v0.norm() } else { C64::new(1.0, 0.0) };
        vectors.set_column(k, &(col * phase));
    }
    Ok((values, vectors))
}

/// Wavepacket with amplitude `exp[-(p - p0)^2 / (4 mu)]` over the truncated
/// momentum eigenbasis, so `Var(pbar) = mu` as the truncation grows.
pub fn gaussian_momentum(p0: f64, mu: f64, dim: usize) -> Result<DVector<C64>> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::param("mu", format!("width must be positive, got {mu}")));
    }
    if !p0.is_finite() {
        return Err(Error::param("p0", "must be finite"));
    }
    let (values, vectors) = momentum_eigenbasis(dim)?;
    let mut weights: Vec<f64> = values.iter().map(|p| (-(p - p0).powi(2) / (4.0 * mu)).exp()).collect();
    let norm = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::TruncationTooSmall {
            required: dim * 2,
            reason: format!("packet centre {p0} lies outside the truncated momentum spectrum"),
        });
    }
    weights.iter_mut().for_each(|w| *w /= norm);
    let edge = (dim / 10).max(1);
    let edge_mass: f64 = weights[..edge].iter().chain(&weights[dim - edge..]).map(|w| w * w).sum();
    if edge_mass > PACKET_EDGE_LIMIT {
        return Err(Error::TruncationTooSmall {
            required: dim * 2,
            reason: format!("packet mass {edge_mass:.2e} at the extreme momentum eigenvalues"),
        });
    }
    let mut psi = DVector::zeros(dim);
    for (k, w) in weights.iter().enumerate() {
        psi.axpy(C64::new(*w, 0.0), &vectors.column(k), C64::new(1.0, 0.0));
    }
    Ok(psi)
}

/// `a|up> + b e^{i phi}|down>`, normalized, with `a, b` taken as magnitudes.
pub fn spinor(a: f64, b: f64, phi: f64) -> Result<DVector<C64>> {
    let (a, b) = (a.abs(), b.abs());
    let norm = (a * a + b * b).sqrt();
    if norm == 0.0 || !norm.is_finite() || !phi.is_finite() {
        return Err(Error::InvalidState("spinor amplitudes must be finite and not both zero".into()));
    }
    Ok(DVector::from_vec(vec![C64::new(a / norm, 0.0), C64::from_polar(b / norm, phi)]))
}

/// Tensor product of per-factor states, in layout order.
pub fn product(specs: &[StateSpec], layout: &Arc<HilbertLayout>) -> Result<QuantumState> {
    if specs.len() != layout.factors().len() {
        return Err(Error::InvalidState(format!(
            "{} factor states for a {}-factor layout",
            specs.len(),
            layout.factors().len()
        )));
    }
    let parts =
        specs.iter().zip(layout.factors()).map(|(s, f)| s.prepare(f.kind, f.dim)).collect::<Result<Vec<_>>>()?;
    product_of_vectors(&parts, layout)
}

pub fn product_of_vectors(parts: &[DVector<C64>], layout: &Arc<HilbertLayout>) -> Result<QuantumState> {
    let mut psi = DVector::from_element(1, C64::new(1.0, 0.0));
    for (v, f) in parts.iter().zip(layout.factors()) {
        if v.len() != f.dim {
            return Err(Error::DimensionMismatch { expected: f.dim, actual: v.len() });
        }
        psi = psi.kronecker(v);
    }
    let norm = psi.norm();
    QuantumState::pure(layout.clone(), psi / C64::new(norm, 0.0))
}
