//! Time evolution in dimensionless time `tau`.
//!
//! Two unitary methods are provided: a fixed-step fourth-order Runge-Kutta
//! stepper and an exact propagator built from one eigendecomposition of `H`.
//! The exact propagator is the in-crate reference for the stepper. Whenever a
//! damping rate is non-zero the state is promoted to a density matrix and the
//! Lindblad equation
//!
//! `d rho / d tau = -i [H, rho] + sum_s (zeta_s / 2) (2 a_s rho a_s^dag - a_s^dag a_s rho - rho a_s^dag a_s)`
//!
//! is integrated with the same Runge-Kutta scheme.

use std::sync::Arc;

use nalgebra::linalg::{Cholesky, SymmetricEigen};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{
    embed, factor_expectation, ladder, pauli, pbar, xbar, FactorKind, HilbertLayout, OperatorMatrix, PauliAxis, SPIN,
    X_MODE, Y_MODE,
};
use crate::numeric::nan_max;
use crate::sparse::CsrMatrix;
use crate::states::QuantumState;

/// Population allowed in the top tenth of a mode's levels before a run is rejected.
pub const TAIL_LIMIT: f64 = 1e-6;
/// Most negative density-matrix eigenvalue tolerated during Lindblad integration.
pub const POSITIVITY_FLOOR: f64 = 1e-6;

const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const MINUS_I: C64 = C64 { re: 0.0, im: -1.0 };

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    Rk4,
    Exact,
}

/// Amplitude damping `a_s` on one vibrational mode at rate `zeta` (in `tau` units).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Damping {
    pub mode: String,
    pub rate: f64,
}

fn default_dt() -> f64 {
    1e-3
}

fn default_sample_every() -> usize {
    10
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionConfig {
    pub t_max: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_sample_every")]
    pub sample_every: usize,
    #[serde(default)]
    pub method: Method,
    #[serde(default)]
    pub dissipation: Vec<Damping>,
    /// Modes whose truncation tail is recorded but not enforced. Used when a
    /// wavepacket is deliberately prepared close to the truncation edge.
    #[serde(default)]
    pub tail_exempt: Vec<String>,
}

impl EvolutionConfig {
    pub fn new(t_max: f64) -> Self {
        EvolutionConfig {
            t_max,
            dt: default_dt(),
            sample_every: default_sample_every(),
            method: Method::Rk4,
            dissipation: Vec::new(),
            tail_exempt: Vec::new(),
        }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_sample_every(mut self, n: usize) -> Self {
        self.sample_every = n;
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn is_dissipative(&self) -> bool {
        self.dissipation.iter().any(|d| d.rate > 0.0)
    }

    pub fn validate(&self) -> Result<usize> {
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(Error::param("t_max", format!("must be positive, got {}", self.t_max)));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::param("dt", format!("must be positive, got {}", self.dt)));
        }
        if self.sample_every == 0 {
            return Err(Error::param("sample_every", "must be >= 1"));
        }
        for d in &self.dissipation {
            if !(d.rate.is_finite() && d.rate >= 0.0) {
                return Err(Error::param("rate", format!("damping rate must be >= 0, got {}", d.rate)));
            }
        }
        let steps = (self.t_max / self.dt).round();
        if (steps * self.dt - self.t_max).abs() > 1e-9 * self.t_max.max(1.0) {
            return Err(Error::param("dt", format!("t_max = {} is not a whole number of steps", self.t_max)));
        }
        Ok(steps as usize)
    }
}

/// Column selector for a [`TrajectoryRecord`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    X,
    Y,
    Px,
    Py,
    Sx,
    Sy,
    Sz,
    Trace,
    Purity,
    TailX,
    TailY,
    Leakage,
}

impl Observable {
    pub const ALL: [Observable; 12] = [
        Observable::X,
        Observable::Y,
        Observable::Px,
        Observable::Py,
        Observable::Sx,
        Observable::Sy,
        Observable::Sz,
        Observable::Trace,
        Observable::Purity,
        Observable::TailX,
        Observable::TailY,
        Observable::Leakage,
    ];

    /// Expectation values only (no bookkeeping columns).
    pub const EXPECTATIONS: [Observable; 7] =
        [Observable::X, Observable::Y, Observable::Px, Observable::Py, Observable::Sx, Observable::Sy, Observable::Sz];

    pub fn name(self) -> &'static str {
        match self {
            Observable::X => "x",
            Observable::Y => "y",
            Observable::Px => "px",
            Observable::Py => "py",
            Observable::Sx => "sx",
            Observable::Sy => "sy",
            Observable::Sz => "sz",
            Observable::Trace => "trace",
            Observable::Purity => "purity",
            Observable::TailX => "tail_x",
            Observable::TailY => "tail_y",
            Observable::Leakage => "leakage",
        }
    }

    pub fn from_name(name: &str) -> Option<Observable> {
        Observable::ALL.into_iter().find(|o| o.name() == name)
    }
}

/// One row of a trajectory.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Sample {
    pub x: f64,
    pub y: f64,
    pub px: f64,
    pub py: f64,
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
    pub trace: f64,
    pub purity: f64,
    pub tail_x: f64,
    pub tail_y: f64,
    pub leakage: f64,
}

impl Sample {
    pub fn get(&self, o: Observable) -> f64 {
        match o {
            Observable::X => self.x,
            Observable::Y => self.y,
            Observable::Px => self.px,
            Observable::Py => self.py,
            Observable::Sx => self.sx,
            Observable::Sy => self.sy,
            Observable::Sz => self.sz,
            Observable::Trace => self.trace,
            Observable::Purity => self.purity,
            Observable::TailX => self.tail_x,
            Observable::TailY => self.tail_y,
            Observable::Leakage => self.leakage,
        }
    }

    pub fn set(&mut self, o: Observable, v: f64) {
        *match o {
            Observable::X => &mut self.x,
            Observable::Y => &mut self.y,
            Observable::Px => &mut self.px,
            Observable::Py => &mut self.py,
            Observable::Sx => &mut self.sx,
            Observable::Sy => &mut self.sy,
            Observable::Sz => &mut self.sz,
            Observable::Trace => &mut self.trace,
            Observable::Purity => &mut self.purity,
            Observable::TailX => &mut self.tail_x,
            Observable::TailY => &mut self.tail_y,
            Observable::Leakage => &mut self.leakage,
        } = v;
    }
}

/// Sampled observables. `energy` holds `<H>` per sample when the record came
/// from an integrator and is empty when it was parsed from a file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub samples: Vec<Sample>,
    pub energy: Vec<f64>,
}

impl TrajectoryRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn push(&mut self, tau: f64, sample: Sample) -> Result<()> {
        if let Some(&last) = self.times.last() {
            if tau <= last {
                return Err(Error::NonUniformSampling(format!("time {tau} does not follow {last}")));
            }
        }
        self.times.push(tau);
        self.samples.push(sample);
        Ok(())
    }

    pub fn series(&self, o: Observable) -> Vec<f64> {
        self.samples.iter().map(|s| s.get(o)).collect()
    }

    /// Largest `|v(tau) - v(0)|` of one column.
    pub fn drift(&self, o: Observable) -> f64 {
        let s = self.series(o);
        s.first().map_or(0.0, |&v0| s.iter().map(|v| (v - v0).abs()).fold(0.0, nan_max))
    }

    pub fn max(&self, o: Observable) -> f64 {
        self.series(o).into_iter().fold(f64::NEG_INFINITY, nan_max)
    }

    /// Largest relative change of `<H>`, normalized by `max(|<H>(0)|, 1)`.
    pub fn energy_drift(&self) -> f64 {
        match self.energy.first() {
            Some(&e0) => {
                let scale = e0.abs().max(1.0);
                self.energy.iter().map(|e| (e - e0).abs() / scale).fold(0.0, nan_max)
            }
            None => 0.0,
        }
    }
}

/// Result of an integration: the record plus the state at the last step.
#[derive(Clone, Debug)]
pub struct Evolution {
    pub record: TrajectoryRecord,
    pub final_state: QuantumState,
}

/// Precomputed single-factor operators for [`record_observables`].
#[derive(Clone, Debug)]
pub struct Observer {
    layout: Arc<HilbertLayout>,
    x_label: Option<String>,
    y_label: Option<String>,
    spin: bool,
    xbar_x: Option<OperatorMatrix>,
    pbar_x: Option<OperatorMatrix>,
    xbar_y: Option<OperatorMatrix>,
    pbar_y: Option<OperatorMatrix>,
    bounded: Vec<(usize, usize)>,
}

impl Observer {
    /// `bounded` lists `(mode label, N)` pairs whose population above `N` counts as leakage.
    ///
    /// The `x` column follows the factor labelled `x`, falling back to the first mode.
    pub fn new(layout: &Arc<HilbertLayout>, bounded: &[(String, usize)]) -> Result<Self> {
        let modes: Vec<&str> = layout.modes().map(|f| f.label.as_str()).collect();
        let x_label = if layout.has_factor(X_MODE) { Some(X_MODE) } else { modes.first().copied() };
        let y_label = if layout.has_factor(Y_MODE) { Some(Y_MODE) } else { None };
        let ops = |label: Option<&str>| -> Result<(Option<OperatorMatrix>, Option<OperatorMatrix>)> {
            match label {
                Some(l) => {
                    let d = layout.factor(l)?.dim;
                    Ok((Some(xbar(d)?), Some(pbar(d)?)))
                }
                None => Ok((None, None)),
            }
        };
        let (xbar_x, pbar_x) = ops(x_label)?;
        let (xbar_y, pbar_y) = ops(y_label)?;
        let bounded = bounded
            .iter()
            .map(|(l, n)| {
                let idx = layout.factor_index(l)?;
                if layout.factors()[idx].kind != FactorKind::Mode {
                    return Err(Error::InvalidLayout(format!("`{l}` is not a mode")));
                }
                Ok((idx, *n))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Observer {
            layout: layout.clone(),
            x_label: x_label.map(String::from),
            y_label: y_label.map(String::from),
            spin: layout.factor(SPIN).map(|f| f.kind == FactorKind::Spin).unwrap_or(false),
            xbar_x,
            pbar_x,
            xbar_y,
            pbar_y,
            bounded,
        })
    }

    pub fn layout(&self) -> &Arc<HilbertLayout> {
        &self.layout
    }
}

/// Number of top levels counted as a mode's truncation tail.
pub fn tail_levels(dim: usize) -> usize {
    dim.div_ceil(10).max(1)
}

/// Population in the top tenth of each mode's levels, in layout order.
pub fn tail_populations(state: &QuantumState) -> Vec<(String, f64)> {
    let layout = state.layout();
    let pops = state.populations();
    layout
        .factors()
        .iter()
        .enumerate()
        .filter(|(_, f)| f.kind == FactorKind::Mode)
        .map(|(idx, f)| {
            let start = f.dim - tail_levels(f.dim);
            let p: f64 = pops.iter().enumerate().filter(|(i, _)| layout.level(*i, idx) >= start).map(|(_, p)| p).sum();
            (f.label.clone(), p)
        })
        .collect()
}

fn real(z: C64) -> f64 {
    z.re
}

/// All record columns for one state.
pub fn record_observables(state: &QuantumState, observer: &Observer) -> Result<Sample> {
    if **state.layout() != *observer.layout {
        return Err(Error::LayoutMismatch);
    }
    let mut s = Sample::default();
    if let Some(l) = &observer.x_label {
        s.x = real(factor_expectation(observer.xbar_x.as_ref().unwrap(), l, state)?);
        s.px = real(factor_expectation(observer.pbar_x.as_ref().unwrap(), l, state)?);
    }
    if let Some(l) = &observer.y_label {
        s.y = real(factor_expectation(observer.xbar_y.as_ref().unwrap(), l, state)?);
        s.py = real(factor_expectation(observer.pbar_y.as_ref().unwrap(), l, state)?);
    }
    if observer.spin {
        s.sx = real(factor_expectation(&pauli(PauliAxis::X), SPIN, state)?);
        s.sy = real(factor_expectation(&pauli(PauliAxis::Y), SPIN, state)?);
        s.sz = real(factor_expectation(&pauli(PauliAxis::Z), SPIN, state)?);
    }
    s.trace = state.trace();
    s.purity = state.purity();
    for (label, p) in tail_populations(state) {
        if Some(&label) == observer.x_label.as_ref() {
            s.tail_x = p;
        } else if Some(&label) == observer.y_label.as_ref() {
            s.tail_y = p;
        }
    }
    if !observer.bounded.is_empty() {
        let layout = state.layout();
        s.leakage = state
            .populations()
            .iter()
            .enumerate()
            .filter(|(i, _)| observer.bounded.iter().any(|&(f, n)| layout.level(*i, f) > n))
            .map(|(_, p)| p)
            .sum();
    }
    Ok(s)
}

fn check_tails(state: &QuantumState, config: &EvolutionConfig, tau: f64) -> Result<()> {
    for (label, p) in tail_populations(state) {
        if p > TAIL_LIMIT && !config.tail_exempt.contains(&label) {
            return Err(Error::TruncationInadequate { mode: label, population: p, tau });
        }
    }
    Ok(())
}

fn check_hermitian(h: &OperatorMatrix) -> Result<()> {
    let err = h.hermiticity_error();
    if err > 1e-10 {
        return Err(Error::param("hamiltonian", format!("not Hermitian (max |H - H^dag| = {err:.3e})")));
    }
    Ok(())
}

struct Sampler<'a> {
    observer: &'a Observer,
    config: &'a EvolutionConfig,
    h: &'a CsrMatrix,
    record: TrajectoryRecord,
}

impl Sampler<'_> {
    fn take(&mut self, tau: f64, state: &QuantumState) -> Result<()> {
        check_tails(state, self.config, tau)?;
        let sample = record_observables(state, self.observer)?;
        let energy = match state {
            QuantumState::Pure { amplitudes, .. } => self.h.quadratic_form(amplitudes.as_slice()).re,
            QuantumState::Density { matrix, .. } => self.h.trace_product(matrix).re,
        };
        self.record.push(tau, sample)?;
        self.record.energy.push(energy);
        Ok(())
    }
}

/// Unitary evolution of a pure state.
pub fn evolve_unitary(
    h: &OperatorMatrix,
    psi0: &QuantumState,
    config: &EvolutionConfig,
    observer: &Observer,
) -> Result<Evolution> {
    let steps = config.validate()?;
    check_hermitian(h)?;
    let QuantumState::Pure { layout, amplitudes } = psi0 else {
        return Err(Error::InvalidState("unitary evolution needs a pure state".into()));
    };
    if **h.layout() != **layout {
        return Err(Error::LayoutMismatch);
    }
    let csr = CsrMatrix::from_operator(h);
    let mut sampler = Sampler { observer, config, h: &csr, record: TrajectoryRecord::default() };
    let tau_of = |step: usize| step as f64 * config.dt;
    let final_amp = match config.method {
        Method::Rk4 => {
            let d = csr.dim();
            let mut psi = amplitudes.clone();
            let mut k = vec![DVector::<C64>::zeros(d); 4];
            let mut tmp = DVector::<C64>::zeros(d);
            let dt = config.dt;
            let scale = MINUS_I;
            sampler.take(0.0, &QuantumState::pure_unchecked(layout.clone(), psi.clone()))?;
            for step in 1..=steps {
                csr.apply_into(psi.as_slice(), scale, k[0].as_mut_slice());
                tmp.copy_from(&psi);
                tmp.axpy(C64::new(dt / 2.0, 0.0), &k[0], ONE);
                csr.apply_into(tmp.as_slice(), scale, k[1].as_mut_slice());
                tmp.copy_from(&psi);
                tmp.axpy(C64::new(dt / 2.0, 0.0), &k[1], ONE);
                csr.apply_into(tmp.as_slice(), scale, k[2].as_mut_slice());
                tmp.copy_from(&psi);
                tmp.axpy(C64::new(dt, 0.0), &k[2], ONE);
                csr.apply_into(tmp.as_slice(), scale, k[3].as_mut_slice());
                for i in 0..d {
                    psi[i] += (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]) * (dt / 6.0);
                }
                if step % config.sample_every == 0 {
                    let norm = psi.norm_squared();
                    if !norm.is_finite() || (norm - 1.0).abs() > 1e-6 {
                        return Err(Error::IntegrationInstability {
                            tau: tau_of(step),
                            reason: format!("norm drifted to {norm:.6e}"),
                        });
                    }
                    sampler.take(tau_of(step), &QuantumState::pure_unchecked(layout.clone(), psi.clone()))?;
                }
            }
            psi
        }
        Method::Exact => {
            let prop = ExactPropagator::new(h)?;
            let c0 = prop.vectors.adjoint() * amplitudes;
            let mut psi = amplitudes.clone();
            for step in (0..=steps).step_by(config.sample_every) {
                psi = prop.apply_coefficients(&c0, tau_of(step));
                sampler.take(tau_of(step), &QuantumState::pure_unchecked(layout.clone(), psi.clone()))?;
            }
            if steps % config.sample_every != 0 {
                psi = prop.apply_coefficients(&c0, tau_of(steps));
            }
            psi
        }
    };
    Ok(Evolution { record: sampler.record, final_state: QuantumState::pure_unchecked(layout.clone(), final_amp) })
}

/// `e^{-i H tau}` from one eigendecomposition.
#[derive(Clone, Debug)]
pub struct ExactPropagator {
    values: Vec<f64>,
    vectors: DMatrix<C64>,
}

impl ExactPropagator {
    /// Diagonalizes each block of basis states coupled by `H` separately.
    /// Besides being cheaper, this keeps large zero blocks (bounded models
    /// act on a small subspace) out of the dense eigensolver, which does not
    /// converge on them.
    pub fn new(h: &OperatorMatrix) -> Result<Self> {
        check_hermitian(h)?;
        let n = h.dim();
        let m = h.entries();
        let mut values = Vec::with_capacity(n);
        let mut vectors = DMatrix::zeros(n, n);
        let mut col = 0;
        for block in coupled_blocks(m) {
            if let [i] = block[..] {
                values.push(m[(i, i)].re);
                vectors[(i, col)] = ONE;
                col += 1;
                continue;
            }
            let sub = DMatrix::from_fn(block.len(), block.len(), |a, b| {
                (m[(block[a], block[b])] + m[(block[b], block[a])].conj()) * 0.5
            });
            let eig = SymmetricEigen::new(sub);
            if eig.eigenvalues.iter().any(|e| !e.is_finite())
                || eig.eigenvectors.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())
            {
                return Err(Error::IntegrationInstability {
                    tau: 0.0,
                    reason: format!("eigensolver failed on a block of size {}", block.len()),
                });
            }
            for (k, e) in eig.eigenvalues.iter().enumerate() {
                values.push(*e);
                for (a, &i) in block.iter().enumerate() {
                    vectors[(i, col)] = eig.eigenvectors[(a, k)];
                }
                col += 1;
            }
        }
        Ok(ExactPropagator { values, vectors })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    pub fn apply(&self, psi: &DVector<C64>, tau: f64) -> DVector<C64> {
        self.apply_coefficients(&(self.vectors.adjoint() * psi), tau)
    }

    fn apply_coefficients(&self, c0: &DVector<C64>, tau: f64) -> DVector<C64> {
        let phased = DVector::from_iterator(
            c0.len(),
            c0.iter().zip(&self.values).map(|(c, e)| c * C64::from_polar(1.0, -e * tau)),
        );
        &self.vectors * phased
    }

    /// Dense `e^{-i H tau}`.
    pub fn matrix(&self, tau: f64) -> DMatrix<C64> {
        let mut scaled = self.vectors.clone();
        for (j, e) in self.values.iter().enumerate() {
            let ph = C64::from_polar(1.0, -e * tau);
            for v in scaled.column_mut(j).iter_mut() {
                *v *= ph;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

/// Connected components of the graph with an edge wherever `m[(i, j)] != 0`,
/// each sorted, ordered by smallest index.
fn coupled_blocks(m: &DMatrix<C64>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for j in 0..n {
        for i in 0..n {
            if i != j && m[(i, j)] != C64::new(0.0, 0.0) {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut index_of = vec![usize::MAX; n];
    for i in 0..n {
        let r = root(&mut parent, i);
        if index_of[r] == usize::MAX {
            index_of[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[index_of[r]].push(i);
    }
    blocks
}

/// Lindblad right-hand side with `H_eff = H - (i/2) sum gamma L^dag L`.
struct Liouvillian {
    h_eff: CsrMatrix,
    jumps: Vec<(CsrMatrix, f64)>,
}

impl Liouvillian {
    fn new(h: &OperatorMatrix, collapse: &[(OperatorMatrix, f64)]) -> Self {
        let mut h_eff = h.entries().clone();
        for (l, rate) in collapse {
            let ll = CsrMatrix::from_dense(&l.entries().adjoint()).mul_dense(l.entries());
            h_eff -= ll * C64::new(0.0, rate / 2.0);
        }
        Liouvillian {
            h_eff: CsrMatrix::from_dense(&h_eff),
            jumps: collapse.iter().filter(|(_, r)| *r > 0.0).map(|(l, r)| (CsrMatrix::from_operator(l), *r)).collect(),
        }
    }

    /// `out = L(rho)`, one output column at a time:
    /// `out[:, j] = -i H_eff rho[:, j] + i sum_k conj(H_eff[j, k]) rho[:, k]
    ///            + sum_l rate conj(L[j, l]) L rho[:, l]`.
    fn rhs_into(&self, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let d = rho.nrows();
        let src = rho.as_slice();
        let col = |k: usize| &src[k * d..(k + 1) * d];
        for (j, o) in out.as_mut_slice().chunks_exact_mut(d).enumerate() {
            o.fill(C64::new(0.0, 0.0));
            self.h_eff.apply_add(col(j), MINUS_I, o);
            for (k, h) in self.h_eff.row(j) {
                let w = C64::new(0.0, 1.0) * h.conj();
                for (o, s) in o.iter_mut().zip(col(k)) {
                    *o += w * s;
                }
            }
            for (l, rate) in &self.jumps {
                for (m, v) in l.row(j) {
                    l.apply_add(col(m), v.conj() * *rate, o);
                }
            }
        }
    }
}

/// Buffers for one Lindblad RK4 step.
struct LindbladStepper {
    k: [DMatrix<C64>; 4],
    stage: DMatrix<C64>,
}

impl LindbladStepper {
    fn new(d: usize) -> Self {
        let z = || DMatrix::zeros(d, d);
        LindbladStepper { k: [z(), z(), z(), z()], stage: z() }
    }

    fn combine(out: &mut DMatrix<C64>, rho: &DMatrix<C64>, k: &DMatrix<C64>, h: f64) {
        for ((o, r), k) in out.as_mut_slice().iter_mut().zip(rho.as_slice()).zip(k.as_slice()) {
            *o = r + k * h;
        }
    }

    fn step(&mut self, liou: &Liouvillian, rho: &mut DMatrix<C64>, dt: f64) {
        let LindbladStepper { k, stage } = self;
        liou.rhs_into(rho, &mut k[0]);
        Self::combine(stage, rho, &k[0], dt / 2.0);
        liou.rhs_into(stage, &mut k[1]);
        Self::combine(stage, rho, &k[1], dt / 2.0);
        liou.rhs_into(stage, &mut k[2]);
        Self::combine(stage, rho, &k[2], dt);
        liou.rhs_into(stage, &mut k[3]);
        let w = dt / 6.0;
        let [k1, k2, k3, k4] = &*k;
        for (i, r) in rho.as_mut_slice().iter_mut().enumerate() {
            *r += (k1.as_slice()[i] + (k2.as_slice()[i] + k3.as_slice()[i]) * 2.0 + k4.as_slice()[i]) * w;
        }
        // restore exact Hermiticity
        let d = rho.nrows();
        for j in 0..d {
            rho[(j, j)].im = 0.0;
            for i in 0..j {
                let m = (rho[(i, j)] + rho[(j, i)].conj()) * 0.5;
                rho[(i, j)] = m;
                rho[(j, i)] = m.conj();
            }
        }
    }
}

fn is_positive(rho: &DMatrix<C64>) -> bool {
    let mut shifted = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
    for i in 0..shifted.nrows() {
        shifted[(i, i)] += POSITIVITY_FLOOR;
    }
    Cholesky::new(shifted).is_some()
}

/// Collapse operators `a_s` with rates, from a damping list.
pub fn damping_operators(layout: &Arc<HilbertLayout>, dissipation: &[Damping]) -> Result<Vec<(OperatorMatrix, f64)>> {
    dissipation
        .iter()
        .map(|d| {
            let f = layout.factor(&d.mode)?;
            if f.kind != FactorKind::Mode {
                return Err(Error::InvalidLayout(format!("damping target `{}` is not a mode", d.mode)));
            }
            Ok((embed(&ladder(f.dim)?.0, &d.mode, layout)?, d.rate))
        })
        .collect()
}

/// Master-equation evolution of a density matrix.
pub fn evolve_lindblad(
    h: &OperatorMatrix,
    collapse: &[(OperatorMatrix, f64)],
    rho0: &QuantumState,
    config: &EvolutionConfig,
    observer: &Observer,
) -> Result<Evolution> {
    let steps = config.validate()?;
    check_hermitian(h)?;
    if config.method == Method::Exact {
        return Err(Error::param("method", "the exact propagator is unitary-only"));
    }
    let rho0 = rho0.to_density();
    let QuantumState::Density { layout, matrix } = &rho0 else { unreachable!() };
    if **h.layout() != **layout {
        return Err(Error::LayoutMismatch);
    }
    for (l, rate) in collapse {
        if **l.layout() != **layout {
            return Err(Error::LayoutMismatch);
        }
        if !(rate.is_finite() && *rate >= 0.0) {
            return Err(Error::param("rate", format!("damping rate must be >= 0, got {rate}")));
        }
    }
    let liou = Liouvillian::new(h, collapse);
    let csr = CsrMatrix::from_operator(h);
    let mut sampler = Sampler { observer, config, h: &csr, record: TrajectoryRecord::default() };
    let dt = config.dt;
    let mut rho = matrix.clone();
    sampler.take(0.0, &QuantumState::density_unchecked(layout.clone(), rho.clone()))?;
    let mut stepper = LindbladStepper::new(rho.nrows());
    for step in 1..=steps {
        stepper.step(&liou, &mut rho, dt);
        if step % config.sample_every == 0 {
            let tau = step as f64 * dt;
            let tr = rho.trace().re;
            if !tr.is_finite() || (tr - 1.0).abs() > 1e-6 {
                return Err(Error::IntegrationInstability { tau, reason: format!("trace drifted to {tr:.6e}") });
            }
            if !is_positive(&rho) {
                return Err(Error::IntegrationInstability {
                    tau,
                    reason: format!("density matrix has an eigenvalue below -{POSITIVITY_FLOOR:e}"),
                });
            }
            sampler.take(tau, &QuantumState::density_unchecked(layout.clone(), rho.clone()))?;
        }
    }
    Ok(Evolution { record: sampler.record, final_state: QuantumState::density_unchecked(layout.clone(), rho) })
}

/// Dispatch on the config: Lindblad when any damping rate is positive, unitary otherwise.
pub fn evolve(
    h: &OperatorMatrix,
    state: &QuantumState,
    config: &EvolutionConfig,
    observer: &Observer,
) -> Result<Evolution> {
    if config.is_dissipative() || !state.is_pure() {
        let collapse = damping_operators(h.layout(), &config.dissipation)?;
        evolve_lindblad(h, &collapse, state, config, observer)
    } else {
        evolve_unitary(h, state, config, observer)
    }
}
