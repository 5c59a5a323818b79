//! Truncated Fock-space and pseudo-spin operator algebra.
//!
//! Every operator is a dense complex matrix tagged with the [`HilbertLayout`]
//! it acts on. Composite spaces are ordered tensor products; the first factor
//! is the most significant index, so a basis index decodes as
//! `i = ((n_x * d_y) + n_y) * 2 + s` for the standard `(x, y, spin)` layout.
//!
//! Conventions used throughout the crate:
//!
//! | quantity | definition |
//! |---|---|
//! | spin basis | index 0 = `|e> = |up>`, index 1 = `|g> = |down>` |
//! | `sigma_+` | `|e><g|` |
//! | position | `xbar = a + a^dag` (position in units of the length scale) |
//! | momentum | `pbar = i (a^dag - a)`, so `p = pbar / (2 delta)` |
//! | bounded ladder | `A(eta) = [1 - eta^2 n / 2] a` |

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::nan_max;
use crate::states::QuantumState;

pub const X_MODE: &str = "x";
pub const Y_MODE: &str = "y";
pub const SPIN: &str = "spin";
/// Second pseudo-spin of the four-level ion, spanned by `|e'>, |g'>`.
pub const AUX_SPIN: &str = "aux";

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorKind {
    Mode,
    Spin,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub kind: FactorKind,
    pub dim: usize,
    pub label: String,
}

impl Factor {
    pub fn mode(label: impl Into<String>, dim: usize) -> Self {
        Factor { kind: FactorKind::Mode, dim, label: label.into() }
    }

    pub fn spin(label: impl Into<String>) -> Self {
        Factor { kind: FactorKind::Spin, dim: 2, label: label.into() }
    }
}

/// Ordered list of tensor factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertLayout {
    factors: Vec<Factor>,
    total_dim: usize,
}

impl HilbertLayout {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidLayout("layout needs at least one factor".into()));
        }
        for (i, f) in factors.iter().enumerate() {
            match f.kind {
                FactorKind::Mode if f.dim < 2 => {
                    return Err(Error::InvalidDimension {
                        dim: f.dim,
                        reason: format!("mode `{}` needs dim >= 2", f.label),
                    })
                }
                FactorKind::Spin if f.dim != 2 => {
                    return Err(Error::InvalidDimension {
                        dim: f.dim,
                        reason: format!("spin `{}` must have dim 2", f.label),
                    })
                }
                _ => {}
            }
            if factors[..i].iter().any(|g| g.label == f.label) {
                return Err(Error::InvalidLayout(format!("duplicate label `{}`", f.label)));
            }
        }
        let total_dim = factors.iter().map(|f| f.dim).product();
        Ok(HilbertLayout { factors, total_dim })
    }

    /// `(x-mode, y-mode, spin)`.
    pub fn planar(x_dim: usize, y_dim: usize) -> Result<Self> {
        Self::new(vec![Factor::mode(X_MODE, x_dim), Factor::mode(Y_MODE, y_dim), Factor::spin(SPIN)])
    }

    /// `(x-mode, y-mode, spin, aux-spin)`.
    pub fn planar_four_level(x_dim: usize, y_dim: usize) -> Result<Self> {
        Self::new(vec![
            Factor::mode(X_MODE, x_dim),
            Factor::mode(Y_MODE, y_dim),
            Factor::spin(SPIN),
            Factor::spin(AUX_SPIN),
        ])
    }

    /// `(x-mode, spin)`.
    pub fn line(x_dim: usize) -> Result<Self> {
        Self::new(vec![Factor::mode(X_MODE, x_dim), Factor::spin(SPIN)])
    }

    pub fn single_mode(dim: usize) -> Result<Self> {
        Self::new(vec![Factor::mode("mode", dim)])
    }

    pub fn single_spin() -> Self {
        Self::new(vec![Factor::spin(SPIN)]).expect("spin layout is valid")
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn factor_index(&self, label: &str) -> Result<usize> {
        self.factors.iter().position(|f| f.label == label).ok_or_else(|| Error::UnknownFactor(label.to_string()))
    }

    pub fn has_factor(&self, label: &str) -> bool {
        self.factors.iter().any(|f| f.label == label)
    }

    pub fn factor(&self, label: &str) -> Result<&Factor> {
        self.factor_index(label).map(|i| &self.factors[i])
    }

    /// Product of the dims of all factors after `index`.
    pub fn stride(&self, index: usize) -> usize {
        self.factors[index + 1..].iter().map(|f| f.dim).product()
    }

    /// Level of factor `index` in basis state `basis_index`.
    pub fn level(&self, basis_index: usize, index: usize) -> usize {
        (basis_index / self.stride(index)) % self.factors[index].dim
    }

    pub fn modes(&self) -> impl Iterator<Item = &Factor> {
        self.factors.iter().filter(|f| f.kind == FactorKind::Mode)
    }
}

impl fmt::Display for HilbertLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|x| format!("{}:{}", x.label, x.dim)).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Dense complex square matrix acting on a layout.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    layout: Arc<HilbertLayout>,
    entries: DMatrix<C64>,
}

impl OperatorMatrix {
    pub fn new(layout: Arc<HilbertLayout>, entries: DMatrix<C64>) -> Result<Self> {
        let d = layout.total_dim();
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, actual: entries.nrows().max(entries.ncols()) });
        }
        Ok(OperatorMatrix { layout, entries })
    }

    pub fn zeros(layout: Arc<HilbertLayout>) -> Self {
        let d = layout.total_dim();
        OperatorMatrix { layout, entries: DMatrix::zeros(d, d) }
    }

    pub fn identity(layout: Arc<HilbertLayout>) -> Self {
        let d = layout.total_dim();
        OperatorMatrix { layout, entries: DMatrix::identity(d, d) }
    }

    pub fn layout(&self) -> &Arc<HilbertLayout> {
        &self.layout
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        OperatorMatrix { layout: self.layout.clone(), entries: self.entries.adjoint() }
    }

    /// `max |M - M^dag|` over all entries.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for j in 0..d {
            for i in 0..=j {
                let e = (self.entries[(i, j)] - self.entries[(j, i)].conj()).norm();
                worst = nan_max(worst, e);
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> f64 {
        self.entries.iter().zip(other.entries.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, nan_max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|a| a.norm()).fold(0.0, nan_max)
    }

    pub fn commutator(&self, other: &OperatorMatrix) -> OperatorMatrix {
        &(self * other) - &(other * self)
    }

    pub fn scaled(&self, c: C64) -> OperatorMatrix {
        OperatorMatrix { layout: self.layout.clone(), entries: &self.entries * c }
    }

    /// Iterate over `(row, col, value)` for every non-zero entry, row-major.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        let d = self.dim();
        (0..d).flat_map(move |i| {
            (0..d).filter_map(move |j| {
                let v = self.entries[(i, j)];
                (v != ZERO).then_some((i, j, v))
            })
        })
    }

    fn assert_same_layout(&self, other: &OperatorMatrix) {
        assert!(self.layout == other.layout, "operator layouts differ: {} vs {}", self.layout, other.layout);
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.assert_same_layout(rhs);
        OperatorMatrix { layout: self.layout.clone(), entries: &self.entries + &rhs.entries }
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.assert_same_layout(rhs);
        OperatorMatrix { layout: self.layout.clone(), entries: &self.entries - &rhs.entries }
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.assert_same_layout(rhs);
        OperatorMatrix { layout: self.layout.clone(), entries: &self.entries * &rhs.entries }
    }
}

impl Mul<C64> for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: C64) -> OperatorMatrix {
        self.scaled(rhs)
    }
}

impl Mul<f64> for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: f64) -> OperatorMatrix {
        self.scaled(C64::new(rhs, 0.0))
    }
}

fn mode_layout(dim: usize) -> Result<Arc<HilbertLayout>> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim, reason: "mode needs dim >= 2".into() });
    }
    Ok(Arc::new(HilbertLayout::single_mode(dim)?))
}

/// Annihilation and creation operators `(a, a^dag)` on a mode truncated at `dim` levels.
pub fn ladder(dim: usize) -> Result<(OperatorMatrix, OperatorMatrix)> {
    let layout = mode_layout(dim)?;
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    let adag = a.adjoint();
    Ok((OperatorMatrix { layout: layout.clone(), entries: a }, OperatorMatrix { layout, entries: adag }))
}

pub fn number(dim: usize) -> Result<OperatorMatrix> {
    let layout = mode_layout(dim)?;
    let entries = DMatrix::from_fn(dim, dim, |i, j| if i == j { C64::new(i as f64, 0.0) } else { ZERO });
    Ok(OperatorMatrix { layout, entries })
}

fn bounded_from_factors(dim: usize, factor: impl Fn(usize) -> f64) -> Result<OperatorMatrix> {
    let layout = mode_layout(dim)?;
    let mut m = DMatrix::zeros(dim, dim);
    // A|n> = sqrt(n) [1 - eta^2 (n-1)/2] |n-1>
    for n in 1..dim {
        m[(n - 1, n)] = C64::new((n as f64).sqrt() * factor(n - 1), 0.0);
    }
    Ok(OperatorMatrix { layout, entries: m })
}

/// Bounded ladder operator `A(eta) = [1 - eta^2 n/2] a`.
pub fn bounded_a(eta: f64, dim: usize) -> Result<OperatorMatrix> {
    if !(eta.is_finite() && eta > 0.0) {
        return Err(Error::param("eta", format!("must be finite and positive, got {eta}")));
    }
    let eta2 = eta * eta;
    bounded_from_factors(dim, |n| 1.0 - eta2 * n as f64 / 2.0)
}

/// `A(eta)` at the blocking value `eta^2 = 2/N`.
///
/// The prefactor is evaluated as `(N - n)/N` so the entry coupling `|N>` and
/// `|N+1>` is exactly zero rather than a rounding residue.
pub fn bounded_a_for_cutoff(cutoff: usize, dim: usize) -> Result<OperatorMatrix> {
    if cutoff < 1 {
        return Err(Error::param("N", "bounded cutoff must be >= 1"));
    }
    let nf = cutoff as f64;
    bounded_from_factors(dim, |n| (nf - n as f64) / nf)
}

/// Lamb-Dicke parameter giving `A^dag(eta)|N> = 0`.
pub fn blocking_eta(cutoff: usize) -> f64 {
    (2.0 / cutoff as f64).sqrt()
}

/// Dimensionless momentum `pbar = i (a^dag - a)`.
pub fn pbar(dim: usize) -> Result<OperatorMatrix> {
    let (a, adag) = ladder(dim)?;
    Ok((&adag - &a).scaled(I))
}

/// Dimensionless position `xbar = a + a^dag`.
pub fn xbar(dim: usize) -> Result<OperatorMatrix> {
    let (a, adag) = ladder(dim)?;
    Ok(&a + &adag)
}

/// Bounded momentum `i [A^dag - A]` at cutoff `N`, dimensionless (multiply by `1/(2 delta)`).
pub fn pbar_bounded(cutoff: usize, dim: usize) -> Result<OperatorMatrix> {
    let a = bounded_a_for_cutoff(cutoff, dim)?;
    Ok((&a.adjoint() - &a).scaled(I))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliAxis {
    X,
    Y,
    Z,
    Plus,
    Minus,
}

pub fn pauli(axis: PauliAxis) -> OperatorMatrix {
    let m = match axis {
        PauliAxis::X => [[ZERO, ONE], [ONE, ZERO]],
        PauliAxis::Y => [[ZERO, -I], [I, ZERO]],
        PauliAxis::Z => [[ONE, ZERO], [ZERO, -ONE]],
        PauliAxis::Plus => [[ZERO, ONE], [ZERO, ZERO]],
        PauliAxis::Minus => [[ZERO, ZERO], [ONE, ZERO]],
    };
    OperatorMatrix { layout: Arc::new(HilbertLayout::single_spin()), entries: DMatrix::from_fn(2, 2, |i, j| m[i][j]) }
}

/// Lift a single-factor operator onto `layout`, identity on every other factor.
pub fn embed(op: &OperatorMatrix, label: &str, layout: &Arc<HilbertLayout>) -> Result<OperatorMatrix> {
    product_operator(layout, &[(label, op)], ONE)
}

/// `coeff * (op_1 (x) op_2 (x) ...)` with identities on unnamed factors.
pub fn product_operator(
    layout: &Arc<HilbertLayout>,
    factors: &[(&str, &OperatorMatrix)],
    coeff: C64,
) -> Result<OperatorMatrix> {
    let mut out = OperatorMatrix::zeros(layout.clone());
    accumulate_product(&mut out, factors, coeff)?;
    Ok(out)
}

/// `target += coeff * (op_1 (x) op_2 (x) ...)`; only non-zero entries are visited.
pub fn accumulate_product(target: &mut OperatorMatrix, factors: &[(&str, &OperatorMatrix)], coeff: C64) -> Result<()> {
    let layout = target.layout.clone();
    let mut per_factor: Vec<Vec<(usize, usize, C64)>> =
        layout.factors().iter().map(|f| (0..f.dim).map(|k| (k, k, ONE)).collect()).collect();
    for (i, (label, op)) in factors.iter().enumerate() {
        let idx = layout.factor_index(label)?;
        if factors[..i].iter().any(|(l, _)| l == label) {
            return Err(Error::InvalidLayout(format!("factor `{label}` named twice")));
        }
        let dim = layout.factors()[idx].dim;
        if op.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: op.dim() });
        }
        per_factor[idx] = op.nonzeros().collect();
    }
    if coeff == ZERO {
        return Ok(());
    }
    let mut stack: Vec<(usize, usize, usize, C64)> = vec![(0, 0, 0, coeff)];
    while let Some((depth, row, col, v)) = stack.pop() {
        if depth == per_factor.len() {
            target.entries[(row, col)] += v;
            continue;
        }
        let d = layout.factors()[depth].dim;
        for &(i, j, w) in &per_factor[depth] {
            stack.push((depth + 1, row * d + i, col * d + j, v * w));
        }
    }
    Ok(())
}

/// Length scale `delta = 1/sqrt(2 m nu)` linking physical and dimensionless operators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessConvention {
    pub delta: f64,
}

impl DimensionlessConvention {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::param("delta", format!("must be positive, got {delta}")));
        }
        Ok(DimensionlessConvention { delta })
    }

    pub fn from_trap(mass: f64, trap_frequency: f64) -> Result<Self> {
        if !(mass > 0.0 && trap_frequency > 0.0) {
            return Err(Error::param("mass/trap_frequency", "must both be positive"));
        }
        Self::new(1.0 / (2.0 * mass * trap_frequency).sqrt())
    }

    /// Physical momentum `p = i (a^dag - a) / (2 delta)`.
    pub fn momentum(&self, dim: usize) -> Result<OperatorMatrix> {
        Ok(pbar(dim)?.scaled(C64::new(1.0 / (2.0 * self.delta), 0.0)))
    }

    pub fn position(&self, dim: usize) -> Result<OperatorMatrix> {
        Ok(xbar(dim)?.scaled(C64::new(self.delta, 0.0)))
    }

    pub fn to_pbar(&self, p: f64) -> f64 {
        2.0 * self.delta * p
    }

    pub fn to_xbar(&self, x: f64) -> f64 {
        x / self.delta
    }
}

/// `<psi|M|psi>` for pure states, `Tr(M rho)` for density matrices.
pub fn expectation(op: &OperatorMatrix, state: &QuantumState) -> Result<C64> {
    if **op.layout() != **state.layout() {
        return Err(Error::LayoutMismatch);
    }
    let m = op.entries();
    Ok(match state {
        QuantumState::Pure { amplitudes, .. } => {
            let mpsi = m * amplitudes;
            amplitudes.dotc(&mpsi)
        }
        QuantumState::Density { matrix, .. } => {
            let d = m.nrows();
            let mut acc = ZERO;
            for i in 0..d {
                for k in 0..d {
                    acc += m[(i, k)] * matrix[(k, i)];
                }
            }
            acc
        }
    })
}

/// Expectation of a single-factor operator without building the embedded matrix.
pub fn factor_expectation(op: &OperatorMatrix, label: &str, state: &QuantumState) -> Result<C64> {
    let layout = state.layout();
    let idx = layout.factor_index(label)?;
    let d = layout.factors()[idx].dim;
    if op.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, actual: op.dim() });
    }
    let after = layout.stride(idx);
    let before = layout.total_dim() / (d * after);
    let nz: Vec<(usize, usize, C64)> = op.nonzeros().collect();
    let mut acc = ZERO;
    match state {
        QuantumState::Pure { amplitudes, .. } => {
            for b in 0..before {
                let base = b * d * after;
                for &(i, j, v) in &nz {
                    let (ri, cj) = (base + i * after, base + j * after);
                    for a in 0..after {
                        acc += amplitudes[ri + a].conj() * v * amplitudes[cj + a];
                    }
                }
            }
        }
        QuantumState::Density { matrix, .. } => {
            // Tr(M rho) = sum M[r, c] rho[c, r]
            for b in 0..before {
                let base = b * d * after;
                for &(i, j, v) in &nz {
                    let (ri, cj) = (base + i * after, base + j * after);
                    for a in 0..after {
                        acc += v * matrix[(cj + a, ri + a)];
                    }
                }
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn basis(dim: usize, n: usize) -> nalgebra::DVector<C64> {
        let mut v = nalgebra::DVector::zeros(dim);
        v[n] = ONE;
        v
    }

    #[test]
    fn ladder_lowers_fock_states() {
        let (a, _) = ladder(4).unwrap();
        let out = a.entries() * basis(4, 3);
        assert_abs_diff_eq!(out[2].re, 3f64.sqrt(), epsilon = 1e-15);
        assert_eq!(out.iter().filter(|z| z.norm() > 0.0).count(), 1);
        let vac = a.entries() * basis(4, 0);
        assert!(vac.iter().all(|z| *z == ZERO));
    }

    #[test]
    fn ladder_rejects_small_dim() {
        assert!(matches!(ladder(1), Err(Error::InvalidDimension { .. })));
        assert!(matches!(pbar(0), Err(Error::InvalidDimension { .. })));
    }

    #[test]
    fn truncated_commutator_closed_form() {
        for dim in 2..9 {
            let (a, adag) = ladder(dim).unwrap();
            let c = a.commutator(&adag);
            for i in 0..dim {
                for j in 0..dim {
                    let expect = if i != j {
                        0.0
                    } else if i + 1 < dim {
                        1.0
                    } else {
                        -((dim - 1) as f64)
                    };
                    assert_abs_diff_eq!(c.get(i, j).re, expect, epsilon = 1e-12);
                    assert_abs_diff_eq!(c.get(i, j).im, 0.0, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn commutator_dim3_by_hand() {
        // a = [[0,1,0],[0,0,r2],[0,0,0]]; a a^dag = diag(1,2,0); a^dag a = diag(0,1,2)
        let (a, adag) = ladder(3).unwrap();
        let c = a.commutator(&adag);
        let diag: Vec<f64> = (0..3).map(|i| c.get(i, i).re).collect();
        assert_abs_diff_eq!(diag[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(diag[1], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(diag[2], -2.0, epsilon = 1e-14);
    }

    #[test]
    fn bounded_a_entries() {
        let a = bounded_a(1.0, 5).unwrap();
        assert_abs_diff_eq!(a.get(1, 2).re, 2f64.sqrt() / 2.0, epsilon = 1e-15);
        assert_eq!(a.get(2, 3), ZERO);
        assert!(bounded_a(0.0, 5).is_err());
        assert!(bounded_a(f64::NAN, 5).is_err());
    }

    #[test]
    fn bounded_adjoint_annihilates_cutoff_level() {
        for n in 1..8 {
            let a = bounded_a_for_cutoff(n, n + 4).unwrap();
            let out = a.adjoint().entries() * basis(n + 4, n);
            assert!(out.iter().all(|z| *z == ZERO), "N = {n}");
        }
    }

    #[test]
    fn bounded_block_is_invariant() {
        for n in 1..6 {
            let dim = n + 5;
            let a = bounded_a_for_cutoff(n, dim).unwrap();
            let adag = a.adjoint();
            for op in [&a, &adag] {
                for i in 0..=n {
                    for j in n + 1..dim {
                        assert_eq!(op.get(i, j), ZERO);
                        assert_eq!(op.get(j, i), ZERO);
                    }
                }
            }
        }
    }

    #[test]
    fn cutoff_form_matches_eta_form() {
        let a1 = bounded_a(blocking_eta(3), 8).unwrap();
        let a2 = bounded_a_for_cutoff(3, 8).unwrap();
        assert!(a1.max_abs_diff(&a2) < 1e-14);
    }

    #[test]
    fn pauli_algebra() {
        let sx = pauli(PauliAxis::X);
        let sq = &sx * &sx;
        assert!(sq.max_abs_diff(&OperatorMatrix::identity(sx.layout().clone())) == 0.0);
        let diff = &pauli(PauliAxis::Plus) - &pauli(PauliAxis::Minus);
        let isy = pauli(PauliAxis::Y).scaled(I);
        assert!(diff.max_abs_diff(&isy) == 0.0);
        // sigma_+ |g> = |e>
        let up = pauli(PauliAxis::Plus).entries() * basis(2, 1);
        assert_eq!(up, basis(2, 0));
    }

    #[test]
    fn embed_spin_on_mode_spin_layout() {
        let layout = Arc::new(HilbertLayout::new(vec![Factor::mode("m", 2), Factor::spin("s")]).unwrap());
        let e = embed(&pauli(PauliAxis::Z), "s", &layout).unwrap();
        let expect = [1.0, -1.0, 1.0, -1.0];
        for (i, &d) in expect.iter().enumerate() {
            for j in 0..4 {
                let v = if i == j { d } else { 0.0 };
                assert_eq!(e.get(i, j), C64::new(v, 0.0));
            }
        }
    }

    #[test]
    fn embedded_modes_commute_and_identity_embeds_to_identity() {
        let layout = Arc::new(HilbertLayout::planar(3, 4).unwrap());
        let ax = embed(&ladder(3).unwrap().0, X_MODE, &layout).unwrap();
        let ay = embed(&ladder(4).unwrap().0, Y_MODE, &layout).unwrap();
        assert_eq!(ax.commutator(&ay).max_abs(), 0.0);
        let id = OperatorMatrix::identity(Arc::new(HilbertLayout::single_mode(4).unwrap()));
        let e = embed(&id, Y_MODE, &layout).unwrap();
        assert_eq!(e, OperatorMatrix::identity(layout.clone()));
    }

    #[test]
    fn embed_errors() {
        let layout = Arc::new(HilbertLayout::planar(3, 3).unwrap());
        let a = ladder(4).unwrap().0;
        assert!(matches!(embed(&a, X_MODE, &layout), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(embed(&a, "z", &layout), Err(Error::UnknownFactor(_))));
    }

    #[test]
    fn embed_is_homomorphism() {
        let layout = Arc::new(HilbertLayout::planar(4, 3).unwrap());
        let (a, adag) = ladder(4).unwrap();
        let p = pbar(4).unwrap();
        for (m, n) in [(&a, &adag), (&p, &a), (&adag, &p)] {
            let lhs = embed(&(m * n), X_MODE, &layout).unwrap();
            let rhs = &embed(m, X_MODE, &layout).unwrap() * &embed(n, X_MODE, &layout).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-13);
        }
    }

    #[test]
    fn position_momentum_hermitian_and_canonical() {
        for dim in 2..10 {
            let x = xbar(dim).unwrap();
            let p = pbar(dim).unwrap();
            assert_eq!(x.hermiticity_error(), 0.0);
            assert_eq!(p.hermiticity_error(), 0.0);
            // [x, p] = 2i diag(1, ..., 1, -(dim-1))
            let c = x.commutator(&p);
            for i in 0..dim {
                for j in 0..dim {
                    let expect = if i != j {
                        ZERO
                    } else if i + 1 < dim {
                        C64::new(0.0, 2.0)
                    } else {
                        C64::new(0.0, -2.0 * (dim - 1) as f64)
                    };
                    assert!((c.get(i, j) - expect).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn vacuum_momentum_variance() {
        let p = pbar(6).unwrap();
        let p2 = &p * &p;
        assert_abs_diff_eq!(p2.get(0, 0).re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn physical_momentum_scaling() {
        let conv = DimensionlessConvention::from_trap(2.0, 0.5).unwrap();
        assert_abs_diff_eq!(conv.delta, 0.5f64.sqrt(), epsilon = 1e-15);
        let p = conv.momentum(5).unwrap();
        let pb = pbar(5).unwrap();
        // pbar = 2 delta p
        assert!(p.scaled(C64::new(2.0 * conv.delta, 0.0)).max_abs_diff(&pb) < 1e-15);
        assert!(DimensionlessConvention::new(0.0).is_err());
    }

    #[test]
    fn layout_validation() {
        assert!(HilbertLayout::new(vec![]).is_err());
        assert!(HilbertLayout::new(vec![Factor::mode("x", 1)]).is_err());
        assert!(HilbertLayout::new(vec![Factor { kind: FactorKind::Spin, dim: 3, label: "s".into() }]).is_err());
        assert!(HilbertLayout::new(vec![Factor::mode("x", 3), Factor::spin("x")]).is_err());
        let l = HilbertLayout::planar(3, 5).unwrap();
        assert_eq!(l.total_dim(), 30);
        assert_eq!(l.stride(0), 10);
        assert_eq!(l.level(17, 0), 1);
        assert_eq!(l.level(17, 1), 3);
        assert_eq!(l.level(17, 2), 1);
    }
}
