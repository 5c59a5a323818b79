//! Fixed workloads shared by the benchmarks.

use std::sync::Arc;

use ionso_core::{build, product, BoundedForm, HilbertLayout, ModelSpec, OperatorMatrix, QuantumState, StateSpec, C64};

/// Bounded Rashba-Dresselhaus system with a coherent start, `dim` levels per mode.
pub fn bounded_system(dim: usize) -> (OperatorMatrix, QuantumState) {
    let layout = Arc::new(HilbertLayout::planar(dim, dim).expect("layout"));
    let spec = ModelSpec::BoundedRashbaDresselhaus {
        cutoff_x: 1,
        cutoff_y: 1,
        alpha_x: 0.0,
        alpha_y: 0.0,
        beta_x: 1.0,
        beta_y: 1.0,
        form: BoundedForm::Restricted,
    };
    let h = build(&spec, &layout).expect("model");
    let psi = product(
        &[
            StateSpec::Coherent { theta: C64::new(1.0, 0.0) },
            StateSpec::Coherent { theta: C64::new(1.0, 0.0) },
            StateSpec::Spinor { a: 1.0, b: 1.0, phi: -std::f64::consts::FRAC_PI_2 },
        ],
        &layout,
    )
    .expect("state");
    (h, psi)
}

/// Rashba system with a momentum packet along `x`.
pub fn rashba_system(x_dim: usize, y_dim: usize) -> (OperatorMatrix, QuantumState) {
    let layout = Arc::new(HilbertLayout::planar(x_dim, y_dim).expect("layout"));
    let spec = ModelSpec::Rashba2d { alpha_x: 2.0, alpha_y: 0.4, delta_x: 1.0, delta_y: 1.0 };
    let h = build(&spec, &layout).expect("model");
    let psi = product(
        &[
            StateSpec::GaussianMomentum { p0: 2.0, mu: 0.1 },
            StateSpec::Fock { n: 0 },
            StateSpec::Spinor { a: 0.8, b: 0.6, phi: std::f64::consts::FRAC_PI_2 },
        ],
        &layout,
    )
    .expect("state");
    (h, psi)
}
