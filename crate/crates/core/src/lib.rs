//! Trapped-ion spin-orbit dynamics on truncated Fock spaces.
//!
//! The crate builds Rashba, Dresselhaus, Dirac-type and bounded spin-orbit
//! Hamiltonians for one ion with two vibrational modes, evolves initial states
//! unitarily or under vibrational damping, and evaluates the closed-form mean
//! trajectories those models predict (zitterbewegung, locked motion and
//! Lissajous curves).
//!
//! ```
//! use std::sync::Arc;
//! use ionso_core::{build, product, EvolutionConfig, HilbertLayout, ModelSpec, Observer, StateSpec, C64};
//!
//! let layout = Arc::new(HilbertLayout::planar(12, 6).unwrap());
//! let spec = ModelSpec::RashbaDresselhaus {
//!     alpha_x: 1.0, alpha_y: 1.0, beta_x: 1.0, beta_y: 1.0, delta_x: 1.0, delta_y: 1.0,
//! };
//! let h = build(&spec, &layout).unwrap();
//! let psi = product(
//!     &[
//!         StateSpec::Coherent { theta: C64::new(0.0, 0.5) },
//!         StateSpec::Fock { n: 0 },
//!         StateSpec::Spinor { a: 1.0, b: 0.0, phi: 0.0 },
//!     ],
//!     &layout,
//! )
//! .unwrap();
//! let observer = Observer::new(&layout, &[]).unwrap();
//! let run = ionso_core::evolve(&h, &psi, &EvolutionConfig::new(0.5).with_dt(0.01), &observer).unwrap();
//! assert_eq!(run.record.len(), 6);
//! ```

// `!(x > 0.0)` is how NaN gets rejected alongside the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod analytic;
pub mod dynamics;
pub mod error;
pub mod hilbert;
pub mod models;
mod numeric;
pub mod sparse;
pub mod states;

pub use num_complex::Complex64 as C64;

pub use analysis::{closure_metric, compare, dominant_frequencies, rationalize, ComparisonReport, SpectrumPeak};
pub use analytic::{AnalyticParams, Axis, Curve, FrequencyForm, MomentumMoments, SpinExpectations};
pub use dynamics::{
    evolve, evolve_lindblad, evolve_unitary, record_observables, Damping, EvolutionConfig, Method, Observable,
    Observer, Sample, TrajectoryRecord,
};
pub use error::{Error, Result};
pub use hilbert::{expectation, HilbertLayout, OperatorMatrix};
pub use models::{build, BoundedForm, ModelSpec};
pub use states::{product, QuantumState, StateSpec};
