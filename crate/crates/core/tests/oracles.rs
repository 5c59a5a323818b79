//! Integrators checked against solutions computed another way.

use std::sync::Arc;

use nalgebra::DMatrix;

use ionso_core::dynamics::{damping_operators, ExactPropagator};
use ionso_core::{
    build, evolve, evolve_lindblad, BoundedForm, Damping, EvolutionConfig, HilbertLayout, Method, ModelSpec,
    Observable, Observer, OperatorMatrix, QuantumState, StateSpec, C64,
};

fn planar(dx: usize, dy: usize) -> Arc<HilbertLayout> {
    Arc::new(HilbertLayout::planar(dx, dy).unwrap())
}

fn bounded_n1() -> ModelSpec {
    ModelSpec::BoundedRashbaDresselhaus {
        cutoff_x: 1,
        cutoff_y: 1,
        alpha_x: 0.0,
        alpha_y: 0.0,
        beta_x: 1.0,
        beta_y: 1.0,
        form: BoundedForm::Restricted,
    }
}

/// Column-stacked Liouvillian: `vec(A rho B) = (B^T kron A) vec(rho)`.
fn dense_liouvillian(h: &DMatrix<C64>, collapse: &[(DMatrix<C64>, f64)]) -> DMatrix<C64> {
    let d = h.nrows();
    let id = DMatrix::<C64>::identity(d, d);
    let i = C64::new(0.0, 1.0);
    let mut l = (id.kronecker(h) - h.transpose().kronecker(&id)) * (-i);
    for (c, rate) in collapse {
        let cdc = c.adjoint() * c;
        let (r, half) = (C64::new(*rate, 0.0), C64::new(0.5, 0.0));
        l += (c.conjugate().kronecker(c) - (id.kronecker(&cdc) + cdc.transpose().kronecker(&id)) * half) * r;
    }
    l
}

#[test]
fn lindblad_matches_liouvillian_exponential() {
    let layout = planar(3, 3);
    let h = build(&bounded_n1(), &layout).unwrap();
    let psi = ionso_core::product(
        &[StateSpec::Fock { n: 1 }, StateSpec::Fock { n: 0 }, StateSpec::Spinor { a: 1.0, b: 1.0, phi: 0.3 }],
        &layout,
    )
    .unwrap();
    let damping: Vec<Damping> = ["x", "y"].map(|m| Damping { mode: m.into(), rate: 0.05 }).to_vec();
    let collapse = damping_operators(&layout, &damping).unwrap();
    let config = EvolutionConfig::new(5.0).with_dt(1e-3).with_sample_every(100);
    let observer = Observer::new(&layout, &[]).unwrap();
    let run = evolve_lindblad(&h, &collapse, &psi, &config, &observer).unwrap();
    let QuantumState::Density { matrix: rho, .. } = run.final_state else { panic!("density expected") };

    let dense: Vec<(DMatrix<C64>, f64)> = collapse.iter().map(|(c, r)| (c.entries().clone(), *r)).collect();
    let gen = dense_liouvillian(h.entries(), &dense);
    let QuantumState::Density { matrix: rho0, .. } = psi.to_density() else { unreachable!() };
    let d = rho0.nrows();
    let v0 = DMatrix::from_column_slice(d * d, 1, rho0.as_slice());
    let v = (gen * C64::new(5.0, 0.0)).exp() * v0;
    let oracle = DMatrix::from_column_slice(d, d, v.as_slice());

    let diff = (&rho - &oracle).iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(diff < 1e-6, "max element difference {diff:.3e}");
    // the dynamics are not trivial: population moved and purity dropped
    assert!((&oracle - &rho0).iter().map(|z| z.norm()).fold(0.0, f64::max) > 1e-2);
    assert!((oracle.clone() * oracle.clone()).trace().re < 0.99);
}

#[test]
fn damped_coherent_amplitude_decays_exponentially() {
    let layout = Arc::new(HilbertLayout::single_mode(20).unwrap());
    let h = OperatorMatrix::zeros(layout.clone());
    let theta = C64::new(0.8, -0.6);
    let zeta = 0.3;
    let psi = ionso_core::product(&[StateSpec::Coherent { theta }], &layout).unwrap();
    let mut config = EvolutionConfig::new(6.0).with_dt(1e-3).with_sample_every(50);
    config.dissipation = vec![Damping { mode: "mode".into(), rate: zeta }];
    let observer = Observer::new(&layout, &[]).unwrap();
    let run = evolve(&h, &psi, &config, &observer).unwrap();
    let mut worst: f64 = 0.0;
    for (t, s) in run.record.times.iter().zip(&run.record.samples) {
        // <a> = (<xbar> + i <pbar>) / 2
        let a = C64::new(s.get(Observable::X), s.get(Observable::Px)) / 2.0;
        let expected = theta * (-zeta * t / 2.0).exp();
        worst = worst.max((a - expected).norm());
    }
    assert!(worst < 1e-6, "{worst:.3e}");
    assert_eq!(run.record.len(), 121);
}

#[test]
fn bounded_jc_rabi_transfer() {
    let layout = Arc::new(HilbertLayout::line(4).unwrap());
    let g = 0.7;
    let spec = ModelSpec::BoundedJc {
        cutoff: 1,
        omega: 1.0,
        phi: 0.25,
        k: 1,
        effective: Some(g),
        form: BoundedForm::Restricted,
    };
    let h = build(&spec, &layout).unwrap();
    // |1, g> couples to |0, e> with strength g; spin index 0 is |e>
    let psi = ionso_core::product(&[StateSpec::Fock { n: 1 }, StateSpec::Spinor { a: 0.0, b: 1.0, phi: 0.0 }], &layout)
        .unwrap();
    let observer = Observer::new(&layout, &spec.bounded_cutoffs()).unwrap();
    let run = evolve(&h, &psi, &EvolutionConfig::new(10.0).with_dt(1e-3), &observer).unwrap();
    let mut worst: f64 = 0.0;
    for (t, s) in run.record.times.iter().zip(&run.record.samples) {
        let excited = (1.0 + s.get(Observable::Sz)) / 2.0;
        worst = worst.max((excited - (g * t).sin().powi(2)).abs());
    }
    assert!(worst < 1e-6, "{worst:.3e}");
    assert!(run.record.max(Observable::Leakage) < 1e-12);
}

#[test]
fn rk4_matches_exact_propagator() {
    let layout = Arc::new(HilbertLayout::line(40).unwrap());
    let spec = ModelSpec::Dirac1d { gamma: 1.0, stark: 0.7, delta_x: 1.0 };
    let h = build(&spec, &layout).unwrap();
    let psi = ionso_core::product(
        &[StateSpec::Coherent { theta: C64::new(0.3, 0.8) }, StateSpec::Spinor { a: 0.6, b: 0.8, phi: 1.1 }],
        &layout,
    )
    .unwrap();
    let observer = Observer::new(&layout, &[]).unwrap();
    let config = EvolutionConfig::new(3.0).with_dt(1e-3);
    let rk4 = evolve(&h, &psi, &config, &observer).unwrap();
    let exact = evolve(&h, &psi, &config.clone().with_method(Method::Exact), &observer).unwrap();
    assert_eq!(rk4.record.times, exact.record.times);
    let report = ionso_core::compare(&rk4.record, &exact.record, &Observable::EXPECTATIONS).unwrap();
    assert!(report.max_peak() < 1e-8, "{report:?}");

    let QuantumState::Pure { amplitudes: a, .. } = &psi else { unreachable!() };
    let prop = ExactPropagator::new(&h).unwrap();
    let u = prop.matrix(0.4);
    assert!((prop.apply(a, 0.4) - &u * a).norm() < 1e-12);
    assert!((&u * u.adjoint() - DMatrix::<C64>::identity(80, 80)).norm() < 1e-10);
}

#[test]
fn zero_damping_lindblad_tracks_unitary() {
    let layout = planar(8, 8);
    let h = build(&bounded_n1(), &layout).unwrap();
    let psi = ionso_core::product(
        &[
            StateSpec::Coherent { theta: C64::new(0.3, 0.0) },
            StateSpec::Fock { n: 1 },
            StateSpec::Spinor { a: 1.0, b: 1.0, phi: -std::f64::consts::FRAC_PI_2 },
        ],
        &layout,
    )
    .unwrap();
    let observer = Observer::new(&layout, &bounded_n1().bounded_cutoffs()).unwrap();
    let config = EvolutionConfig::new(4.0).with_dt(2e-3).with_sample_every(20);
    let unitary = evolve(&h, &psi, &config, &observer).unwrap();
    let lindblad = evolve_lindblad(&h, &[], &psi, &config, &observer).unwrap();
    let report = ionso_core::compare(&unitary.record, &lindblad.record, &Observable::EXPECTATIONS).unwrap();
    assert!(report.max_peak() < 1e-10, "{report:?}");
    assert!((lindblad.record.drift(Observable::Purity)).abs() < 1e-10);
}
