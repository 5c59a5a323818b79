use std::sync::Arc;

use proptest::prelude::*;

use ionso_core::analytic::{AnalyticParams, SpinExpectations};
use ionso_core::{
    build, closure_metric, evolve, product, BoundedForm, EvolutionConfig, HilbertLayout, ModelSpec, Observable,
    Observer, StateSpec, C64,
};

fn coupling() -> impl Strategy<Value = f64> {
    -1.5f64..1.5
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn continuum_models_are_hermitian_and_conserve_norm_energy_momentum(
        ax in coupling(), ay in coupling(), bx in coupling(), by in coupling(),
        spin_a in 0.0f64..1.0, spin_phi in -3.0f64..3.0,
    ) {
        let layout = Arc::new(HilbertLayout::planar(14, 14).unwrap());
        let spec = ModelSpec::RashbaDresselhaus { alpha_x: ax, alpha_y: ay, beta_x: bx, beta_y: by, delta_x: 1.0, delta_y: 1.0 };
        let h = build(&spec, &layout).unwrap();
        prop_assert!(h.hermiticity_error() == 0.0);
        let psi = product(
            &[
                StateSpec::Coherent { theta: C64::new(0.2, 0.3) },
                StateSpec::Fock { n: 0 },
                StateSpec::Spinor { a: spin_a, b: 1.0 - spin_a * spin_a / 2.0, phi: spin_phi },
            ],
            &layout,
        ).unwrap();
        let observer = Observer::new(&layout, &[]).unwrap();
        let run = evolve(&h, &psi, &EvolutionConfig::new(0.5).with_dt(1e-3).with_sample_every(50), &observer).unwrap();
        let r = &run.record;
        prop_assert!(r.drift(Observable::Trace) < 1e-9);
        prop_assert!(r.energy_drift() < 1e-8);
        prop_assert!(r.drift(Observable::Px) < 1e-10, "px drift {}", r.drift(Observable::Px));
        prop_assert!(r.drift(Observable::Py) < 1e-10, "py drift {}", r.drift(Observable::Py));
        for s in &r.samples {
            let bloch = s.get(Observable::Sx).hypot(s.get(Observable::Sy)).hypot(s.get(Observable::Sz));
            prop_assert!(bloch <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn bounded_restricted_never_leaks(bx in coupling(), by in coupling(), n in 1usize..3, k in 0usize..3) {
        let layout = Arc::new(HilbertLayout::planar(5, 5).unwrap());
        let spec = ModelSpec::BoundedRashbaDresselhaus {
            cutoff_x: n, cutoff_y: n, alpha_x: 0.3, alpha_y: -0.2, beta_x: bx, beta_y: by, form: BoundedForm::Restricted,
        };
        let h = build(&spec, &layout).unwrap();
        let psi = product(
            &[StateSpec::Fock { n: k.min(n) }, StateSpec::Fock { n: 0 }, StateSpec::Spinor { a: 1.0, b: 0.5, phi: 0.2 }],
            &layout,
        ).unwrap();
        let observer = Observer::new(&layout, &spec.bounded_cutoffs()).unwrap();
        let run = evolve(&h, &psi, &EvolutionConfig::new(2.0).with_dt(1e-2), &observer).unwrap();
        prop_assert!(run.record.max(Observable::Leakage) < 1e-12);
    }

    #[test]
    fn lissajous_closes_for_rational_squares(p in 1u32..9, q in 1u32..9) {
        let varpi = (f64::from(p) / f64::from(q)).powi(2);
        let params = AnalyticParams::lissajous(varpi);
        // x turns at varpi, y at sqrt(varpi); both complete whole turns after 2 pi q^2 / p
        let period = 2.0 * std::f64::consts::PI * f64::from(q * q) / f64::from(p);
        let tau: Vec<f64> = (0..=2000).map(|k| 2.0 * period * k as f64 / 2000.0).collect();
        let curve = ionso_core::analytic::traj_eq12(&params, &tau).unwrap();
        prop_assert!(closure_metric(&curve.tau, &curve.x, &curve.y, period).unwrap() < 1e-9);
    }
}

#[test]
fn spin_expectations_are_a_unit_vector_for_pure_spinors() {
    for (a, b, phi) in [(1.0, 0.0, 0.0), (0.8, 0.6, 1.0), (1.0, 1.0, -1.57)] {
        let s = SpinExpectations::from_spinor(a, b, phi);
        assert!((s.sx * s.sx + s.sy * s.sy + s.sz * s.sz - 1.0).abs() < 1e-14);
    }
}
