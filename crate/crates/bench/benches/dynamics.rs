use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ionso_bench::{bounded_system, rashba_system};
use ionso_core::dynamics::ExactPropagator;
use ionso_core::{evolve, evolve_unitary, Damping, EvolutionConfig, Method, Observer};

fn unitary(c: &mut Criterion) {
    let mut group = c.benchmark_group("unitary");
    group.sample_size(10);
    for dim in [8, 15] {
        let (h, psi) = bounded_system(dim);
        let obs = Observer::new(h.layout(), &[]).unwrap();
        let cfg = EvolutionConfig::new(5.0);
        group.bench_with_input(BenchmarkId::new("rk4_bounded", dim), &dim, |b, _| {
            b.iter(|| evolve_unitary(&h, &psi, &cfg, &obs).unwrap())
        });
        let exact = cfg.clone().with_method(Method::Exact);
        group.bench_with_input(BenchmarkId::new("exact_bounded", dim), &dim, |b, _| {
            b.iter(|| evolve_unitary(&h, &psi, &exact, &obs).unwrap())
        });
    }
    let (h, psi) = rashba_system(61, 24);
    let obs = Observer::new(h.layout(), &[]).unwrap();
    let mut cfg = EvolutionConfig::new(1.0);
    cfg.tail_exempt.push("x".into());
    group.bench_function("rk4_rashba_packet", |b| b.iter(|| evolve_unitary(&h, &psi, &cfg, &obs).unwrap()));
    group.finish();
}

fn eigensolve(c: &mut Criterion) {
    let (h, _) = bounded_system(15);
    c.bench_function("eigendecomposition_450", |b| b.iter(|| ExactPropagator::new(&h).unwrap()));
}

fn lindblad(c: &mut Criterion) {
    let mut group = c.benchmark_group("lindblad");
    group.sample_size(10);
    let (h, psi) = bounded_system(15);
    let obs = Observer::new(h.layout(), &[]).unwrap();
    let mut cfg = EvolutionConfig::new(1.0).with_dt(0.01);
    cfg.dissipation = vec![Damping { mode: "x".into(), rate: 1e-4 }, Damping { mode: "y".into(), rate: 1e-4 }];
    group.bench_function("bounded_15x15", |b| b.iter(|| evolve(&h, &psi, &cfg, &obs).unwrap()));
    group.finish();
}

criterion_group!(benches, unitary, eigensolve, lindblad);
criterion_main!(benches);
