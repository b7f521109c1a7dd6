use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use diffh2::graph::connected_spectrum;
use diffh2::matkernel::{default_eps, expm, solve_lyapunov, solve_riccati};
use diffh2::network::quadrature_global_cost_default;
use diffh2::{build_closed_loop, certify_network, design_protocol, Matrix, Method};
use diffh2_bench::{integrator_chain, ring, stable_matrix};
use std::hint::black_box;

fn lyapunov(c: &mut Criterion) {
    let mut group = c.benchmark_group("lyapunov");
    for n in [4, 8, 16] {
        let a = stable_matrix(n);
        let q = Matrix::identity(n, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| solve_lyapunov(black_box(&a), black_box(&q)).unwrap())
        });
    }
    group.finish();
}

fn riccati(c: &mut Criterion) {
    let mut group = c.benchmark_group("riccati");
    for n in [2, 4, 8] {
        let agent = integrator_chain(n);
        let bt = agent.b.clone();
        let q = agent.c.transpose() * &agent.c;
        let eps = default_eps(&q);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| solve_riccati(black_box(&agent.a), &bt, &q, eps).unwrap())
        });
    }
    group.finish();
}

fn design_pipeline(c: &mut Criterion) {
    let agent = integrator_chain(3);
    let g = ring(10);
    c.bench_function("design_and_certify/n3_ring10", |b| {
        b.iter(|| {
            let s = connected_spectrum(black_box(&g)).unwrap();
            let gain = design_protocol(&agent, &s, 1e9, Method::LowGain, None).unwrap();
            certify_network(&agent, &s, &gain.k, 1e9).unwrap()
        })
    });
}

fn network_kernels(c: &mut Criterion) {
    let agent = integrator_chain(2);
    let g = ring(8);
    let s = connected_spectrum(&g).unwrap();
    let gain = design_protocol(&agent, &s, 1e9, Method::LowGain, None).unwrap();
    let net = build_closed_loop(&agent, &g, &gain.k).unwrap();
    c.bench_function("expm/network_n2_ring8", |b| {
        b.iter(|| expm(black_box(&net.atilde), 0.01))
    });
    c.bench_function("adaptive_quadrature/n2_ring8", |b| {
        b.iter(|| quadrature_global_cost_default(black_box(&net)).unwrap())
    });
}

criterion_group!(benches, lyapunov, riccati, design_pipeline, network_kernels);
criterion_main!(benches);
