use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use itframe::*;
use itframe_bench::fejer_instance;

const SIZES: [(usize, usize); 3] = [(64, 80), (128, 160), (256, 320)];

fn gram(c: &mut Criterion) {
    let mut group = c.benchmark_group("gram_matrix");
    for (n, k) in SIZES {
        let (g, lambda) = fejer_instance(n, k, 1);
        for mode in [TransformMode::Quadrature, TransformMode::Analytic] {
            group.bench_with_input(BenchmarkId::new(format!("{mode:?}"), format!("N{n}_K{k}")), &(), |b, _| {
                b.iter(|| gram_matrix(&g, &lambda, mode).unwrap())
            });
        }
    }
    group.finish();
}

fn bounds(c: &mut Criterion) {
    let mut group = c.benchmark_group("frame_bounds");
    for (n, k) in SIZES {
        let (g, lambda) = fejer_instance(n, k, 2);
        let sys = translate_system(&g, &lambda);
        group.bench_function(format!("N{n}_K{k}"), |b| b.iter(|| frame_bounds(&sys, 1e-10).unwrap()));
    }
    group.finish();
}

fn duals(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("canonical_dual");
    group.sample_size(20);
    for (n, k) in SIZES {
        let (g, lambda) = fejer_instance(n, k, 3);
        for method in [DualMethod::ExplicitFormula, DualMethod::PseudoInverseOracle] {
            group.bench_with_input(BenchmarkId::new(format!("{method:?}"), format!("N{n}_K{k}")), &(), |b, _| {
                b.iter(|| canonical_dual_translates(&g, &lambda, method, &tol).unwrap())
            });
        }
        group.bench_function(BenchmarkId::new("Parseval", format!("N{n}_K{k}")), |b| {
            b.iter(|| parseval_system(&g, &lambda, &tol).unwrap())
        });
    }
    group.finish();
}

fn factorizations(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("verify_factorizations");
    group.sample_size(10);
    for (n, k) in SIZES {
        let (g, lambda) = fejer_instance(n, k, 4);
        group.bench_function(format!("N{n}_K{k}"), |b| b.iter(|| verify_factorizations(&g, &lambda, &tol)));
    }
    group.finish();
}

criterion_group!(benches, gram, bounds, duals, factorizations);
criterion_main!(benches);
