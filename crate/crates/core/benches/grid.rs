use brown_core::brown_map::{density_field_with, EllipticParams};
use brown_core::subordination::free_convolution_law;
use brown_core::{Exec, Measure};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn grids(c: &mut Criterion) {
    let m = Measure::cauchy(0.0, 1.0).unwrap();
    let p = EllipticParams::new(0.25, 0.75).unwrap();

    let mut g = c.benchmark_group("density_field");
    g.sample_size(10);
    for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        g.bench_with_input(BenchmarkId::new(name, 256), &exec, |b, &exec| {
            b.iter(|| density_field_with(&m, &p, 256, None, exec).unwrap())
        });
    }
    g.finish();

    let mut g = c.benchmark_group("free_convolution_law");
    g.sample_size(10);
    for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        g.bench_with_input(BenchmarkId::new(name, 512), &exec, |b, &exec| {
            b.iter(|| free_convolution_law(&m, 1.0, 512, None, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, grids);
criterion_main!(benches);
