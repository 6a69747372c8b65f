use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use filtra::invariants::{profile, profile_oracle};
use filtra::persistence::barcode;
use filtra::random::random_complex;
use filtra::verify::DEFAULT_GRID;

fn reduction_benchmark(c: &mut Criterion) {
    let mut group = c.benchmark_group("barcode");
    for &n in &[16usize, 64, 256] {
        let complex = random_complex(n, &DEFAULT_GRID, 0.5, 42);
        group.bench_with_input(BenchmarkId::from_parameter(n), &complex, |b, complex| {
            b.iter(|| barcode(black_box(complex)).unwrap())
        });
    }
    group.finish();
}

fn profile_routes_benchmark(c: &mut Criterion) {
    let complex = random_complex(12, &DEFAULT_GRID, 0.5, 7);
    c.bench_function("profile via barcode (12 gens)", |b| {
        b.iter(|| profile(black_box(&complex)).unwrap())
    });
    c.bench_function("profile via rank oracle (12 gens)", |b| {
        b.iter(|| profile_oracle(black_box(&complex)).unwrap())
    });
}

criterion_group!(benches, reduction_benchmark, profile_routes_benchmark);
criterion_main!(benches);
