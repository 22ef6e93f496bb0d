use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nilrigid::solver::{reduce_cocycle, solve_rotation_coboundary, RotationOptions, SolverOptions};
use nilrigid_bench::{h3_cocycle, h3_pair, trig_samples};
use std::hint::black_box;

fn rotation(c: &mut Criterion) {
    let mut group = c.benchmark_group("rotation_solve");
    let a = 2f64.sqrt();
    for m in [64usize, 256, 1024] {
        let f = trig_samples(m, 8);
        let opts = RotationOptions { modes: m / 2, tol: 1e-6, divisor_floor: 1e-9, noise_floor: 0.0 };
        group.bench_with_input(BenchmarkId::from_parameter(m), &f, |b, f| b.iter(|| solve_rotation_coboundary(black_box(f), a, opts).unwrap()));
    }
    group.finish();
}

fn reduction(c: &mut Criterion) {
    let pair = h3_pair();
    let mut group = c.benchmark_group("reduce_cocycle");
    group.sample_size(10);
    for (res, modes) in [([32, 16, 16], 8), ([64, 32, 32], 16)] {
        let cocycle = h3_cocycle(&pair, res);
        let opts = SolverOptions { modes, ..SolverOptions::default() };
        let label = format!("{}x{}x{}", res[0], res[1], res[2]);
        group.bench_function(label, |b| b.iter(|| reduce_cocycle(black_box(&cocycle), &pair, &opts).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, rotation, reduction);
criterion_main!(benches);
