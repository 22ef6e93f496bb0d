use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nilrigid::algebras::{heisenberg3, heisenberg5, upper_triangular4};
use nilrigid::cohomology::cohomology_dim;
use nilrigid::scalar::rat;
use std::hint::black_box;

fn group_law(c: &mut Criterion) {
    let mut group = c.benchmark_group("group_law");
    for (name, alg) in [("h3", heisenberg3()), ("h5", heisenberg5()), ("ut4", upper_triangular4())] {
        group.bench_with_input(BenchmarkId::new("compile", name), &alg, |b, alg| b.iter(|| alg.group_law()));
        let law = alg.group_law();
        let n = alg.dim();
        let g: Vec<f64> = (0..n).map(|i| 0.1 + 0.37 * i as f64).collect();
        let h: Vec<f64> = (0..n).map(|i| 0.9 - 0.21 * i as f64).collect();
        group.bench_function(BenchmarkId::new("multiply_f64", name), |b| b.iter(|| law.multiply_f64(black_box(&g), black_box(&h))));
        let gq: Vec<_> = (0..n).map(|i| rat(2 * i as i64 + 1, 3)).collect();
        let hq: Vec<_> = (0..n).map(|i| rat(5 - i as i64, 7)).collect();
        group.bench_function(BenchmarkId::new("multiply_exact", name), |b| b.iter(|| law.multiply(black_box(&gq), black_box(&hq))));
    }
    group.finish();
}

fn cohomology(c: &mut Criterion) {
    let ut4 = upper_triangular4();
    c.bench_function("cohomology/ut4_all_degrees", |b| b.iter(|| (0..=6).map(|p| cohomology_dim(&ut4, p).unwrap()).sum::<usize>()));
}

criterion_group!(benches, group_law, cohomology);
criterion_main!(benches);
