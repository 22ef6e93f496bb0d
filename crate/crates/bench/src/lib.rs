//! Shared fixtures for the benchmarks.

use nilrigid::algebras::heisenberg3;
use nilrigid::lattices::{build_diophantine_pair, GradedStructure, LatticePair, NumberField, PairOptions};
use nilrigid::solver::testfns::{generate_cocycle, TestFunction, TransferSpec};
use nilrigid::solver::{CocycleData, Grid};

/// The graded h3 pair over `Q(2^(1/3))`.
pub fn h3_pair() -> LatticePair {
    let h3 = heisenberg3();
    let graded = GradedStructure::new(&h3, vec![2, 1, 1]).expect("h3 grading");
    let field = NumberField::from_i64(&[-2, 0, 0, 1], None).expect("x^3 - 2");
    build_diophantine_pair(&h3, &graded, &field, &PairOptions::default()).expect("h3 pair")
}

/// A smooth coboundary plus homomorphism on `pair` sampled at `resolution`.
pub fn h3_cocycle(pair: &LatticePair, resolution: [usize; 3]) -> CocycleData {
    let spec = TransferSpec::RandomBaseTorus { bandwidth: 4, amplitude: 1.0, seed: 11 };
    let p = TestFunction::new(&spec, pair.algebra()).expect("transfer function");
    generate_cocycle(pair, &Grid::new(resolution.to_vec()), &[0.0, 0.3, -0.7], &p).expect("cocycle")
}

/// Samples of a bandwidth-`bw` trigonometric polynomial on `m` points of the circle.
pub fn trig_samples(m: usize, bw: usize) -> Vec<f64> {
    (0..m)
        .map(|j| {
            let s = j as f64 / m as f64;
            (1..=bw).map(|k| (2.0 * std::f64::consts::PI * k as f64 * s + k as f64).cos() / k as f64).sum()
        })
        .collect()
}
