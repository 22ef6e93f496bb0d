//! Sanity checks on test functions and constant forms.

use rayon::prelude::*;

use super::grid::Grid;
use crate::lattices::flatness_defect;
use crate::lie::LieAlgebra;

/// `max |Q(γx) - Q(x)|` over grid nodes `x` and `γ = e^{±X_i}`. `Q` is evaluated at the raw
/// translated coordinates, so a formula that is not Γ-invariant shows up as a large residual.
pub fn invariance_check(alg: &LieAlgebra, grid: &Grid, q: impl Fn(&[f64]) -> f64 + Sync) -> f64 {
    let law = alg.group_law();
    let n = alg.dim();
    (0..grid.len())
        .into_par_iter()
        .map(|l| {
            let x = grid.point(l);
            let qx = q(&x);
            let mut worst: f64 = 0.0;
            for i in 0..n {
                for s in [1.0, -1.0] {
                    let mut g = vec![0.0; n];
                    g[i] = s;
                    worst = worst.max((q(&law.multiply_f64(&g, &x)) - qx).abs());
                }
            }
            worst
        })
        .reduce(|| 0.0, f64::max)
}

/// Flatness `dω + [ω, ω] = 0` for a constant form `ω: n → n`; for constant forms this is
/// the defect of `ω` being a Lie algebra endomorphism.
pub fn flatness_check(alg: &LieAlgebra, omega: &[Vec<f64>]) -> f64 {
    flatness_defect(alg, omega)
}
