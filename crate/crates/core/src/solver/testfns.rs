//! Smooth Γ-invariant test functions and cocycles generated from them.
//!
//! Every smooth cocycle is a homomorphism plus a coboundary, so generating
//! `c(x, λ) = c0(λ) + P(xλ) - P(x)` from a rich family of transfer functions `P`
//! covers the general case.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cocycle::CocycleData;
use super::grid::Grid;
use super::SolverError;
use crate::lattices::LatticePair;
use crate::lie::LieAlgebra;
use crate::scalar::rational_to_f64;

/// `cos_coef · cos 2π(k·u) + sin_coef · sin 2π(k·u)` on the abelianization torus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaseMode {
    pub k: Vec<i32>,
    #[serde(default)]
    pub cos: f64,
    #[serde(default)]
    pub sin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TransferSpec {
    Zero,
    /// Trigonometric polynomial pulled back from `N/[N,N]`.
    BaseTorus { modes: Vec<BaseMode> },
    /// Random base-torus trigonometric polynomial with `|k|_∞ ≤ bandwidth`.
    RandomBaseTorus { bandwidth: u32, amplitude: f64, seed: u64 },
    /// `amplitude · Π_i (1 - r²) / (1 - 2r cos 2πu_i + r²)` on the abelianization torus;
    /// analytic with Fourier coefficients `r^{|k|_1}`.
    Poisson { r: f64, amplitude: f64 },
    /// Heisenberg theta function `Re Σ_n φ(t3 + n) e^{2πik(t1 - n t2)}` with a Gaussian `φ`
    /// of the given width; rich in fiber modes.
    Theta { k: i32, width: f64, amplitude: f64 },
    Sum { terms: Vec<TransferSpec> },
}

/// A transfer function bound to an algebra, evaluable at any point of `N`.
#[derive(Clone, Debug)]
pub struct TestFunction {
    spec: TransferSpec,
    /// Abelianization coordinates are `t_{base..n}`.
    base: usize,
    resolved: Vec<Resolved>,
}

#[derive(Clone, Debug)]
enum Resolved {
    Modes(Vec<BaseMode>),
    Poisson { r: f64, amplitude: f64 },
    Theta { k: i32, width: f64, amplitude: f64 },
}

/// Index of the first abelianization coordinate, if `[n, n] = span{X_1..X_r}`.
fn derived_prefix(alg: &LieAlgebra) -> Option<usize> {
    let derived = alg.lower_central_series().derived();
    let r = derived.len();
    derived.iter().all(|v| v[r..].iter().all(num_traits::Zero::is_zero)).then_some(r)
}

fn is_standard_heisenberg(alg: &LieAlgebra) -> bool {
    alg.dim() == 3
        && alg.structure_constants(0, 1).is_empty()
        && alg.structure_constants(0, 2).is_empty()
        && alg.structure_constants(1, 2).len() == 1
        && alg.structure_constants(1, 2)[0].0 == 0
        && rational_to_f64(&alg.structure_constants(1, 2)[0].1) == 1.0
}

pub fn random_base_modes(base_dim: usize, bandwidth: u32, amplitude: f64, seed: u64) -> Vec<BaseMode> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = bandwidth as i32;
    let mut modes = Vec::new();
    let total = (2 * b + 1).pow(base_dim as u32);
    for idx in 0..total {
        let mut rest = idx;
        let k: Vec<i32> = (0..base_dim)
            .map(|_| {
                let v = rest % (2 * b + 1);
                rest /= 2 * b + 1;
                v - b
            })
            .collect();
        // One representative of each ±k pair, skipping k = 0.
        if k.iter().all(|&v| v == 0) || k.iter().find(|&&v| v != 0).is_some_and(|&v| v < 0) {
            continue;
        }
        let norm2: i32 = k.iter().map(|v| v * v).sum();
        let scale = amplitude / (1.0 + norm2 as f64);
        modes.push(BaseMode { k, cos: scale * rng.gen_range(-1.0..1.0), sin: scale * rng.gen_range(-1.0..1.0) });
    }
    modes
}

impl TestFunction {
    pub fn new(spec: &TransferSpec, alg: &LieAlgebra) -> Result<Self, SolverError> {
        let base = derived_prefix(alg).ok_or_else(|| {
            SolverError::UnsupportedTestFunction("the derived algebra is not spanned by leading basis vectors".into())
        })?;
        let base_dim = alg.dim() - base;
        let mut resolved = Vec::new();
        let mut stack = vec![spec.clone()];
        while let Some(s) = stack.pop() {
            match s {
                TransferSpec::Zero => {}
                TransferSpec::BaseTorus { modes } => {
                    if let Some(m) = modes.iter().find(|m| m.k.len() != base_dim) {
                        return Err(SolverError::UnsupportedTestFunction(format!(
                            "mode {:?} has {} entries, the abelianization torus has dimension {base_dim}",
                            m.k,
                            m.k.len()
                        )));
                    }
                    resolved.push(Resolved::Modes(modes));
                }
                TransferSpec::RandomBaseTorus { bandwidth, amplitude, seed } => {
                    resolved.push(Resolved::Modes(random_base_modes(base_dim, bandwidth, amplitude, seed)))
                }
                TransferSpec::Poisson { r, amplitude } => {
                    if !(0.0..1.0).contains(&r) {
                        return Err(SolverError::UnsupportedTestFunction(format!("Poisson radius {r} outside [0, 1)")));
                    }
                    resolved.push(Resolved::Poisson { r, amplitude });
                }
                TransferSpec::Theta { k, width, amplitude } => {
                    if !is_standard_heisenberg(alg) {
                        return Err(SolverError::UnsupportedTestFunction(
                            "theta functions need the Heisenberg algebra with [X2, X3] = X1".into(),
                        ));
                    }
                    if width.is_nan() || width <= 0.0 {
                        return Err(SolverError::UnsupportedTestFunction("theta width must be positive".into()));
                    }
                    resolved.push(Resolved::Theta { k, width, amplitude });
                }
                TransferSpec::Sum { terms } => stack.extend(terms.into_iter().rev()),
            }
        }
        Ok(TestFunction { spec: spec.clone(), base, resolved })
    }

    pub fn spec(&self) -> &TransferSpec {
        &self.spec
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let u = &x[self.base..];
        self.resolved
            .iter()
            .map(|r| match r {
                Resolved::Modes(modes) => modes
                    .iter()
                    .map(|m| {
                        let phase = 2.0 * PI * m.k.iter().zip(u).map(|(&k, &t)| k as f64 * t).sum::<f64>();
                        m.cos * phase.cos() + m.sin * phase.sin()
                    })
                    .sum::<f64>(),
                Resolved::Poisson { r, amplitude } => {
                    amplitude
                        * u.iter().map(|&t| (1.0 - r * r) / (1.0 - 2.0 * r * (2.0 * PI * t).cos() + r * r)).product::<f64>()
                }
                Resolved::Theta { k, width, amplitude } => {
                    let reach = (9.0 * width).ceil() as i64 + 1;
                    let t3 = x[2];
                    let centre = (-t3).round() as i64;
                    (centre - reach..=centre + reach)
                        .map(|n| {
                            let v = t3 + n as f64;
                            let phi = (-v * v / (2.0 * width * width)).exp();
                            phi * (2.0 * PI * *k as f64 * (x[0] - n as f64 * x[1])).cos()
                        })
                        .sum::<f64>()
                        * amplitude
                }
            })
            .sum()
    }
}

/// `c(x, λ_j) = hom_j + P(xλ_j) - P(x)` at every grid node.
pub fn generate_cocycle(pair: &LatticePair, grid: &Grid, hom: &[f64], p: &TestFunction) -> Result<CocycleData, SolverError> {
    let n = pair.dim();
    if hom.len() != n || grid.ndim() != n {
        return Err(SolverError::GridMismatch(format!(
            "dimension {n} pair with {} homomorphism values and a {}-dimensional grid",
            hom.len(),
            grid.ndim()
        )));
    }
    let law = pair.algebra().group_law();
    let px: Vec<f64> = (0..grid.len()).into_par_iter().map(|l| p.eval(&grid.point(l))).collect();
    let generators = (0..n)
        .map(|j| {
            let g = &pair.generator_coords_f64[j];
            (0..grid.len())
                .into_par_iter()
                .map(|l| hom[j] + p.eval(&law.multiply_f64(&grid.point(l), g)) - px[l])
                .collect()
        })
        .collect();
    CocycleData::new(grid.clone(), generators)
}

/// A random homomorphism `Λ → R`: random values on the generators not hit by commutators.
pub fn random_homomorphism(pair: &LatticePair, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = pair.dim();
    // Generators appearing in a commutator normal form must carry zero: Y-coordinates
    // in the derived subalgebra of Λ's algebra.
    let alg = &pair.lambda.algebra;
    let mut in_derived = vec![false; n];
    for i in 0..n {
        for j in i + 1..n {
            for (k, _) in alg.structure_constants(i, j) {
                in_derived[*k] = true;
            }
        }
    }
    (0..n).map(|j| if in_derived[j] { 0.0 } else { rng.gen_range(-1.0..1.0) }).collect()
}
