//! Cocycles `c: Γ\N × Λ → R` sampled on the generators `λ_j = e^{Y_j}`.

use rayon::prelude::*;
use serde::Serialize;

use super::grid::{fiber_means, grid_mean, Grid, GridFunction};
use super::interp::Interpolator;
use super::SolverError;
use crate::lattices::LatticePair;
use crate::lie::GroupLaw;
use crate::scalar::rational_to_f64;

/// `generators[j]` holds `c(x, λ_{j+1})` at every grid node `x`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CocycleData {
    pub grid: Grid,
    pub generators: Vec<Vec<f64>>,
}

impl CocycleData {
    pub fn new(grid: Grid, generators: Vec<Vec<f64>>) -> Result<Self, SolverError> {
        if generators.len() != grid.ndim() {
            return Err(SolverError::GridMismatch(format!(
                "{} generator grids for a {}-dimensional grid",
                generators.len(),
                grid.ndim()
            )));
        }
        if let Some((j, g)) = generators.iter().enumerate().find(|(_, g)| g.len() != grid.len()) {
            return Err(SolverError::GridMismatch(format!(
                "generator {} has {} values, grid has {} nodes",
                j + 1,
                g.len(),
                grid.len()
            )));
        }
        Ok(CocycleData { grid, generators })
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    /// The constant cocycle `c(x, λ_j) = c0_j`.
    pub fn constant(grid: Grid, c0: &[f64]) -> Self {
        let n = grid.len();
        CocycleData { generators: c0.iter().map(|&v| vec![v; n]).collect(), grid }
    }

    pub fn generator(&self, j: usize) -> GridFunction {
        GridFunction::new(self.grid.clone(), self.generators[j].clone())
    }
}

pub(crate) fn check_pair(c: &CocycleData, pair: &LatticePair) -> Result<(), SolverError> {
    if pair.dim() != c.dim() {
        return Err(SolverError::GridMismatch(format!(
            "cocycle has {} generators, lattice pair has dimension {}",
            c.dim(),
            pair.dim()
        )));
    }
    Ok(())
}

/// `c0(λ) = ∫ c(x, λ) dμ` and the centered cocycle `c - c0`.
pub fn average_cocycle(c: &CocycleData) -> (Vec<f64>, CocycleData) {
    let c0: Vec<f64> = c.generators.iter().map(|g| grid_mean(g)).collect();
    let centered = c.generators.iter().zip(&c0).map(|(g, m)| g.iter().map(|v| v - m).collect()).collect();
    (c0, CocycleData { grid: c.grid.clone(), generators: centered })
}

/// Largest fiber mean of a centered fiber-generator grid; fails above `tol`.
pub fn fiber_mean_check(grid: &Grid, f: &[f64], tol: f64) -> Result<f64, SolverError> {
    let means = fiber_means(grid, f);
    let (line, value) = means
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |(bl, bv), (l, &v)| if v.abs() > bv.abs() { (l, v) } else { (bl, bv) });
    if value.abs() > tol {
        return Err(SolverError::FiberMeanNonzero { level: 0, line, value });
    }
    Ok(value.abs())
}

/// A word in the generators and their inverses: `(j, ±1)` with 0-based `j`.
pub type Word = Vec<(usize, i8)>;

fn expand(normal_form: &[i64]) -> Word {
    normal_form
        .iter()
        .enumerate()
        .flat_map(|(j, &e)| std::iter::repeat_n((j, if e < 0 { -1 } else { 1 }), e.unsigned_abs() as usize))
        .collect()
}

/// Evaluates `c(x, w)` for a word `w` by the cocycle rule, with
/// `c(x, λ^{-1}) = -c(xλ^{-1}, λ)`.
pub(crate) fn eval_word(law: &GroupLaw, gens: &[Vec<f64>], inv: &[Vec<f64>], interps: &[Interpolator], x: &[f64], w: &Word) -> f64 {
    let mut pos = x.to_vec();
    let mut total = 0.0;
    for &(j, s) in w {
        if s > 0 {
            total += interps[j].eval(&pos);
            pos = law.multiply_f64(&pos, &gens[j]);
        } else {
            pos = law.multiply_f64(&pos, &inv[j]);
            total -= interps[j].eval(&pos);
        }
    }
    total
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    /// `(i, j, max_x |c(x, [λ_i, λ_j]) - c(x, normal form)|)`.
    pub relations: Vec<(usize, usize, f64)>,
    pub max_defect: f64,
}

/// Checks the cocycle identity on every commutator relation of `Λ` at all grid nodes.
/// Off-grid values come from the interpolator with Lagrange order `order`.
pub fn verify_cocycle_identity(c: &CocycleData, pair: &LatticePair, order: usize) -> Result<IdentityReport, SolverError> {
    check_pair(c, pair)?;
    let alg = pair.algebra();
    let law = alg.group_law();
    let gens = &pair.generator_coords_f64;
    let inv: Vec<Vec<f64>> = gens.iter().map(|g| law.inverse_f64(g)).collect();
    let interps: Vec<Interpolator> = (0..c.dim()).map(|j| Interpolator::new(alg, &c.generator(j), order)).collect();
    let mut relations = Vec::new();
    for rel in pair.relation_words() {
        let (i, j) = (rel.i - 1, rel.j - 1);
        let lhs: Word = vec![(i, 1), (j, 1), (i, -1), (j, -1)];
        let rhs = expand(&rel.normal_form);
        let defect = (0..c.grid.len())
            .into_par_iter()
            .map(|l| {
                let x = c.grid.point(l);
                (eval_word(&law, gens, &inv, &interps, &x, &lhs) - eval_word(&law, gens, &inv, &interps, &x, &rhs)).abs()
            })
            .reduce(|| 0.0, f64::max);
        relations.push((rel.i, rel.j, defect));
    }
    let max_defect = relations.iter().map(|r| r.2).fold(0.0, f64::max);
    Ok(IdentityReport { relations, max_defect })
}

/// `max |c0([λ_i, λ_j])|` over the relations: zero for a homomorphism `Λ → R`.
pub fn homomorphism_defect(pair: &LatticePair, c0: &[f64]) -> f64 {
    pair.relation_words()
        .iter()
        .map(|r| r.normal_form.iter().zip(c0).map(|(&e, v)| e as f64 * v).sum::<f64>().abs())
        .fold(0.0, f64::max)
}

/// The linear functional `ψ` on `n` (in the dual `X` basis) with `ψ(Y_j) = c0_j`.
pub fn cocycle_functional(pair: &LatticePair, c0: &[f64]) -> Vec<f64> {
    let n = pair.dim();
    let a: Vec<Vec<f64>> = pair.a.iter().map(|r| r.iter().map(|x| x.to_f64()).collect()).collect();
    // Σ_{k ≤ j} a_jk ψ_k = c0_j, forward substitution.
    let mut psi = vec![0.0; n];
    for j in 0..n {
        let rest: f64 = (0..j).map(|k| a[j][k] * psi[k]).sum();
        psi[j] = (c0[j] - rest) / a[j][j];
    }
    psi
}

/// `max |ψ([X_i, X_j])|`: the distance of `ψ` from the annihilator of `[n, n]`, i.e. from `H^1`.
pub fn h1_distance(pair: &LatticePair, psi: &[f64]) -> f64 {
    let alg = pair.algebra();
    let n = alg.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let v: f64 = alg.structure_constants(i, j).iter().map(|(k, q)| rational_to_f64(q) * psi[*k]).sum();
            worst = worst.max(v.abs());
        }
    }
    worst
}
