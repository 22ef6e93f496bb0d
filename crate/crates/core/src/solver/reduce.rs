//! Recursive reduction `c = c0 + P(xλ) - P(x)` through the tower of circle bundles
//! `Γ\N → Γ̄\N̄ → ...`.

use rayon::prelude::*;
use serde::Serialize;

use super::cocycle::{
    average_cocycle, check_pair, cocycle_functional, fiber_mean_check, h1_distance, homomorphism_defect, CocycleData,
};
use super::grid::{fiber_means, grid_mean, Grid, GridFunction};
use super::interp::Interpolator;
use super::rotation::{RotationOptions, RotationPlan};
use super::SolverError;
use crate::lattices::certificate::UNCERTIFIED_DIVISOR_FLOOR;
use crate::lattices::LatticePair;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolverOptions {
    /// Fourier cutoff `K` for each fiber solve (clamped to half the fiber length).
    pub modes: usize,
    pub tol: f64,
    /// Allowed deviation from fiber-constancy when descending.
    pub fiber_tol: f64,
    /// Lagrange stencil size along directions that are not (fiber-)periodic.
    pub interp_order: usize,
    /// Divisor floor used when the rotation is rational and carries no certificate.
    pub uncertified_floor: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { modes: 32, tol: 1e-6, fiber_tol: 1e-6, interp_order: 8, uncertified_floor: UNCERTIFIED_DIVISOR_FLOOR }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<(), SolverError> {
        if self.modes == 0 {
            return Err(SolverError::InvalidOptions("modes must be positive".into()));
        }
        if !(self.tol > 0.0 && self.fiber_tol > 0.0) {
            return Err(SolverError::InvalidOptions("tolerances must be positive".into()));
        }
        if self.interp_order < 2 || !self.interp_order.is_multiple_of(2) {
            return Err(SolverError::InvalidOptions(format!("interpolation order must be even and ≥ 2, got {}", self.interp_order)));
        }
        Ok(())
    }
}

/// Solution of `h(xe^{Y_1}) - h(x) = f(x)` on every fiber, with diagnostics.
#[derive(Clone, Debug, Serialize)]
pub struct FiberTransfer {
    #[serde(skip)]
    pub h: GridFunction,
    pub modes: usize,
    pub divisor_floor: f64,
    pub min_divisor: f64,
    pub observed_tail: f64,
    pub error_bound: f64,
}

/// Fiberwise solve of the rotation equation along `X_1` with rotation `a`.
pub fn fiberwise_transfer(
    grid: &Grid,
    f: &[f64],
    a: f64,
    divisor_floor: f64,
    opts: &SolverOptions,
) -> Result<FiberTransfer, SolverError> {
    let m = grid.fiber_len();
    // Coefficients near rounding level of the data carry no decay information.
    let noise_floor = 64.0 * f64::EPSILON * super::grid::sup_norm(f);
    let ropts = RotationOptions { modes: opts.modes, tol: opts.tol, divisor_floor, noise_floor };
    let plan = RotationPlan::new(m, a, ropts)?;
    let sols: Vec<_> = f.par_chunks(m).map(|line| plan.solve(line)).collect();
    let mut values = Vec::with_capacity(f.len());
    let (mut observed_tail, mut error_bound) = (0.0f64, 0.0f64);
    for (line, sol) in sols.into_iter().enumerate() {
        let sol = sol.map_err(|e| e.at_line(line))?;
        observed_tail = observed_tail.max(sol.observed_tail);
        error_bound = error_bound.max(sol.error_bound);
        values.extend_from_slice(&sol.values);
    }
    Ok(FiberTransfer {
        h: GridFunction::new(grid.clone(), values),
        modes: plan.modes(),
        divisor_floor,
        min_divisor: plan.min_divisor(),
        observed_tail,
        error_bound,
    })
}

/// `c_1(x, λ_j) = c(x, λ_j) + h(x) - h(xλ_j)` for `j ≥ 2`, averaged over fibers.
/// Returns the cocycle on the quotient grid and the largest deviation from fiber-constancy.
pub fn descend_cocycle(
    pair: &LatticePair,
    c: &CocycleData,
    h: &GridFunction,
    opts: &SolverOptions,
) -> Result<(CocycleData, f64), SolverError> {
    check_pair(c, pair)?;
    let alg = pair.algebra();
    let law = alg.group_law();
    let interp = Interpolator::new(alg, h, opts.interp_order);
    let grid = &c.grid;
    let mut generators = Vec::with_capacity(c.dim() - 1);
    let mut deviation: f64 = 0.0;
    for j in 1..c.dim() {
        let g = &pair.generator_coords_f64[j];
        let c1: Vec<f64> = (0..grid.len())
            .into_par_iter()
            .map(|l| {
                let x = grid.point(l);
                c.generators[j][l] + h.values[l] - interp.eval(&law.multiply_f64(&x, g))
            })
            .collect();
        let means = fiber_means(grid, &c1);
        let dev = c1
            .chunks(grid.fiber_len())
            .zip(&means)
            .flat_map(|(line, m)| line.iter().map(move |v| (v - m).abs()))
            .fold(0.0, f64::max);
        if dev > opts.fiber_tol {
            return Err(SolverError::NotFiberConstant { level: 0, generator: j + 1, deviation: dev });
        }
        deviation = deviation.max(dev);
        generators.push(means);
    }
    Ok((CocycleData { grid: grid.quotient(), generators }, deviation))
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub level: usize,
    pub dim: usize,
    pub grid: Vec<usize>,
    pub rotation: f64,
    pub certified: bool,
    #[serde(flatten)]
    pub transfer: FiberTransfer,
    pub fiber_mean_max: f64,
    /// `None` at the last level (nothing to descend).
    pub fiber_constancy: Option<f64>,
    /// Means of the incoming generators; zero up to rounding below the top level.
    pub incoming_means: Vec<f64>,
}

/// `P = Σ_ℓ h_ℓ ∘ π_ℓ - mean`, evaluated level by level on each quotient's own geometry.
#[derive(Clone, Debug)]
pub struct TransferEvaluator {
    levels: Vec<Interpolator>,
    shift: f64,
}

impl TransferEvaluator {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.levels.iter().enumerate().map(|(l, it)| it.eval(&x[l..])).sum::<f64>() - self.shift
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Reduction {
    pub c0: Vec<f64>,
    /// Transfer function `P` on the grid, normalized to mean zero.
    #[serde(skip)]
    pub transfer: GridFunction,
    #[serde(skip)]
    pub level_transfers: Vec<GridFunction>,
    pub levels: Vec<LevelReport>,
    /// `max_x |c(x,λ_j) - c0_j + P(x) - P(xλ_j)|` per generator.
    pub residual_per_generator: Vec<f64>,
    pub residual: f64,
    pub hom_defect: f64,
    /// `ψ` with `c0(e^Y) = ψ(Y)`, in the dual `X` basis.
    pub functional: Vec<f64>,
    pub h1_distance: f64,
    #[serde(skip)]
    evaluator: Option<TransferEvaluator>,
}

impl Reduction {
    pub fn evaluator(&self) -> &TransferEvaluator {
        self.evaluator.as_ref().expect("evaluator is built by reduce_cocycle")
    }
}

/// Runs the full recursion. Errors carry the (1-based) level at which they occurred.
pub fn reduce_cocycle(c: &CocycleData, pair: &LatticePair, opts: &SolverOptions) -> Result<Reduction, SolverError> {
    opts.validate()?;
    check_pair(c, pair)?;
    let (c0, centered) = average_cocycle(c);
    let mut levels = Vec::new();
    let mut transfers: Vec<GridFunction> = Vec::new();
    let mut pairs = vec![pair.clone()];
    let mut data = centered;
    for level in 1..=pair.dim() {
        let cur = pairs.last().expect("pair for the current level").clone();
        let at = |e: SolverError| e.at_level(level);
        let incoming_means = if level == 1 { vec![0.0; data.dim()] } else { data.generators.iter().map(|g| grid_mean(g)).collect() };
        let fiber_mean_max = fiber_mean_check(&data.grid, &data.generators[0], opts.tol).map_err(at)?;
        let cert = cur.certificates[0].as_ref();
        let modes = opts.modes.min(data.grid.fiber_len() / 2);
        let floor = cert.map_or(opts.uncertified_floor, |c| c.divisor_floor(modes));
        let transfer = fiberwise_transfer(&data.grid, &data.generators[0], cur.rotation(), floor, opts).map_err(at)?;
        let fiber_constancy = if level < pair.dim() {
            let (next, dev) = descend_cocycle(&cur, &data, &transfer.h, opts).map_err(at)?;
            data = next;
            pairs.push(cur.quotient()?);
            Some(dev)
        } else {
            None
        };
        transfers.push(transfer.h.clone());
        levels.push(LevelReport {
            level,
            dim: cur.dim(),
            grid: transfer.h.grid.dims().to_vec(),
            rotation: cur.rotation(),
            certified: cert.is_some(),
            transfer,
            fiber_mean_max,
            fiber_constancy,
            incoming_means,
        });
    }
    // P on the full grid: pull every level back to the top grid.
    let dims = c.grid.dims();
    let mut total = GridFunction::zeros(c.grid.clone());
    for (l, h) in transfers.iter().enumerate() {
        let mut up = h.clone();
        for d in (0..l).rev() {
            up = up.pullback(dims[d]);
        }
        total.values.iter_mut().zip(&up.values).for_each(|(t, v)| *t += v);
    }
    let shift = total.mean();
    total.values.iter_mut().for_each(|v| *v -= shift);
    let evaluator = TransferEvaluator {
        levels: transfers.iter().zip(&pairs).map(|(h, p)| Interpolator::new(p.algebra(), h, opts.interp_order)).collect(),
        shift,
    };
    let residual_per_generator = residuals(c, pair, &c0, &total, &evaluator);
    let residual = residual_per_generator.iter().cloned().fold(0.0, f64::max);
    let functional = cocycle_functional(pair, &c0);
    Ok(Reduction {
        hom_defect: homomorphism_defect(pair, &c0),
        h1_distance: h1_distance(pair, &functional),
        functional,
        c0,
        transfer: total,
        level_transfers: transfers,
        levels,
        residual_per_generator,
        residual,
        evaluator: Some(evaluator),
    })
}

fn residuals(c: &CocycleData, pair: &LatticePair, c0: &[f64], p: &GridFunction, eval: &TransferEvaluator) -> Vec<f64> {
    let law = pair.algebra().group_law();
    (0..c.dim())
        .map(|j| {
            let g = &pair.generator_coords_f64[j];
            (0..c.grid.len())
                .into_par_iter()
                .map(|l| {
                    let x = c.grid.point(l);
                    (c.generators[j][l] - c0[j] + p.values[l] - eval.eval(&law.multiply_f64(&x, g))).abs()
                })
                .reduce(|| 0.0, f64::max)
        })
        .collect()
}
