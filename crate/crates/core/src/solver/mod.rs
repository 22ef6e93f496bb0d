//! Recursive reduction of cocycles over lattice actions on nilmanifolds.

pub mod checks;
pub mod cocycle;
pub mod grid;
pub mod interp;
pub mod reduce;
pub mod rotation;
pub mod testfns;

use thiserror::Error;

use crate::lattices::LatticeError;

pub use checks::{flatness_check, invariance_check};
pub use cocycle::{
    average_cocycle, cocycle_functional, fiber_mean_check, h1_distance, homomorphism_defect, verify_cocycle_identity,
    CocycleData, IdentityReport,
};
pub use grid::{fiber_means, grid_mean, pairwise_sum, sup_norm, Grid, GridFunction};
pub use interp::{direction_kinds, DirectionKind, Interpolator};
pub use reduce::{descend_cocycle, fiberwise_transfer, reduce_cocycle, FiberTransfer, LevelReport, Reduction, SolverOptions, TransferEvaluator};
pub use rotation::{solve_rotation_coboundary, RotationOptions, RotationPlan, RotationSolution};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    /// `line` is the fiber (base grid point) where it was detected.
    #[error("resonance at level {level}, fiber {line}: mode {k} has divisor {divisor:.3e} but coefficient {coefficient:.3e}")]
    Resonance { level: usize, line: usize, k: usize, divisor: f64, coefficient: f64 },
    #[error("spectral tail bound {bound:.3e} exceeds tolerance {tol:.3e} at level {level}, fiber {line}")]
    TailTooFat { level: usize, line: usize, bound: f64, tol: f64 },
    #[error("fiber mean {value:.3e} on line {line} at level {level}: the centered cocycle is not a fiber coboundary")]
    FiberMeanNonzero { level: usize, line: usize, value: f64 },
    #[error("generator {generator} is not constant along fibers after the transfer at level {level} (deviation {deviation:.3e})")]
    NotFiberConstant { level: usize, generator: usize, deviation: f64 },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("invalid solver options: {0}")]
    InvalidOptions(String),
    #[error("unsupported test function: {0}")]
    UnsupportedTestFunction(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

impl SolverError {
    /// Tags level-aware errors with the recursion level.
    pub fn at_level(self, at: usize) -> Self {
        use SolverError::*;
        match self {
            Resonance { line, k, divisor, coefficient, .. } => Resonance { level: at, line, k, divisor, coefficient },
            TailTooFat { line, bound, tol, .. } => TailTooFat { level: at, line, bound, tol },
            FiberMeanNonzero { line, value, .. } => FiberMeanNonzero { level: at, line, value },
            NotFiberConstant { generator, deviation, .. } => NotFiberConstant { level: at, generator, deviation },
            other => other,
        }
    }

    pub(crate) fn at_line(self, at: usize) -> Self {
        use SolverError::*;
        match self {
            Resonance { level, k, divisor, coefficient, .. } => Resonance { level, line: at, k, divisor, coefficient },
            TailTooFat { level, bound, tol, .. } => TailTooFat { level, line: at, bound, tol },
            other => other,
        }
    }

    pub fn level(&self) -> Option<usize> {
        match self {
            SolverError::Resonance { level, .. }
            | SolverError::TailTooFat { level, .. }
            | SolverError::FiberMeanNonzero { level, .. }
            | SolverError::NotFiberConstant { level, .. } => Some(*level),
            _ => None,
        }
    }
}
