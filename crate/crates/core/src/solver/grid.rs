//! Uniform grids on the coordinate cube `[0,1)^n` and deterministic quadrature.

use serde::{Deserialize, Serialize};

/// Column-major grid: coordinate 1 (the fiber) varies fastest, so each fiber
/// line `t_1 ↦ f(t_1, t_2, ..)` is a contiguous slice of length `m_1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    dims: Vec<usize>,
}

impl Grid {
    pub fn new(dims: Vec<usize>) -> Self {
        assert!(!dims.is_empty() && dims.iter().all(|&m| m > 0), "grid dimensions must be positive");
        Grid { dims }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn ndim(&self) -> usize {
        self.dims.len()
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Length of a fiber line.
    pub fn fiber_len(&self) -> usize {
        self.dims[0]
    }

    pub fn num_lines(&self) -> usize {
        self.len() / self.dims[0]
    }

    pub fn stride(&self, d: usize) -> usize {
        self.dims[..d].iter().product()
    }

    pub fn index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.dims).rev().fold(0, |acc, (&i, &m)| acc * m + i)
    }

    pub fn multi_index(&self, mut linear: usize) -> Vec<usize> {
        self.dims
            .iter()
            .map(|&m| {
                let i = linear % m;
                linear /= m;
                i
            })
            .collect()
    }

    /// Coordinates `(i_1/m_1, ..., i_n/m_n)` of a grid node.
    pub fn point(&self, linear: usize) -> Vec<f64> {
        self.multi_index(linear).iter().zip(&self.dims).map(|(&i, &m)| i as f64 / m as f64).collect()
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.len()).map(move |l| self.point(l))
    }

    /// Grid of the base `Γ̄\N̄` (drops the fiber coordinate).
    pub fn quotient(&self) -> Grid {
        Grid::new(self.dims[1..].to_vec())
    }

    /// Quadrature weight of every node (uniform; sums to 1).
    pub fn weight(&self) -> f64 {
        1.0 / self.len() as f64
    }
}

/// Pairwise summation in a fixed tree (adjacent pairs, level by level). For
/// power-of-two lengths every aligned power-of-two block is a subtree, so sums
/// of fiber-constant data agree exactly with sums over the base grid.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        _ => {
            let mut buf: Vec<f64> = values.chunks(2).map(|c| c.iter().sum()).collect();
            while buf.len() > 1 {
                buf = buf.chunks(2).map(|c| if c.len() == 2 { c[0] + c[1] } else { c[0] }).collect();
            }
            buf[0]
        }
    }
}

pub fn grid_mean(values: &[f64]) -> f64 {
    pairwise_sum(values) / values.len() as f64
}

/// Mean over each fiber line (the discrete fiber measure `μ_z`).
pub fn fiber_means(grid: &Grid, values: &[f64]) -> Vec<f64> {
    values.chunks(grid.fiber_len()).map(grid_mean).collect()
}

pub fn sup_norm(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Values on a grid, i.e. a function on `Γ\N` sampled on the fundamental domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Self {
        assert_eq!(grid.len(), values.len(), "grid size mismatch");
        GridFunction { grid, values }
    }

    pub fn zeros(grid: Grid) -> Self {
        let n = grid.len();
        GridFunction { grid, values: vec![0.0; n] }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(&[f64]) -> f64 + Sync) -> Self {
        use rayon::prelude::*;
        let values = (0..grid.len()).into_par_iter().map(|l| f(&grid.point(l))).collect();
        GridFunction { grid, values }
    }

    pub fn mean(&self) -> f64 {
        grid_mean(&self.values)
    }

    pub fn sup_norm(&self) -> f64 {
        sup_norm(&self.values)
    }

    /// `f ∘ π̄` on the grid one dimension up, with fiber length `m1`.
    pub fn pullback(&self, m1: usize) -> GridFunction {
        let mut dims = vec![m1];
        dims.extend_from_slice(self.grid.dims());
        let values = self.values.iter().flat_map(|&v| std::iter::repeat_n(v, m1)).collect();
        GridFunction::new(Grid::new(dims), values)
    }
}
