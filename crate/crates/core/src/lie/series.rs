use num_traits::{One, Zero};

use super::algebra::LieAlgebra;
use crate::linalg::{self, Matrix};
use crate::scalar::Rational;

/// `n^1 ⊇ n^2 ⊇ ... ⊇ n^s` with `n^{i+1} = [n, n^i]`, plus complements `V_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct LowerCentralSeries {
    /// Echelon bases; `subspaces[0]` is the whole algebra.
    pub subspaces: Vec<Matrix>,
    /// `complements[i]` spans `V_{i+1}` with `n^{i+1} = V_{i+1} ⊕ n^{i+2}`.
    pub complements: Vec<Matrix>,
}

impl LowerCentralSeries {
    pub fn step(&self) -> usize {
        self.subspaces.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.subspaces.iter().map(Vec::len).collect()
    }

    /// Basis of `[n, n]` (empty for abelian algebras).
    pub fn derived(&self) -> &[Vec<Rational>] {
        self.subspaces.get(1).map_or(&[], |m| m.as_slice())
    }
}

pub fn lower_central_series(alg: &LieAlgebra) -> LowerCentralSeries {
    alg.lower_central_series().clone()
}

/// Builds the series from a bracket on coordinate vectors. `Err(dim)` when it
/// stabilises at a nonzero subspace.
pub(crate) fn lower_central_series_of<F>(n: usize, bracket: F) -> Result<LowerCentralSeries, usize>
where
    F: Fn(&[Rational], &[Rational]) -> Vec<Rational>,
{
    let identity: Matrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    let mut subspaces = vec![identity.clone()];
    loop {
        let prev = subspaces.last().unwrap();
        let mut images = Vec::new();
        for x in &identity {
            for v in prev {
                let b = bracket(x, v);
                if b.iter().any(|c| !c.is_zero()) {
                    images.push(b);
                }
            }
        }
        let next = linalg::span_basis(&images, n);
        if next.is_empty() {
            break;
        }
        if next.len() == prev.len() {
            return Err(next.len());
        }
        subspaces.push(next);
    }

    let mut complements = Vec::with_capacity(subspaces.len());
    for (i, space) in subspaces.iter().enumerate() {
        let mut acc: Matrix = subspaces.get(i + 1).cloned().unwrap_or_default();
        let mut chosen = Vec::new();
        let mut r = acc.len();
        for v in space {
            acc.push(v.clone());
            let r2 = linalg::rank(&acc, n);
            if r2 > r {
                chosen.push(v.clone());
                r = r2;
            } else {
                acc.pop();
            }
        }
        complements.push(chosen);
    }
    Ok(LowerCentralSeries { subspaces, complements })
}
