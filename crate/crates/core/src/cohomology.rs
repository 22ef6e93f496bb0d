//! Chevalley–Eilenberg cohomology of a nilpotent Lie algebra with trivial
//! real coefficients, computed with exact rational linear algebra.

use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::lie::LieAlgebra;
use crate::linalg::{nullspace, rank, Matrix};
use crate::scalar::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("cochain degree {p} exceeds the dimension {dim}")]
    DegreeOutOfRange { p: usize, dim: usize },
    #[error("dim Hom(Lambda, R) = {hom} but dim H^1 = {h1}")]
    HomDimensionMismatch { hom: usize, h1: usize },
}

/// Increasing multi-indices of length `p` in `0..n`, in lexicographic order.
pub fn multi_indices(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < p - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p <= n {
        rec(0, n, p, &mut Vec::new(), &mut out);
    }
    out
}

/// The space `Λ^p 𝔫*` with basis `X_I* = X_{i_1}* ∧ ... ∧ X_{i_p}*`.
#[derive(Debug, Clone)]
pub struct CochainSpace {
    pub degree: usize,
    pub basis: Vec<Vec<usize>>,
    /// Matrix of `d: Λ^p → Λ^{p+1}`: rows indexed by the degree `p+1` basis,
    /// columns by `basis`.
    pub differential: Matrix,
}

impl CochainSpace {
    pub fn new(alg: &LieAlgebra, p: usize) -> Result<Self, CohomologyError> {
        Ok(CochainSpace {
            degree: p,
            basis: multi_indices(alg.dim(), p),
            differential: ce_differential(alg, p)?,
        })
    }
}

/// Matrix of the Chevalley–Eilenberg differential on `p`-cochains:
/// `dω(x_0..x_p) = Σ_{i<j} (-1)^{i+j} ω([x_i,x_j], x_0..x̂_i..x̂_j..x_p)`.
pub fn ce_differential(alg: &LieAlgebra, p: usize) -> Result<Matrix, CohomologyError> {
    let n = alg.dim();
    if p > n {
        return Err(CohomologyError::DegreeOutOfRange { p, dim: n });
    }
    let cols = multi_indices(n, p);
    let rows = multi_indices(n, p + 1);
    let col_of: HashMap<&[usize], usize> = cols.iter().enumerate().map(|(c, m)| (m.as_slice(), c)).collect();
    let mut d = vec![vec![Rational::zero(); cols.len()]; rows.len()];
    for (r, idx) in rows.iter().enumerate() {
        for a in 0..idx.len() {
            for b in a + 1..idx.len() {
                let rest: Vec<usize> = idx.iter().enumerate().filter(|&(t, _)| t != a && t != b).map(|(_, &v)| v).collect();
                let sign_ab = if (a + b) % 2 == 0 { 1 } else { -1 };
                for (k, c) in alg.structure_constants(idx[a], idx[b]) {
                    if rest.contains(k) {
                        continue;
                    }
                    // Sort (k, rest) into increasing order, tracking the sign.
                    let pos = rest.iter().filter(|&&v| v < *k).count();
                    let mut sorted = rest.clone();
                    sorted.insert(pos, *k);
                    let sign = if pos % 2 == 0 { sign_ab } else { -sign_ab };
                    let col = col_of[sorted.as_slice()];
                    if sign > 0 {
                        d[r][col] += c;
                    } else {
                        d[r][col] -= c;
                    }
                }
            }
        }
    }
    Ok(d)
}

fn rank_of(m: &Matrix, ncols: usize) -> usize {
    if m.is_empty() || ncols == 0 {
        0
    } else {
        rank(m, ncols)
    }
}

/// `dim H^p` for `p ≤ n`.
pub fn cohomology_dim(alg: &LieAlgebra, p: usize) -> Result<usize, CohomologyError> {
    let n = alg.dim();
    let dp = ce_differential(alg, p)?;
    let cp = multi_indices(n, p).len();
    let kernel = cp - rank_of(&dp, cp);
    let image = if p == 0 {
        0
    } else {
        let prev = ce_differential(alg, p - 1)?;
        rank_of(&prev, multi_indices(n, p - 1).len())
    };
    Ok(kernel - image)
}

/// Basis of the annihilator of `[𝔫, 𝔫]`, i.e. of `H^1(𝔫)` (there are no 1-coboundaries).
pub fn h1_basis(alg: &LieAlgebra) -> Vec<Vec<Rational>> {
    let n = alg.dim();
    let derived: Matrix = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| alg.bracket_basis(i, j))
        .filter(|v| v.iter().any(|c| !c.is_zero()))
        .collect();
    if derived.is_empty() {
        return (0..n)
            .map(|i| (0..n).map(|k| if k == i { Rational::from_integer(1.into()) } else { Rational::zero() }).collect())
            .collect();
    }
    nullspace(&derived, n)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CohomologyReport {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
    /// Functionals on `𝔫` (coefficients on `X_1*..X_n*`) as `"p/q"` strings.
    pub h1_basis: Vec<Vec<String>>,
    pub derived_dim: usize,
    /// `dim Hom(Λ, ℝ)` computed from the lattice relations, when a lattice was supplied.
    pub hom_lattice_dim: Option<usize>,
}

/// Dimensions of `H^0..H^2`, an explicit `H^1` basis and, when `hom_dim` is the
/// abelianization rank of a lattice, the check `dim Hom(Λ,ℝ) = dim H^1`.
pub fn cohomology_report(alg: &LieAlgebra, hom_dim: Option<usize>) -> Result<CohomologyReport, CohomologyError> {
    let n = alg.dim();
    let h0 = cohomology_dim(alg, 0)?;
    let h1 = cohomology_dim(alg, 1)?;
    let h2 = if n >= 2 { cohomology_dim(alg, 2)? } else { 0 };
    let basis = h1_basis(alg);
    let derived_dim = alg.lower_central_series().dims().get(1).copied().unwrap_or(0);
    debug_assert_eq!(basis.len(), h1);
    debug_assert_eq!(h1, n - derived_dim);
    if let Some(hom) = hom_dim {
        if hom != h1 {
            return Err(CohomologyError::HomDimensionMismatch { hom, h1 });
        }
    }
    Ok(CohomologyReport {
        h0,
        h1,
        h2,
        h1_basis: basis.iter().map(|v| v.iter().map(format_rational).collect()).collect(),
        derived_dim,
        hom_lattice_dim: hom_dim,
    })
}
