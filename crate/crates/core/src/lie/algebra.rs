use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::Zero;
use thiserror::Error;

use super::bch::BchPlan;
use super::group_law::GroupLaw;
use super::series::{lower_central_series_of, LowerCentralSeries};
use crate::scalar::{format_rational, Rational, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("algebra dimension must be at least 1")]
    EmptyAlgebra,
    #[error("expected {expected} basis names, got {got}")]
    BasisNameCount { expected: usize, got: usize },
    #[error("bracket key ({i},{j}) invalid: brackets are given for 1 <= i < j <= dim")]
    InvalidBracketKey { i: usize, j: usize },
    #[error("bracket [{i},{j}] has {got} coefficients, expected {expected}")]
    BracketLength { i: usize, j: usize, expected: usize, got: usize },
    #[error("Jacobi identity fails on basis triple ({i},{j},{k}); defect = [{}]", .defect.iter().map(format_rational).collect::<Vec<_>>().join(", "))]
    JacobiViolation { i: usize, j: usize, k: usize, defect: Vec<Rational> },
    #[error("algebra is not nilpotent: lower central series stabilises at dimension {stable_dim}")]
    NotNilpotent { stable_dim: usize },
    #[error("basis order is not a strong Malcev order: span of the first {index} basis vectors is not an ideal")]
    NotStrongMalcevOrder { index: usize },
    #[error("first basis vector is not central: [X1, X{j}] != 0")]
    NotCentral { j: usize },
    #[error("grading has {got} entries, expected {expected}")]
    GradingLength { expected: usize, got: usize },
}

/// Unvalidated structure constants, as read from an algebra spec file.
///
/// Indices are 0-based here; `brackets[(i, j)]` with `i < j` holds the
/// coordinates of `[X_i, X_j]`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawAlgebra {
    pub dim: usize,
    pub basis_names: Vec<String>,
    pub brackets: BTreeMap<(usize, usize), Vec<Rational>>,
    pub grading: Option<Vec<u32>>,
}

impl RawAlgebra {
    pub fn new(dim: usize) -> Self {
        RawAlgebra {
            dim,
            basis_names: (1..=dim).map(|i| format!("X{i}")).collect(),
            brackets: BTreeMap::new(),
            grading: None,
        }
    }

    /// Sets `[X_i, X_j] = sum_k coeffs[k] X_k` with 1-based indices, as in the spec files.
    pub fn bracket(mut self, i: usize, j: usize, terms: &[(usize, Rational)]) -> Self {
        let mut v = vec![Rational::zero(); self.dim];
        for (k, c) in terms {
            v[k - 1] = c.clone();
        }
        self.brackets.insert((i - 1, j - 1), v);
        self
    }

    pub fn with_grading(mut self, degrees: Vec<u32>) -> Self {
        self.grading = Some(degrees);
        self
    }
}

/// A validated nilpotent Lie algebra with a strong Malcev basis.
#[derive(Clone)]
pub struct LieAlgebra {
    dim: usize,
    basis_names: Vec<String>,
    /// `structure[i][j]` = sparse coordinates of `[X_i, X_j]` (full antisymmetric table).
    structure: Vec<Vec<Vec<(usize, Rational)>>>,
    grading: Option<Vec<u32>>,
    series: LowerCentralSeries,
    bch_plan: Arc<OnceLock<Arc<BchPlan>>>,
    group_law: Arc<OnceLock<Arc<GroupLaw>>>,
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LieAlgebra")
            .field("dim", &self.dim)
            .field("basis_names", &self.basis_names)
            .field("step", &self.step())
            .finish()
    }
}

impl PartialEq for LieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.structure == other.structure
    }
}

/// Element of the algebra in coordinates of the ordered basis.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement<S>(pub Vec<S>);

impl<S: Scalar> AlgebraElement<S> {
    pub fn zero(dim: usize) -> Self {
        AlgebraElement(vec![S::zero(); dim])
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = vec![S::zero(); dim];
        v[i] = S::one();
        AlgebraElement(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn plus(&self, o: &Self) -> Self {
        AlgebraElement(self.0.iter().zip(&o.0).map(|(a, b)| a.plus(b)).collect())
    }

    pub fn minus(&self, o: &Self) -> Self {
        AlgebraElement(self.0.iter().zip(&o.0).map(|(a, b)| a.minus(b)).collect())
    }

    pub fn scale(&self, s: &S) -> Self {
        AlgebraElement(self.0.iter().map(|a| a.times(s)).collect())
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        AlgebraElement(self.0.iter().map(|a| a.scaled(q)).collect())
    }

    pub fn negated(&self) -> Self {
        AlgebraElement(self.0.iter().map(Scalar::negated).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

fn dense_bracket(structure: &[Vec<Vec<(usize, Rational)>>], dim: usize, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); dim];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            for (k, c) in &structure[i][j] {
                out[*k] += xi * yj * c;
            }
        }
    }
    out
}

/// Checks Jacobi, nilpotency and the strong Malcev order; returns the validated algebra.
pub fn validate_algebra(raw: &RawAlgebra) -> Result<LieAlgebra, AlgebraError> {
    let n = raw.dim;
    if n == 0 {
        return Err(AlgebraError::EmptyAlgebra);
    }
    if raw.basis_names.len() != n {
        return Err(AlgebraError::BasisNameCount { expected: n, got: raw.basis_names.len() });
    }
    if let Some(g) = &raw.grading {
        if g.len() != n {
            return Err(AlgebraError::GradingLength { expected: n, got: g.len() });
        }
    }
    let mut structure = vec![vec![Vec::new(); n]; n];
    for (&(i, j), coeffs) in &raw.brackets {
        if i >= j || j >= n {
            return Err(AlgebraError::InvalidBracketKey { i: i + 1, j: j + 1 });
        }
        if coeffs.len() != n {
            return Err(AlgebraError::BracketLength { i: i + 1, j: j + 1, expected: n, got: coeffs.len() });
        }
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                structure[i][j].push((k, c.clone()));
                structure[j][i].push((k, -c.clone()));
            }
        }
    }

    let unit = |i: usize| -> Vec<Rational> {
        let mut v = vec![Rational::zero(); n];
        v[i] = Rational::from_integer(1.into());
        v
    };
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (xi, xj, xk) = (unit(i), unit(j), unit(k));
                let a = dense_bracket(&structure, n, &xi, &dense_bracket(&structure, n, &xj, &xk));
                let b = dense_bracket(&structure, n, &xj, &dense_bracket(&structure, n, &xk, &xi));
                let c = dense_bracket(&structure, n, &xk, &dense_bracket(&structure, n, &xi, &xj));
                let defect: Vec<Rational> = (0..n).map(|t| &a[t] + &b[t] + &c[t]).collect();
                if defect.iter().any(|d| !d.is_zero()) {
                    return Err(AlgebraError::JacobiViolation { i: i + 1, j: j + 1, k: k + 1, defect });
                }
            }
        }
    }

    let series = lower_central_series_of(n, |x, y| dense_bracket(&structure, n, x, y))
        .map_err(|stable_dim| AlgebraError::NotNilpotent { stable_dim })?;

    // span{X_1..X_i} is an ideal iff every [X_a, X_b] with b < i lies in it.
    for i in 1..=n {
        let ok = (0..n).all(|a| (0..i).all(|b| structure[a][b].iter().all(|(k, _)| *k < i)));
        if !ok {
            return Err(AlgebraError::NotStrongMalcevOrder { index: i });
        }
    }

    Ok(LieAlgebra {
        dim: n,
        basis_names: raw.basis_names.clone(),
        structure,
        grading: raw.grading.clone(),
        series,
        bch_plan: Arc::new(OnceLock::new()),
        group_law: Arc::new(OnceLock::new()),
    })
}

impl LieAlgebra {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn grading(&self) -> Option<&[u32]> {
        self.grading.as_deref()
    }

    /// Nilpotency step `s`: `n^s != 0` and `n^{s+1} = 0`.
    pub fn step(&self) -> usize {
        self.series.step()
    }

    pub fn lower_central_series(&self) -> &LowerCentralSeries {
        &self.series
    }

    /// Sparse coordinates of `[X_i, X_j]`.
    pub fn structure_constants(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.structure[i][j]
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        for (k, c) in &self.structure[i][j] {
            v[*k] = c.clone();
        }
        v
    }

    pub fn is_abelian(&self) -> bool {
        self.structure.iter().all(|row| row.iter().all(Vec::is_empty))
    }

    pub fn bracket<S: Scalar>(&self, x: &AlgebraElement<S>, y: &AlgebraElement<S>) -> AlgebraElement<S> {
        let n = self.dim;
        let mut out = vec![S::zero(); n];
        for i in 0..n {
            if x.0[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if i == j || y.0[j].is_zero() || self.structure[i][j].is_empty() {
                    continue;
                }
                let xy = x.0[i].times(&y.0[j]);
                for (k, c) in &self.structure[i][j] {
                    out[*k] = out[*k].plus(&xy.scaled(c));
                }
            }
        }
        AlgebraElement(out)
    }

    /// Rebuilds the raw description (used for rescaling and serialisation).
    pub fn to_raw(&self) -> RawAlgebra {
        let mut brackets = BTreeMap::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                if !self.structure[i][j].is_empty() {
                    brackets.insert((i, j), self.bracket_basis(i, j));
                }
            }
        }
        RawAlgebra {
            dim: self.dim,
            basis_names: self.basis_names.clone(),
            brackets,
            grading: self.grading.clone(),
        }
    }

    pub(crate) fn bch_plan(&self) -> Arc<BchPlan> {
        self.bch_plan.get_or_init(|| Arc::new(BchPlan::new(self.step()))).clone()
    }

    /// The compiled group law in second-kind coordinates, built once per algebra.
    pub fn group_law(&self) -> Arc<GroupLaw> {
        self.group_law.get_or_init(|| Arc::new(GroupLaw::compile(self))).clone()
    }

    /// `[X_i, X_j] = 0` for all `j < i`: translating by `e^{X_i}` on the left is a pure shift
    /// of the `i`-th second-kind coordinate.
    pub fn left_translation_is_shift(&self, i: usize) -> bool {
        (0..i).all(|j| self.structure[i][j].is_empty())
    }
}

/// Quotient by the centre line `R X_1`; the images of `X_2..X_n` form the new basis.
pub fn quotient_algebra(alg: &LieAlgebra) -> Result<LieAlgebra, AlgebraError> {
    let n = alg.dim();
    if n < 2 {
        return Err(AlgebraError::EmptyAlgebra);
    }
    if let Some(j) = (1..n).find(|&j| !alg.structure[0][j].is_empty()) {
        return Err(AlgebraError::NotCentral { j: j + 1 });
    }
    let mut raw = RawAlgebra {
        dim: n - 1,
        basis_names: alg.basis_names[1..].to_vec(),
        brackets: BTreeMap::new(),
        grading: alg.grading.as_ref().map(|g| g[1..].to_vec()),
    };
    for i in 1..n {
        for j in i + 1..n {
            let v = alg.bracket_basis(i, j);
            if v[1..].iter().any(|c| !c.is_zero()) {
                raw.brackets.insert((i - 1, j - 1), v[1..].to_vec());
            }
        }
    }
    validate_algebra(&raw)
}
