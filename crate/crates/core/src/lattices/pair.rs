//! Lattice pairs `(Γ, Λ)` with a lower-triangular change of basis, and the
//! graded construction `Y_i = α^{deg i} X_i`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::certificate::{diophantine_certificate, CertificateOptions, DiophantineCertificate};
use super::error::LatticeError;
use super::lattice::{check_closure, verify_lattice, ClosureOptions, LatticeSpec};
use super::numfield::{AlgebraicNumber, NfElement, NumberField};
use crate::linalg::rank;
use crate::lie::{coords_from_log, quotient_algebra, validate_algebra, AlgebraElement, LieAlgebra, RawAlgebra};
use crate::scalar::{Rational, Scalar};

/// Degrees `deg(i)` with `X_i ∈ V_{deg(i)}` and `[V_i, V_j] ⊆ V_{i+j}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedStructure {
    degrees: Vec<u32>,
}

impl GradedStructure {
    pub fn new(alg: &LieAlgebra, degrees: Vec<u32>) -> Result<Self, LatticeError> {
        let n = alg.dim();
        if degrees.len() != n {
            return Err(LatticeError::GradingLength { got: degrees.len(), dim: n });
        }
        if let Some(index) = degrees.iter().position(|&d| d == 0) {
            return Err(LatticeError::NonPositiveDegree { index: index + 1 });
        }
        for i in 0..n {
            for j in i + 1..n {
                for (k, _) in alg.structure_constants(i, j) {
                    let expected = degrees[i] + degrees[j];
                    if degrees[*k] != expected {
                        return Err(LatticeError::GradingViolation {
                            i: i + 1,
                            j: j + 1,
                            k: k + 1,
                            got: degrees[*k],
                            expected,
                        });
                    }
                }
            }
        }
        Ok(GradedStructure { degrees })
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn top(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }
}

/// Checks `[φX_i, φX_j] = φ[X_i, X_j]` in `Q(α)` for `φ = α^{deg}`; on failure returns the
/// first offending pair (1-based). Does not require the degrees to form a valid grading.
pub fn verify_graded_automorphism(alg: &LieAlgebra, degrees: &[u32], field: &Arc<NumberField>) -> Result<(), (usize, usize)> {
    let alpha = field.generator();
    let phi = |i: usize| alpha.pow(degrees[i]);
    let n = alg.dim();
    for i in 0..n {
        for j in i + 1..n {
            let coef = phi(i).times(&phi(j));
            for k in 0..n {
                let c = NfElement::rational(alg.bracket_basis(i, j)[k].clone());
                let lhs = coef.times(&c);
                let rhs = phi(k).times(&c);
                if lhs != rhs {
                    return Err((i + 1, j + 1));
                }
            }
        }
    }
    Ok(())
}

/// Flatness defect of a constant form `ω: 𝔫 → 𝔫` (a matrix acting on coordinates):
/// the largest `|ω[X_i,X_j] - [ωX_i, ωX_j]|` over basis pairs, zero iff `ω` is a
/// Lie algebra endomorphism.
pub fn flatness_defect(alg: &LieAlgebra, omega: &[Vec<f64>]) -> f64 {
    let n = alg.dim();
    let apply = |v: &[f64]| -> Vec<f64> { (0..n).map(|r| (0..n).map(|c| omega[r][c] * v[c]).sum()).collect() };
    let column = |i: usize| -> Vec<f64> { (0..n).map(|r| omega[r][i]).collect() };
    let mut worst = 0f64;
    for i in 0..n {
        for j in i + 1..n {
            let b: Vec<f64> = alg.bracket_basis(i, j).iter().map(crate::scalar::rational_to_f64).collect();
            let lhs = apply(&b);
            let rhs = alg.bracket(&AlgebraElement(column(i)), &AlgebraElement(column(j))).0;
            for (x, y) in lhs.iter().zip(&rhs) {
                worst = worst.max((x - y).abs());
            }
        }
    }
    worst
}

/// Solves `Y = A X` for `A`, where the rows of `x_basis` and `y_basis` are vectors in a
/// common coordinate system; fails unless `A` is lower triangular.
pub fn triangular_relation_check(
    x_basis: &[Vec<NfElement>],
    y_basis: &[Vec<NfElement>],
) -> Result<Vec<Vec<NfElement>>, LatticeError> {
    let n = x_basis.len();
    if y_basis.len() != n {
        return Err(LatticeError::DimensionMismatch { expected: n, got: y_basis.len() });
    }
    // Gauss–Jordan on [X^T | Y^T] gives A^T.
    let mut m: Vec<Vec<NfElement>> = (0..n)
        .map(|r| {
            x_basis.iter().map(|x| x[r].clone()).chain(y_basis.iter().map(|y| y[r].clone())).collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(LatticeError::SingularBasis { index: col + 1 })?;
        m.swap(col, pivot);
        let inv = m[col][col].inverse().expect("nonzero pivot is invertible");
        m[col] = m[col].iter().map(|v| v.times(&inv)).collect();
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (v, p) in m[r].iter_mut().zip(&pivot_row) {
                    *v = v.minus(&f.times(p));
                }
            }
        }
    }
    let a: Vec<Vec<NfElement>> = (0..n).map(|i| (0..n).map(|j| m[j][n + i].clone()).collect()).collect();
    for (i, row) in a.iter().enumerate() {
        if let Some(j) = (i + 1..n).find(|&j| !row[j].is_zero()) {
            return Err(LatticeError::NotTriangular { i: i + 1, j: j + 1 });
        }
        if row[i].is_zero() {
            return Err(LatticeError::SingularBasis { index: i + 1 });
        }
    }
    Ok(a)
}

/// `[λ_i, λ_j] = λ_1^{e_1}···λ_n^{e_n}` in Λ (1-based `i < j`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationWord {
    pub i: usize,
    pub j: usize,
    pub normal_form: Vec<i64>,
}

#[derive(Clone, Debug, Default)]
pub struct PairOptions {
    pub closure: ClosureOptions,
    pub certificate: CertificateOptions,
}

/// Lattices `Γ` (basis `X`) and `Λ` (basis `Y_i = Σ_{j≤i} a_ij X_j`).
#[derive(Clone, Debug)]
pub struct LatticePair {
    pub gamma: LatticeSpec,
    pub lambda: LatticeSpec,
    pub field: Option<Arc<NumberField>>,
    pub a: Vec<Vec<NfElement>>,
    pub diagonal: Vec<AlgebraicNumber>,
    /// `None` for rational diagonal entries (no certificate possible).
    pub certificates: Vec<Option<DiophantineCertificate>>,
    pub grading: Option<GradedStructure>,
    /// Second-kind `X`-coordinates of `e^{Y_j}`.
    pub generator_coords: Vec<Vec<NfElement>>,
    pub generator_coords_f64: Vec<Vec<f64>>,
}

/// Coordinates of `[Y_i, Y_j]` in the `Y` basis, which must be rational.
fn lambda_structure(alg: &LieAlgebra, a: &[Vec<NfElement>]) -> Result<RawAlgebra, LatticeError> {
    let n = alg.dim();
    let mut raw = RawAlgebra::new(n);
    raw.basis_names = (1..=n).map(|i| format!("Y{i}")).collect();
    for i in 0..n {
        for j in i + 1..n {
            let v = alg.bracket(&AlgebraElement(a[i].clone()), &AlgebraElement(a[j].clone())).0;
            if v.iter().all(Zero::is_zero) {
                continue;
            }
            // v = Σ_k b_k Y_k with Y_k = Σ_{l ≤ k} a_kl X_l: back substitution from the top index.
            let mut b = vec![NfElement::zero(); n];
            for l in (0..n).rev() {
                let mut rest = v[l].clone();
                for k in l + 1..n {
                    rest = rest.minus(&b[k].times(&a[k][l]));
                }
                b[l] = rest.divided(&a[l][l]).expect("diagonal entries are nonzero");
            }
            let coeffs = b
                .iter()
                .map(|x| x.as_rational().ok_or(LatticeError::NonRationalStructure { i: i + 1, j: j + 1 }))
                .collect::<Result<Vec<_>, _>>()?;
            raw.brackets.insert((i, j), coeffs);
        }
    }
    Ok(raw)
}

fn certify(
    diagonal: &[NfElement],
    opts: CertificateOptions,
) -> Result<(Vec<AlgebraicNumber>, Vec<Option<DiophantineCertificate>>), LatticeError> {
    let mut numbers: Vec<AlgebraicNumber> = Vec::new();
    let mut certs: Vec<Option<DiophantineCertificate>> = Vec::new();
    for (i, d) in diagonal.iter().enumerate() {
        if let Some(prev) = diagonal[..i].iter().position(|p| p == d) {
            numbers.push(numbers[prev].clone());
            certs.push(certs[prev].clone());
            continue;
        }
        let num = d.algebraic_number();
        let cert = if num.is_rational() { None } else { Some(diophantine_certificate(&num, opts)?) };
        numbers.push(num);
        certs.push(cert);
    }
    Ok((numbers, certs))
}

impl LatticePair {
    /// Builds a pair from `Γ` and a lower-triangular matrix `a` (rows are the `Y_i` in `X`
    /// coordinates). `Λ` must itself pass the closure check in its own basis.
    pub fn from_triangular(
        gamma: LatticeSpec,
        field: Option<Arc<NumberField>>,
        a: Vec<Vec<NfElement>>,
        grading: Option<GradedStructure>,
        opts: &PairOptions,
    ) -> Result<Self, LatticeError> {
        let n = gamma.algebra.dim();
        if a.len() != n || a.iter().any(|r| r.len() != n) {
            return Err(LatticeError::DimensionMismatch { expected: n, got: a.len() });
        }
        for (i, row) in a.iter().enumerate() {
            if let Some(j) = (i + 1..n).find(|&j| !row[j].is_zero()) {
                return Err(LatticeError::NotTriangular { i: i + 1, j: j + 1 });
            }
            if row[i].is_zero() {
                return Err(LatticeError::SingularBasis { index: i + 1 });
            }
        }
        let raw = lambda_structure(&gamma.algebra, &a)?;
        let lambda_alg = validate_algebra(&raw).map_err(|e| LatticeError::InvalidLambdaAlgebra(e.to_string()))?;
        let words = check_closure(&lambda_alg, opts.closure.max_word_len)?;
        let lambda = LatticeSpec { algebra: lambda_alg, rescale: 1, word_length: opts.closure.max_word_len, words_checked: words };
        let diag: Vec<NfElement> = (0..n).map(|i| a[i][i].clone()).collect();
        let (diagonal, certificates) = certify(&diag, opts.certificate)?;
        Ok(Self::assemble(gamma, lambda, field, a, diagonal, certificates, grading))
    }

    fn assemble(
        gamma: LatticeSpec,
        lambda: LatticeSpec,
        field: Option<Arc<NumberField>>,
        a: Vec<Vec<NfElement>>,
        diagonal: Vec<AlgebraicNumber>,
        certificates: Vec<Option<DiophantineCertificate>>,
        grading: Option<GradedStructure>,
    ) -> Self {
        let generator_coords: Vec<Vec<NfElement>> =
            a.iter().map(|row| coords_from_log(&gamma.algebra, &AlgebraElement(row.clone()))).collect();
        let generator_coords_f64 = generator_coords.iter().map(|c| c.iter().map(NfElement::to_f64).collect()).collect();
        LatticePair { gamma, lambda, field, a, diagonal, certificates, grading, generator_coords, generator_coords_f64 }
    }

    pub fn dim(&self) -> usize {
        self.gamma.algebra.dim()
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.gamma.algebra
    }

    /// Fiber rotation number `a = a_11`.
    pub fn rotation(&self) -> f64 {
        self.diagonal[0].to_f64()
    }

    /// Commutators of the Λ generators written in Λ's own second-kind coordinates.
    pub fn relation_words(&self) -> Vec<RelationWord> {
        let law = self.lambda.algebra.group_law();
        let n = self.dim();
        let unit = |i: usize| {
            let mut v = vec![Rational::zero(); n];
            v[i] = Rational::one();
            v
        };
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let c = law.commutator(&unit(i), &unit(j));
                let normal_form = c
                    .iter()
                    .map(|x| {
                        debug_assert!(x.is_integer());
                        x.to_integer().to_i64().expect("relation exponent fits in i64")
                    })
                    .collect();
                out.push(RelationWord { i: i + 1, j: j + 1, normal_form });
            }
        }
        out
    }

    /// `dim Hom(Λ, R)`: homomorphisms are determined by their values on generators and
    /// must vanish on every commutator.
    pub fn hom_dimension(&self) -> usize {
        let n = self.dim();
        let rows: Vec<Vec<Rational>> = self
            .relation_words()
            .into_iter()
            .map(|w| w.normal_form.iter().map(|&e| Rational::from_integer(BigInt::from(e))).collect())
            .filter(|r: &Vec<Rational>| r.iter().any(|x| !x.is_zero()))
            .collect();
        n - if rows.is_empty() { 0 } else { rank(&rows, n) }
    }

    /// The pair induced on `N̄ = exp(R X_1)\N` (drops `X_1`, `Y_1`, and the first row and column of `a`).
    pub fn quotient(&self) -> Result<LatticePair, LatticeError> {
        let q = |alg: &LieAlgebra| quotient_algebra(alg).map_err(|e| LatticeError::InvalidLambdaAlgebra(e.to_string()));
        let gamma = LatticeSpec { algebra: q(&self.gamma.algebra)?, ..self.gamma.clone() };
        let lambda = LatticeSpec { algebra: q(&self.lambda.algebra)?, ..self.lambda.clone() };
        let a = self.a[1..].iter().map(|row| row[1..].to_vec()).collect();
        let grading = self.grading.as_ref().map(|g| GradedStructure { degrees: g.degrees[1..].to_vec() });
        Ok(Self::assemble(
            gamma,
            lambda,
            self.field.clone(),
            a,
            self.diagonal[1..].to_vec(),
            self.certificates[1..].to_vec(),
            grading,
        ))
    }
}

/// Graded construction: `Γ` from the (rescaled) integer basis, `Λ` from `Y_i = α^{deg i} X_i`,
/// where `α` generates `field` and `deg` is a grading with top degree below `[Q(α):Q]`.
pub fn build_diophantine_pair(
    alg: &LieAlgebra,
    grading: &GradedStructure,
    field: &Arc<NumberField>,
    opts: &PairOptions,
) -> Result<LatticePair, LatticeError> {
    let n = alg.dim();
    if grading.degrees().len() != n {
        return Err(LatticeError::GradingLength { got: grading.degrees().len(), dim: n });
    }
    let grading = GradedStructure::new(alg, grading.degrees().to_vec())?;
    if field.degree() as u32 <= grading.top() {
        return Err(LatticeError::DegreeMismatch { degree: field.degree(), top: grading.top() });
    }
    let gamma = verify_lattice(alg, opts.closure)?;
    debug_assert!(verify_graded_automorphism(&gamma.algebra, grading.degrees(), field).is_ok());
    let alpha = field.generator();
    let a: Vec<Vec<NfElement>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { alpha.pow(grading.degrees()[i]) } else { NfElement::zero() }).collect())
        .collect();
    LatticePair::from_triangular(gamma, Some(field.clone()), a, Some(grading), opts)
}

/// Diagonal pair `Y_i = d_i X_i` with arbitrary (possibly rational) entries, used for
/// abelian examples and resonance tests.
pub fn diagonal_pair(
    alg: &LieAlgebra,
    field: Option<Arc<NumberField>>,
    diagonal: Vec<NfElement>,
    opts: &PairOptions,
) -> Result<LatticePair, LatticeError> {
    let n = alg.dim();
    if diagonal.len() != n {
        return Err(LatticeError::DimensionMismatch { expected: n, got: diagonal.len() });
    }
    let gamma = verify_lattice(alg, opts.closure)?;
    let a = (0..n)
        .map(|i| (0..n).map(|j| if i == j { diagonal[i].clone() } else { NfElement::zero() }).collect())
        .collect();
    LatticePair::from_triangular(gamma, field, a, None, opts)
}
