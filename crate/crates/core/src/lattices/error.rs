use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("invalid minimal polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("minimal polynomial is reducible: factor {factor}")]
    ReduciblePolynomial { factor: String },
    #[error("interval ({lo}, {hi}] contains {roots} roots of the minimal polynomial, expected 1")]
    InvalidRootInterval { lo: String, hi: String, roots: usize },
    #[error("minimal polynomial has no real root")]
    NoRealRoot,
    #[error("number is rational ({value}); a Diophantine certificate needs an irrational algebraic number")]
    RationalInput { value: String },
    #[error("divisor bound fails at k = {k}: |1 - e^(2 pi i k a)| ~ {divisor:e} < C |k|^-alpha = {bound:e}")]
    CertificateSpotCheckFailed { k: i64, divisor: f64, bound: f64 },
    #[error("grading has {got} degrees for a {dim}-dimensional algebra")]
    GradingLength { got: usize, dim: usize },
    #[error("grading degrees must be positive (index {index})")]
    NonPositiveDegree { index: usize },
    #[error("[X{i}, X{j}] has a component on X{k} of degree {got}, expected {expected}")]
    GradingViolation { i: usize, j: usize, k: usize, got: u32, expected: u32 },
    #[error("minimal polynomial degree {degree} must exceed the top grading degree {top}")]
    DegreeMismatch { degree: usize, top: u32 },
    #[error("lattice closure fails: word {word:?} has coordinates {coords:?}")]
    ClosureFailure { word: Vec<i32>, coords: Vec<String> },
    #[error("no integer rescaling up to {bound} makes the integer points a subgroup")]
    RescaleBoundExceeded { bound: u32 },
    #[error("change of basis is not lower triangular: a[{i}][{j}] != 0")]
    NotTriangular { i: usize, j: usize },
    #[error("bases are linearly dependent (pivot {index})")]
    SingularBasis { index: usize },
    #[error("[Y{i}, Y{j}] has non-rational coordinates in the Y basis")]
    NonRationalStructure { i: usize, j: usize },
    #[error("the Y basis violates the strong Malcev order or nilpotency: {0}")]
    InvalidLambdaAlgebra(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}
