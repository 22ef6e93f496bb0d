use std::path::PathBuf;

use nilrigid::cohomology::CohomologyError;
use nilrigid::lattices::LatticeError;
use nilrigid::lie::AlgebraError;
use nilrigid::solver::SolverError;
use nilrigid::specfile::SpecError;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_RESONANCE: i32 = 3;
pub const EXIT_TAIL: i32 = 4;
pub const EXIT_FIBER: i32 = 5;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no run artifacts: {0}")]
    MissingArtifacts(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Output { .. } | CliError::MissingArtifacts(_) => EXIT_USAGE,
            CliError::Spec(SpecError::Io { .. } | SpecError::MissingSection(_)) => EXIT_USAGE,
            CliError::Spec(SpecError::Algebra(_) | SpecError::Lattice(_)) => EXIT_VALIDATION,
            CliError::Spec(_) | CliError::Algebra(_) | CliError::Lattice(_) | CliError::Cohomology(_) | CliError::Config(_) => {
                EXIT_VALIDATION
            }
            CliError::Solver(e) => match e {
                SolverError::Resonance { .. } => EXIT_RESONANCE,
                SolverError::TailTooFat { .. } => EXIT_TAIL,
                SolverError::FiberMeanNonzero { .. } | SolverError::NotFiberConstant { .. } => EXIT_FIBER,
                _ => EXIT_VALIDATION,
            },
        }
    }

    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "USAGE",
            CliError::Output { .. } => "OUTPUT_IO",
            CliError::MissingArtifacts(_) => "MISSING_ARTIFACTS",
            CliError::Config(_) => "INVALID_CONFIG",
            CliError::Spec(e) => match e {
                SpecError::Io { .. } => "INPUT_IO",
                SpecError::Parse { .. } => "PARSE",
                SpecError::DuplicateSection { .. } => "DUPLICATE_SECTION",
                SpecError::MissingSection(_) => "MISSING_SECTION",
                SpecError::Invalid { .. } => "INVALID_SPEC",
                SpecError::Algebra(a) => algebra_code(a),
                SpecError::Lattice(l) => lattice_code(l),
            },
            CliError::Algebra(a) => algebra_code(a),
            CliError::Lattice(l) => lattice_code(l),
            CliError::Cohomology(_) => "HOM_DIMENSION_MISMATCH",
            CliError::Solver(e) => match e {
                SolverError::Resonance { .. } => "RESONANCE",
                SolverError::TailTooFat { .. } => "TAIL_TOO_FAT",
                SolverError::FiberMeanNonzero { .. } => "FIBER_MEAN_NONZERO",
                SolverError::NotFiberConstant { .. } => "NOT_FIBER_CONSTANT",
                SolverError::GridMismatch(_) => "GRID_MISMATCH",
                SolverError::InvalidOptions(_) => "INVALID_OPTIONS",
                SolverError::UnsupportedTestFunction(_) => "UNSUPPORTED_TEST_FUNCTION",
                SolverError::Lattice(l) => lattice_code(l),
            },
        }
    }

    /// Pipeline stage that failed.
    pub fn stage(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "cli",
            CliError::Output { .. } => "output",
            CliError::MissingArtifacts(_) => "report",
            CliError::Config(_) => "config",
            CliError::Spec(SpecError::Algebra(_)) | CliError::Algebra(_) => "algebra-validation",
            CliError::Spec(SpecError::Lattice(l)) | CliError::Lattice(l) | CliError::Solver(SolverError::Lattice(l)) => {
                lattice_stage(l)
            }
            CliError::Spec(_) => "input",
            CliError::Cohomology(_) => "cohomology",
            CliError::Solver(e) => match e {
                SolverError::Resonance { .. } | SolverError::TailTooFat { .. } => "fiber-rotation-solve",
                SolverError::FiberMeanNonzero { .. } => "fiber-average",
                SolverError::NotFiberConstant { .. } => "descent",
                SolverError::UnsupportedTestFunction(_) => "cocycle-generation",
                _ => "cocycle-input",
            },
        }
    }

    pub fn level(&self) -> Option<usize> {
        match self {
            CliError::Solver(e) => e.level(),
            _ => None,
        }
    }

    /// One line for stderr: `error: stage=<stage> code=<CODE> exit=<n>[ level=<l>]: <message>`.
    pub fn diagnostic(&self) -> String {
        let level = self.level().map(|l| format!(" level={l}")).unwrap_or_default();
        format!("error: stage={} code={} exit={}{level}: {self}", self.stage(), self.code(), self.exit_code())
    }
}

fn algebra_code(e: &AlgebraError) -> &'static str {
    match e {
        AlgebraError::JacobiViolation { .. } => "JACOBI_VIOLATION",
        AlgebraError::NotNilpotent { .. } => "NOT_NILPOTENT",
        AlgebraError::NotStrongMalcevOrder { .. } => "NOT_STRONG_MALCEV_ORDER",
        AlgebraError::InvalidBracketKey { .. } => "INVALID_BRACKET_KEY",
        _ => "INVALID_ALGEBRA",
    }
}

fn lattice_code(e: &LatticeError) -> &'static str {
    match e {
        LatticeError::CertificateSpotCheckFailed { .. } => "CERTIFICATE_FAILED",
        LatticeError::RationalInput { .. } => "RATIONAL_INPUT",
        LatticeError::ClosureFailure { .. } | LatticeError::RescaleBoundExceeded { .. } => "LATTICE_CLOSURE",
        LatticeError::GradingViolation { .. } | LatticeError::GradingLength { .. } | LatticeError::NonPositiveDegree { .. } => {
            "INVALID_GRADING"
        }
        LatticeError::InvalidPolynomial(_)
        | LatticeError::ReduciblePolynomial { .. }
        | LatticeError::InvalidRootInterval { .. }
        | LatticeError::NoRealRoot
        | LatticeError::DegreeMismatch { .. } => "INVALID_NUMBER_FIELD",
        _ => "INVALID_LATTICE",
    }
}

fn lattice_stage(e: &LatticeError) -> &'static str {
    match e {
        LatticeError::CertificateSpotCheckFailed { .. } | LatticeError::RationalInput { .. } => "diophantine-certificate",
        LatticeError::InvalidPolynomial(_)
        | LatticeError::ReduciblePolynomial { .. }
        | LatticeError::InvalidRootInterval { .. }
        | LatticeError::NoRealRoot => "number-field",
        _ => "lattice-construction",
    }
}
