//! Declarative input files (TOML) and the plain-text grid format.
//!
//! A spec file may hold any of the sections `[algebra]`, `[lattice]`, `[cocycle]` and
//! `[solver]`; several files can be merged as long as no section is repeated.
//!
//! ```toml
//! [algebra]
//! dim = 3
//! basis = ["Z", "X", "Y"]        # optional
//! grading = [2, 1, 1]            # optional
//! # [X_i, X_j] gets c · X_k added, 1-based with i < j; c is "p/q", an integer or a decimal
//! brackets = [{ i = 2, j = 3, k = 1, c = "1" }]
//!
//! [lattice]
//! construction = "graded"        # or "diagonal"
//! min_poly = [-2, 0, 0, 1]       # integer coefficients, constant term first
//! root = ["5/4", "13/10"]        # optional isolating interval (default: largest real root)
//! # diagonal = [["0", "1"], ["1/2"]]   # entries of Q(α) in the power basis, for "diagonal"
//! k_max = 4096                   # optional certificate spot-check range
//! precision = 128                # optional bits
//!
//! [cocycle]
//! hom = [0.0, 0.3, -0.7]
//! transfer = { family = "random_base_torus", bandwidth = 4, amplitude = 1.0, seed = 11 }
//! # or raw data: grids = ["c1.grid", "c2.grid", "c3.grid"]  (paths relative to the file)
//!
//! [solver]
//! resolution = [64, 32, 32]
//! modes = 32
//! tol = 1e-6
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattices::{
    build_diophantine_pair, diagonal_pair, CertificateOptions, GradedStructure, LatticeError, LatticePair, NfElement,
    NumberField, PairOptions,
};
use crate::lie::{validate_algebra, AlgebraError, LieAlgebra, RawAlgebra};
use crate::scalar::{parse_rational, Rational};
use crate::solver::testfns::TransferSpec;
use crate::solver::{Grid, GridFunction};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("section [{section}] appears in more than one input file")]
    DuplicateSection { section: String },
    #[error("missing [{0}] section")]
    MissingSection(&'static str),
    #[error("invalid {what}: {message}")]
    Invalid { what: &'static str, message: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

impl SpecError {
    fn invalid(what: &'static str, message: impl Into<String>) -> Self {
        SpecError::Invalid { what, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSection {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<Vec<u32>>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Graded,
    Diagonal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    pub construction: Construction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_poly: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonal: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hom: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transfer: Option<TransferSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grids: Option<Vec<PathBuf>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub resolution: Option<Vec<usize>>,
    pub modes: Option<usize>,
    pub tol: Option<f64>,
    pub fiber_tol: Option<f64>,
    pub interp_order: Option<usize>,
    pub threads: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<CocycleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverSection>,
    /// Directory of the file that supplied `[cocycle]`, for resolving grid paths.
    #[serde(skip)]
    pub cocycle_dir: Option<PathBuf>,
}

pub fn parse_spec(text: &str, path: &Path) -> Result<SpecFile, SpecError> {
    let mut spec: SpecFile =
        toml::from_str(text).map_err(|e| SpecError::Parse { path: path.to_path_buf(), message: e.to_string() })?;
    if spec.cocycle.is_some() {
        spec.cocycle_dir = Some(path.parent().map(Path::to_path_buf).unwrap_or_default());
    }
    Ok(spec)
}

pub fn read_spec(path: &Path) -> Result<SpecFile, SpecError> {
    let text = std::fs::read_to_string(path).map_err(|source| SpecError::Io { path: path.to_path_buf(), source })?;
    parse_spec(&text, path)
}

/// Reads and merges several spec files.
pub fn read_specs(paths: &[PathBuf]) -> Result<SpecFile, SpecError> {
    let mut out = SpecFile::default();
    for p in paths {
        let s = read_spec(p)?;
        macro_rules! merge {
            ($field:ident) => {
                if let Some(v) = s.$field {
                    if out.$field.is_some() {
                        return Err(SpecError::DuplicateSection { section: stringify!($field).into() });
                    }
                    out.$field = Some(v);
                }
            };
        }
        merge!(algebra);
        merge!(lattice);
        merge!(solver);
        if s.cocycle.is_some() {
            out.cocycle_dir = s.cocycle_dir.clone();
        }
        merge!(cocycle);
    }
    Ok(out)
}

fn rational(s: &str) -> Result<Rational, SpecError> {
    parse_rational(s).ok_or_else(|| SpecError::invalid("rational", format!("cannot parse {s:?}")))
}

impl AlgebraSection {
    pub fn to_raw(&self) -> Result<RawAlgebra, SpecError> {
        let n = self.dim;
        let mut raw = RawAlgebra::new(n);
        if let Some(names) = &self.basis {
            raw.basis_names = names.clone();
        }
        raw.grading = self.grading.clone();
        for b in &self.brackets {
            if b.i == 0 || b.j == 0 || b.i >= b.j || b.j > n {
                return Err(AlgebraError::InvalidBracketKey { i: b.i, j: b.j }.into());
            }
            if b.k == 0 || b.k > n {
                return Err(SpecError::invalid("bracket", format!("target index {} outside 1..={n}", b.k)));
            }
            let v = raw.brackets.entry((b.i - 1, b.j - 1)).or_insert_with(|| vec![Rational::from_integer(0.into()); n]);
            v[b.k - 1] += rational(&b.c)?;
        }
        Ok(raw)
    }

    pub fn build(&self) -> Result<LieAlgebra, SpecError> {
        Ok(validate_algebra(&self.to_raw()?)?)
    }

    pub fn from_algebra(alg: &LieAlgebra) -> Self {
        let mut brackets = Vec::new();
        for i in 0..alg.dim() {
            for j in i + 1..alg.dim() {
                for (k, c) in alg.structure_constants(i, j) {
                    brackets.push(BracketEntry { i: i + 1, j: j + 1, k: k + 1, c: crate::scalar::format_rational(c) });
                }
            }
        }
        AlgebraSection {
            dim: alg.dim(),
            basis: Some(alg.basis_names().to_vec()),
            grading: alg.grading().map(<[u32]>::to_vec),
            brackets,
        }
    }
}

impl LatticeSection {
    pub fn certificate_options(&self) -> CertificateOptions {
        let d = CertificateOptions::default();
        CertificateOptions { k_max: self.k_max.unwrap_or(d.k_max), precision_bits: self.precision.unwrap_or(d.precision_bits) }
    }

    pub fn field(&self) -> Result<Option<Arc<NumberField>>, SpecError> {
        let Some(coeffs) = &self.min_poly else { return Ok(None) };
        let interval = match &self.root {
            Some([lo, hi]) => Some((rational(lo)?, rational(hi)?)),
            None => None,
        };
        let coeffs: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        Ok(Some(NumberField::new(&coeffs, interval)?))
    }

    pub fn build(&self, alg: &LieAlgebra, precision_override: Option<u32>) -> Result<LatticePair, SpecError> {
        let mut opts = PairOptions { certificate: self.certificate_options(), ..PairOptions::default() };
        if let Some(p) = precision_override {
            opts.certificate.precision_bits = p;
        }
        let field = self.field()?;
        match self.construction {
            Construction::Graded => {
                let field = field.ok_or_else(|| SpecError::invalid("lattice", "graded construction needs min_poly"))?;
                let degrees = alg
                    .grading()
                    .ok_or_else(|| SpecError::invalid("lattice", "graded construction needs [algebra].grading"))?;
                let grading = GradedStructure::new(alg, degrees.to_vec())?;
                Ok(build_diophantine_pair(alg, &grading, &field, &opts)?)
            }
            Construction::Diagonal => {
                let entries = self
                    .diagonal
                    .as_ref()
                    .ok_or_else(|| SpecError::invalid("lattice", "diagonal construction needs `diagonal`"))?;
                let diag = entries
                    .iter()
                    .map(|coeffs| {
                        let q = coeffs.iter().map(|c| rational(c)).collect::<Result<Vec<_>, _>>()?;
                        match &field {
                            Some(f) => Ok(f.element(q)),
                            None if q.len() <= 1 => {
                                Ok(NfElement::rational(q.into_iter().next().unwrap_or_else(|| Rational::from_integer(0.into()))))
                            }
                            None => Err(SpecError::invalid("lattice", "irrational diagonal entries need min_poly")),
                        }
                    })
                    .collect::<Result<Vec<_>, SpecError>>()?;
                Ok(diagonal_pair(alg, field, diag, &opts)?)
            }
        }
    }
}

/// Plain-text grid file:
///
/// ```text
/// # nilrigid grid
/// name: c(Y1)
/// dims: 64 32 32
/// data:
/// <one value per line, column-major: the first coordinate varies fastest>
/// ```
pub fn write_grid(f: &GridFunction, name: &str) -> String {
    let mut out = String::with_capacity(f.values.len() * 24 + 64);
    out.push_str("# nilrigid grid\n");
    let _ = writeln!(out, "name: {name}");
    let dims: Vec<String> = f.grid.dims().iter().map(|d| d.to_string()).collect();
    let _ = writeln!(out, "dims: {}", dims.join(" "));
    out.push_str("data:\n");
    for v in &f.values {
        let _ = writeln!(out, "{v:e}");
    }
    out
}

pub fn parse_grid(text: &str, path: &Path) -> Result<(String, GridFunction), SpecError> {
    let err = |line: usize, message: String| SpecError::Parse { path: path.to_path_buf(), message: format!("line {line}: {message}") };
    let mut name = String::new();
    let mut dims: Option<Vec<usize>> = None;
    let mut values = Vec::new();
    let mut in_data = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if in_data {
            for tok in line.split_whitespace() {
                values.push(tok.parse::<f64>().map_err(|e| err(idx + 1, format!("bad value {tok:?}: {e}")))?);
            }
            continue;
        }
        let (key, val) = line.split_once(':').ok_or_else(|| err(idx + 1, format!("expected `key: value`, got {line:?}")))?;
        match key.trim() {
            "name" => name = val.trim().to_string(),
            "dims" => {
                dims = Some(
                    val.split_whitespace()
                        .map(|t| t.parse::<usize>().map_err(|e| err(idx + 1, format!("bad dimension {t:?}: {e}"))))
                        .collect::<Result<_, _>>()?,
                )
            }
            "data" => in_data = true,
            other => return Err(err(idx + 1, format!("unknown header key {other:?}"))),
        }
    }
    let dims = dims.ok_or_else(|| err(0, "missing `dims:` header".into()))?;
    if dims.is_empty() || dims.contains(&0) {
        return Err(err(0, "dimensions must be positive".into()));
    }
    let grid = Grid::new(dims);
    if values.len() != grid.len() {
        return Err(err(0, format!("{} values for a grid of {} nodes", values.len(), grid.len())));
    }
    Ok((name, GridFunction::new(grid, values)))
}

pub fn read_grid(path: &Path) -> Result<(String, GridFunction), SpecError> {
    let text = std::fs::read_to_string(path).map_err(|source| SpecError::Io { path: path.to_path_buf(), source })?;
    parse_grid(&text, path)
}

/// Names of sections present, for reports.
pub fn sections(spec: &SpecFile) -> BTreeSet<&'static str> {
    let mut s = BTreeSet::new();
    if spec.algebra.is_some() {
        s.insert("algebra");
    }
    if spec.lattice.is_some() {
        s.insert("lattice");
    }
    if spec.cocycle.is_some() {
        s.insert("cocycle");
    }
    if spec.solver.is_some() {
        s.insert("solver");
    }
    s
}
