use std::collections::BTreeMap;

use nilrigid::cohomology::CohomologyReport;
use nilrigid::lattices::{DiophantineCertificate, LatticePair, Provenance};
use nilrigid::lie::LieAlgebra;
use nilrigid::scalar::format_rational;
use nilrigid::solver::{IdentityReport, LevelReport, Reduction};
use nilrigid::specfile::{AlgebraSection, BracketEntry, Construction, SpecFile};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::ResolvedConfig;

/// JSON has no infinities; non-finite values are written as strings.
mod lossless_f64 {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str(&v.to_string())
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Status {
    pub exit_code: i32,
    pub code: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl Status {
    pub fn ok() -> Self {
        Status { exit_code: 0, code: "OK".into(), stage: None, level: None, message: None }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Inputs {
    pub specs: Vec<String>,
    pub spec: SpecFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<ResolvedConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraInfo {
    pub dim: usize,
    pub basis: Vec<String>,
    #[serde(default)]
    pub grading: Option<Vec<u32>>,
    pub step: usize,
    /// Dimensions of the lower central series terms.
    pub series_dims: Vec<usize>,
    pub abelian: bool,
    pub brackets: Vec<BracketEntry>,
}

impl AlgebraInfo {
    pub fn new(alg: &LieAlgebra) -> Self {
        AlgebraInfo {
            dim: alg.dim(),
            basis: alg.basis_names().to_vec(),
            grading: alg.grading().map(<[u32]>::to_vec),
            step: alg.step(),
            series_dims: alg.lower_central_series().dims(),
            abelian: alg.is_abelian(),
            brackets: AlgebraSection::from_algebra(alg).brackets,
        }
    }
}

/// Bases of the lower central series terms (rows are coordinate vectors).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesInfo {
    pub step: usize,
    pub dims: Vec<usize>,
    pub terms: Vec<Vec<Vec<String>>>,
}

impl SeriesInfo {
    pub fn new(alg: &LieAlgebra) -> Self {
        let lcs = alg.lower_central_series();
        SeriesInfo {
            step: lcs.step(),
            dims: lcs.dims(),
            terms: lcs.subspaces.iter().map(|m| m.iter().map(|row| row.iter().map(format_rational).collect()).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CohomologyInfo {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
    pub h1_basis: Vec<Vec<String>>,
    pub derived_dim: usize,
    #[serde(default)]
    pub hom_lattice_dim: Option<usize>,
}

impl From<CohomologyReport> for CohomologyInfo {
    fn from(r: CohomologyReport) -> Self {
        CohomologyInfo {
            h0: r.h0,
            h1: r.h1,
            h2: r.h2,
            h1_basis: r.h1_basis,
            derived_dim: r.derived_dim,
            hom_lattice_dim: r.hom_lattice_dim,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateInfo {
    pub value: f64,
    pub c: f64,
    pub alpha_exp: f64,
    pub provenance: String,
    pub k_max: u64,
    pub precision_bits: u32,
    #[serde(with = "lossless_f64")]
    pub min_ratio: f64,
}

impl From<&DiophantineCertificate> for CertificateInfo {
    fn from(c: &DiophantineCertificate) -> Self {
        CertificateInfo {
            value: c.value,
            c: c.c,
            alpha_exp: c.alpha_exp,
            provenance: match &c.provenance {
                Provenance::Liouville { min_poly } => format!("liouville({min_poly})"),
                Provenance::UserSupplied => "user".into(),
            },
            k_max: c.k_max,
            precision_bits: c.precision_bits,
            min_ratio: c.min_ratio,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationInfo {
    pub i: usize,
    pub j: usize,
    pub normal_form: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeInfo {
    pub construction: Construction,
    #[serde(default)]
    pub min_poly: Option<String>,
    /// Diagonal entries `a_ii` in the power basis of the field generator `a`.
    pub diagonal: Vec<String>,
    pub rotations: Vec<f64>,
    pub gamma_rescale: u32,
    pub closure_word_length: usize,
    pub closure_words_checked: usize,
    /// Structure constants of Λ in its own basis `Y`.
    pub lambda_brackets: Vec<BracketEntry>,
    pub relations: Vec<RelationInfo>,
    pub hom_dimension: usize,
    pub certificates: Vec<Option<CertificateInfo>>,
    /// `X`-coordinates of `e^{Y_j}`.
    pub generator_coords: Vec<Vec<f64>>,
}

impl LatticeInfo {
    pub fn new(pair: &LatticePair, construction: Construction) -> Self {
        let g = pair.gamma.summary();
        LatticeInfo {
            construction,
            min_poly: pair.field.as_ref().map(|f| nilrigid::lattices::numfield::format_poly(f.integer_min_poly())),
            diagonal: (0..pair.dim()).map(|i| pair.a[i][i].display()).collect(),
            rotations: pair.diagonal.iter().map(|d| d.to_f64()).collect(),
            gamma_rescale: g.rescale,
            closure_word_length: g.word_length,
            closure_words_checked: g.words_checked,
            lambda_brackets: AlgebraSection::from_algebra(&pair.lambda.algebra).brackets,
            relations: pair.relation_words().into_iter().map(|w| RelationInfo { i: w.i, j: w.j, normal_form: w.normal_form }).collect(),
            hom_dimension: pair.hom_dimension(),
            certificates: pair.certificates.iter().map(|c| c.as_ref().map(CertificateInfo::from)).collect(),
            generator_coords: pair.generator_coords_f64.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelInfo {
    pub level: usize,
    pub dim: usize,
    pub grid: Vec<usize>,
    pub rotation: f64,
    pub certified: bool,
    pub modes: usize,
    pub divisor_floor: f64,
    #[serde(with = "lossless_f64")]
    pub min_divisor: f64,
    #[serde(with = "lossless_f64")]
    pub observed_tail: f64,
    #[serde(with = "lossless_f64")]
    pub error_bound: f64,
    pub fiber_mean_max: f64,
    #[serde(default)]
    pub fiber_constancy: Option<f64>,
    pub incoming_means: Vec<f64>,
}

impl From<&LevelReport> for LevelInfo {
    fn from(l: &LevelReport) -> Self {
        LevelInfo {
            level: l.level,
            dim: l.dim,
            grid: l.grid.clone(),
            rotation: l.rotation,
            certified: l.certified,
            modes: l.transfer.modes,
            divisor_floor: l.transfer.divisor_floor,
            min_divisor: l.transfer.min_divisor,
            observed_tail: l.transfer.observed_tail,
            error_bound: l.transfer.error_bound,
            fiber_mean_max: l.fiber_mean_max,
            fiber_constancy: l.fiber_constancy,
            incoming_means: l.incoming_means.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityInfo {
    pub max_defect: f64,
    /// `(i, j, defect)` for each commutator relation `[λ_i, λ_j]`.
    pub relations: Vec<(usize, usize, f64)>,
}

impl From<IdentityReport> for IdentityInfo {
    fn from(r: IdentityReport) -> Self {
        IdentityInfo { max_defect: r.max_defect, relations: r.relations }
    }
}

/// Errors against the known answer, for cocycles generated from a homomorphism and a
/// transfer function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceErrors {
    pub hom_error: f64,
    pub transfer_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionSummary {
    pub source: String,
    pub resolution: Vec<usize>,
    pub points: usize,
    pub modes: usize,
    pub c0: Vec<f64>,
    pub functional: Vec<f64>,
    pub residual: f64,
    pub residual_per_generator: Vec<f64>,
    pub hom_defect: f64,
    pub h1_distance: f64,
    pub transfer_sup: f64,
    #[serde(default)]
    pub identity: Option<IdentityInfo>,
    #[serde(default)]
    pub reference: Option<ReferenceErrors>,
    pub levels: Vec<LevelInfo>,
    pub artifacts: Vec<String>,
}

impl ReductionSummary {
    pub fn new(source: &str, modes: usize, red: &Reduction) -> Self {
        ReductionSummary {
            source: source.into(),
            resolution: red.transfer.grid.dims().to_vec(),
            points: red.transfer.grid.len(),
            modes,
            c0: red.c0.clone(),
            functional: red.functional.clone(),
            residual: red.residual,
            residual_per_generator: red.residual_per_generator.clone(),
            hom_defect: red.hom_defect,
            h1_distance: red.h1_distance,
            transfer_sup: red.transfer.sup_norm(),
            identity: None,
            reference: None,
            levels: red.levels.iter().map(LevelInfo::from).collect(),
            artifacts: Vec::new(),
        }
    }
}

/// Everything a run produced. `timings` (seconds per stage) is the only field that
/// varies between identical runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub command: String,
    pub inputs: Inputs,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<CohomologyInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionSummary>,
    pub status: Status,
    #[serde(default)]
    pub timings: BTreeMap<String, f64>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            tool: format!("nilrigid {}", env!("CARGO_PKG_VERSION")),
            command: command.into(),
            inputs: Inputs::default(),
            algebra: None,
            series: None,
            lattice: None,
            cohomology: None,
            reduction: None,
            status: Status::ok(),
            timings: BTreeMap::new(),
        }
    }

    pub fn without_timings(&self) -> Self {
        RunReport { timings: BTreeMap::new(), ..self.clone() }
    }
}

/// Row of the convergence table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub run: String,
    pub resolution: Vec<usize>,
    pub points: usize,
    pub modes: usize,
    pub residual: f64,
    /// Residual of the previous (coarser) row divided by this one.
    #[serde(default)]
    pub ratio: Option<f64>,
    #[serde(default)]
    pub hom_error: Option<f64>,
    #[serde(default)]
    pub transfer_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Consolidated {
    pub tool: String,
    pub command: String,
    pub runs: Vec<RunReport>,
    pub convergence: Vec<ConvergenceRow>,
    #[serde(default)]
    pub min_ratio: Option<f64>,
    pub table: Vec<String>,
}

/// Line-oriented `key=value` dump: nested keys joined by `.`, array entries by index.
pub fn to_kv<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report types serialize");
    let mut out = String::new();
    flatten(&v, String::new(), &mut out);
    out
}

fn flatten(v: &Value, prefix: String, out: &mut String) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(x, join(k), out);
            }
        }
        Value::Array(xs) if !xs.is_empty() => {
            for (i, x) in xs.iter().enumerate() {
                flatten(x, join(&i.to_string()), out);
            }
        }
        Value::Array(_) => out.push_str(&format!("{prefix}=[]\n")),
        Value::String(s) => out.push_str(&format!("{prefix}={}\n", s.replace('\n', "\\n"))),
        other => out.push_str(&format!("{prefix}={other}\n")),
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_finite_values_survive_json() {
        let l = LevelInfo {
            level: 1,
            dim: 1,
            grid: vec![8],
            rotation: 0.5,
            certified: false,
            modes: 4,
            divisor_floor: 1e-9,
            min_divisor: f64::INFINITY,
            observed_tail: 0.0,
            error_bound: f64::NEG_INFINITY,
            fiber_mean_max: 0.0,
            fiber_constancy: None,
            incoming_means: vec![],
        };
        let back: LevelInfo = serde_json::from_str(&to_json(&l)).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn kv_flattens_nested_values() {
        let v = serde_json::json!({"a": {"b": [1, 2]}, "c": "x", "d": null, "e": []});
        assert_eq!(to_kv(&v), "a.b.0=1\na.b.1=2\nc=x\nd=null\ne=[]\n");
    }
}
