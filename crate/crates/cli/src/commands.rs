use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use nilrigid::cohomology::cohomology_report;
use nilrigid::lattices::LatticePair;
use nilrigid::lie::LieAlgebra;
use nilrigid::solver::testfns::{generate_cocycle, TestFunction, TransferSpec};
use nilrigid::solver::{grid_mean, reduce_cocycle, verify_cocycle_identity, CocycleData, Grid, Reduction};
use nilrigid::specfile::{read_grid, read_specs, write_grid, SpecError, SpecFile};

use crate::config::{ResolvedConfig, RunConfig};
use crate::error::CliError;
use crate::report::{
    to_json, AlgebraInfo, CohomologyInfo, Consolidated, ConvergenceRow, LatticeInfo, ReductionSummary, ReferenceErrors,
    RunReport, SeriesInfo,
};

/// Header of `divisors.csv`.
pub const DIVISORS_CSV_HEADER: &str = "level,k,rotation,divisor,certified_bound,floor,used";
/// Header of `convergence.csv`.
pub const CONVERGENCE_CSV_HEADER: &str = "run,resolution,points,modes,residual,ratio,hom_error,transfer_error";

fn timed<T>(report: &mut RunReport, stage: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    report.timings.insert(stage.to_string(), start.elapsed().as_secs_f64());
    out
}

/// Reads the spec files and records them in the report.
fn load(config: &RunConfig, report: &mut RunReport) -> Result<SpecFile, CliError> {
    if config.specs.is_empty() {
        return Err(CliError::Usage("no spec files given".into()));
    }
    let spec = read_specs(&config.specs)?;
    report.inputs.specs = config.specs.iter().map(|p| p.display().to_string()).collect();
    report.inputs.spec = SpecFile { cocycle_dir: None, ..spec.clone() };
    Ok(spec)
}

fn algebra(spec: &SpecFile, report: &mut RunReport) -> Result<LieAlgebra, CliError> {
    let section = spec.algebra.as_ref().ok_or(SpecError::MissingSection("algebra"))?;
    let alg = timed(report, "algebra", || section.build())?;
    report.algebra = Some(AlgebraInfo::new(&alg));
    Ok(alg)
}

fn lattice(spec: &SpecFile, alg: &LieAlgebra, config: &RunConfig, report: &mut RunReport) -> Result<LatticePair, CliError> {
    let section = spec.lattice.as_ref().ok_or(SpecError::MissingSection("lattice"))?;
    let pair = timed(report, "lattice", || section.build(alg, config.precision))?;
    report.lattice = Some(LatticeInfo::new(&pair, section.construction));
    Ok(pair)
}

fn cohomology(alg: &LieAlgebra, pair: Option<&LatticePair>, report: &mut RunReport) -> Result<(), CliError> {
    let hom = pair.map(LatticePair::hom_dimension);
    let c = timed(report, "cohomology", || cohomology_report(alg, hom))?;
    report.cohomology = Some(CohomologyInfo::from(c));
    Ok(())
}

/// The cocycle to reduce, and the generating data when it was given symbolically.
enum Cocycle {
    Symbolic { data: CocycleData, hom: Vec<f64>, transfer: TestFunction },
    Raw(CocycleData),
}

impl Cocycle {
    fn data(&self) -> &CocycleData {
        match self {
            Cocycle::Symbolic { data, .. } | Cocycle::Raw(data) => data,
        }
    }
}

fn read_raw_grids(spec: &SpecFile, dim: usize) -> Result<Option<CocycleData>, CliError> {
    let Some(section) = &spec.cocycle else { return Ok(None) };
    let Some(paths) = &section.grids else { return Ok(None) };
    if section.hom.is_some() || section.transfer.is_some() {
        return Err(SpecError::Invalid { what: "cocycle", message: "give either grids or hom/transfer, not both".into() }.into());
    }
    if paths.len() != dim {
        return Err(SpecError::Invalid { what: "cocycle", message: format!("{} grid files for {dim} generators", paths.len()) }.into());
    }
    let base = spec.cocycle_dir.clone().unwrap_or_default();
    let mut grid: Option<Grid> = None;
    let mut generators = Vec::with_capacity(dim);
    for p in paths {
        let path = if p.is_absolute() { p.clone() } else { base.join(p) };
        let (_, f) = read_grid(&path)?;
        if let Some(g) = &grid {
            if *g != f.grid {
                return Err(SpecError::Invalid { what: "cocycle", message: format!("{} has dims {:?}, expected {:?}", path.display(), f.grid.dims(), g.dims()) }.into());
            }
        }
        grid = Some(f.grid.clone());
        generators.push(f.values);
    }
    let grid = grid.expect("at least one generator");
    Ok(Some(CocycleData::new(grid, generators)?))
}

fn cocycle(spec: &SpecFile, pair: &LatticePair, resolved: &ResolvedConfig, raw: Option<CocycleData>) -> Result<Cocycle, CliError> {
    if let Some(data) = raw {
        return Ok(Cocycle::Raw(data));
    }
    let section = spec.cocycle.as_ref().ok_or(SpecError::MissingSection("cocycle"))?;
    let hom = section
        .hom
        .clone()
        .ok_or_else(|| SpecError::Invalid { what: "cocycle", message: "symbolic cocycles need `hom`".into() })?;
    let transfer = TestFunction::new(section.transfer.as_ref().unwrap_or(&TransferSpec::Zero), pair.algebra())?;
    let data = generate_cocycle(pair, &Grid::new(resolved.resolution.clone()), &hom, &transfer)?;
    Ok(Cocycle::Symbolic { data, hom, transfer })
}

fn reference_errors(red: &Reduction, hom: &[f64], transfer: &TestFunction) -> ReferenceErrors {
    let grid = &red.transfer.grid;
    let raw: Vec<f64> = grid.points().map(|x| transfer.eval(&x)).collect();
    let mean = grid_mean(&raw);
    let transfer_error = raw.iter().zip(&red.transfer.values).map(|(p, q)| (p - mean - q).abs()).fold(0.0, f64::max);
    let hom_error = red.c0.iter().zip(hom).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ReferenceErrors { hom_error, transfer_error }
}

pub fn cmd_validate(config: &RunConfig, report: &mut RunReport) -> Result<(), CliError> {
    let spec = load(config, report)?;
    let alg = algebra(&spec, report)?;
    let pair = if spec.lattice.is_some() { Some(lattice(&spec, &alg, config, report)?) } else { None };
    if let Some(pair) = &pair {
        let raw = read_raw_grids(&spec, pair.dim())?;
        if let Some(section) = &spec.cocycle {
            let fixed = raw.as_ref().map(|c| c.grid.dims().to_vec());
            let resolved = config.resolve(spec.solver.as_ref(), pair.dim(), fixed.as_deref())?;
            if raw.is_none() {
                let n_hom = section.hom.as_ref().map_or(0, Vec::len);
                if n_hom != pair.dim() {
                    return Err(SpecError::Invalid { what: "cocycle", message: format!("hom has {n_hom} values for {} generators", pair.dim()) }.into());
                }
                TestFunction::new(section.transfer.as_ref().unwrap_or(&TransferSpec::Zero), pair.algebra())?;
            }
            report.inputs.config = Some(resolved);
        }
    }
    Ok(())
}

pub fn cmd_series(config: &RunConfig, report: &mut RunReport) -> Result<(), CliError> {
    let spec = load(config, report)?;
    let alg = algebra(&spec, report)?;
    report.series = Some(SeriesInfo::new(&alg));
    Ok(())
}

pub fn cmd_cohomology(config: &RunConfig, report: &mut RunReport) -> Result<(), CliError> {
    let spec = load(config, report)?;
    let alg = algebra(&spec, report)?;
    let pair = if spec.lattice.is_some() { Some(lattice(&spec, &alg, config, report)?) } else { None };
    cohomology(&alg, pair.as_ref(), report)
}

pub fn cmd_lattice_build(config: &RunConfig, report: &mut RunReport) -> Result<(), CliError> {
    let spec = load(config, report)?;
    let alg = algebra(&spec, report)?;
    lattice(&spec, &alg, config, report)?;
    Ok(())
}

pub fn cmd_solve(config: &RunConfig, report: &mut RunReport) -> Result<(), CliError> {
    let spec = load(config, report)?;
    let alg = algebra(&spec, report)?;
    let pair = lattice(&spec, &alg, config, report)?;
    cohomology(&alg, Some(&pair), report)?;
    let raw = read_raw_grids(&spec, pair.dim())?;
    let fixed = raw.as_ref().map(|c| c.grid.dims().to_vec());
    let resolved = config.resolve(spec.solver.as_ref(), pair.dim(), fixed.as_deref())?;
    report.inputs.config = Some(resolved.clone());
    let c = timed(report, "cocycle", || cocycle(&spec, &pair, &resolved, raw))?;
    let opts = resolved.solver_options();
    let identity = if config.check_identity {
        Some(timed(report, "identity", || verify_cocycle_identity(c.data(), &pair, opts.interp_order))?)
    } else {
        None
    };
    let red = timed(report, "reduce", || reduce_cocycle(c.data(), &pair, &opts))?;
    let source = if matches!(c, Cocycle::Raw(_)) { "grid" } else { "symbolic" };
    let mut summary = ReductionSummary::new(source, resolved.modes, &red);
    summary.identity = identity.map(Into::into);
    if let Cocycle::Symbolic { hom, transfer, .. } = &c {
        summary.reference = Some(timed(report, "reference", || reference_errors(&red, hom, transfer)));
    }
    if let Some(dir) = &config.out {
        summary.artifacts = write_artifacts(dir, &red, report.lattice.as_ref().expect("lattice was built"))?;
    }
    report.reduction = Some(summary);
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Output { path: path.to_path_buf(), source })
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Output { path: dir.to_path_buf(), source })
}

fn write_artifacts(dir: &Path, red: &Reduction, lattice: &LatticeInfo) -> Result<Vec<String>, CliError> {
    ensure_dir(dir)?;
    let mut names = vec!["P.grid".to_string()];
    write_file(&dir.join("P.grid"), &write_grid(&red.transfer, "P"))?;
    for (l, h) in red.level_transfers.iter().enumerate() {
        let name = format!("h_level{}.grid", l + 1);
        write_file(&dir.join(&name), &write_grid(h, &format!("h{}", l + 1)))?;
        names.push(name);
    }
    write_file(&dir.join("divisors.csv"), &divisors_csv(red, lattice))?;
    names.push("divisors.csv".into());
    Ok(names)
}

/// Small divisors `|e^{2πika} - 1|` of each level's fiber solve.
pub fn divisors_csv(red: &Reduction, lattice: &LatticeInfo) -> String {
    let mut out = String::from(DIVISORS_CSV_HEADER);
    out.push('\n');
    for lvl in &red.levels {
        let cert = lattice.certificates.get(lvl.level - 1).and_then(Option::as_ref);
        let m = lvl.grid[0];
        for k in 1..=m / 2 {
            let divisor = 2.0 * (std::f64::consts::PI * k as f64 * lvl.rotation).sin().abs();
            let bound = cert.map(|c| format!("{:e}", c.c * (k as f64).powf(-c.alpha_exp))).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{k},{:e},{divisor:e},{bound},{:e},{}",
                lvl.level,
                lvl.rotation,
                lvl.transfer.divisor_floor,
                u8::from(k <= lvl.transfer.modes)
            );
        }
    }
    out
}

/// Collects `report.json` from `dir` and its immediate subdirectories.
fn collect_reports(dirs: &[PathBuf]) -> Result<Vec<(String, RunReport)>, CliError> {
    let mut found = Vec::new();
    for dir in dirs {
        if !dir.is_dir() {
            return Err(CliError::MissingArtifacts(format!("{} is not a directory", dir.display())));
        }
        let mut candidates = vec![dir.join("report.json")];
        let mut subdirs: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(|e| CliError::MissingArtifacts(format!("{}: {e}", dir.display())))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_dir())
            .collect();
        subdirs.sort();
        candidates.extend(subdirs.into_iter().map(|d| d.join("report.json")));
        for path in candidates.into_iter().filter(|p| p.is_file()) {
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::MissingArtifacts(format!("{}: {e}", path.display())))?;
            let report: RunReport = serde_json::from_str(&text)
                .map_err(|e| CliError::MissingArtifacts(format!("{} is not a run report: {e}", path.display())))?;
            let name = path.parent().map(|p| p.display().to_string()).unwrap_or_default();
            found.push((name, report));
        }
    }
    if found.is_empty() {
        let list: Vec<String> = dirs.iter().map(|d| d.display().to_string()).collect();
        return Err(CliError::MissingArtifacts(format!("no report.json under {}", list.join(", "))));
    }
    Ok(found)
}

pub enum ReportOutput {
    Single(Box<RunReport>),
    Merged(Consolidated),
}

pub fn cmd_report(dirs: &[PathBuf]) -> Result<ReportOutput, CliError> {
    let mut runs = collect_reports(dirs)?;
    if runs.len() == 1 {
        return Ok(ReportOutput::Single(Box::new(runs.pop().expect("one run").1)));
    }
    runs.sort_by_key(|(name, r)| (r.reduction.as_ref().map_or(0, |s| s.points), name.clone()));
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for (name, r) in &runs {
        let Some(s) = &r.reduction else { continue };
        let ratio = rows.last().map(|prev| prev.residual / s.residual);
        rows.push(ConvergenceRow {
            run: name.clone(),
            resolution: s.resolution.clone(),
            points: s.points,
            modes: s.modes,
            residual: s.residual,
            ratio,
            hom_error: s.reference.as_ref().map(|x| x.hom_error),
            transfer_error: s.reference.as_ref().map(|x| x.transfer_error),
        });
    }
    let min_ratio = rows.iter().filter_map(|r| r.ratio).reduce(f64::min);
    Ok(ReportOutput::Merged(Consolidated {
        tool: format!("nilrigid {}", env!("CARGO_PKG_VERSION")),
        command: "report".into(),
        table: convergence_table(&rows),
        runs: runs.into_iter().map(|(_, r)| r).collect(),
        convergence: rows,
        min_ratio,
    }))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.3e}")).unwrap_or_else(|| "-".into())
}

fn dims(d: &[usize]) -> String {
    d.iter().map(usize::to_string).collect::<Vec<_>>().join("x")
}

pub fn convergence_table(rows: &[ConvergenceRow]) -> Vec<String> {
    let mut lines = vec![format!("{:<14} {:>10} {:>4} {:>12} {:>10} {:>12} {:>12}", "resolution", "points", "K", "residual", "ratio", "hom_err", "P_err")];
    for r in rows {
        lines.push(format!(
            "{:<14} {:>10} {:>4} {:>12.3e} {:>10} {:>12} {:>12}",
            dims(&r.resolution),
            r.points,
            r.modes,
            r.residual,
            r.ratio.map(|x| format!("{x:.1}")).unwrap_or_else(|| "-".into()),
            opt(r.hom_error),
            opt(r.transfer_error)
        ));
    }
    lines
}

pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from(CONVERGENCE_CSV_HEADER);
    out.push('\n');
    let o = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{:e},{},{},{}",
            r.run.replace(',', "_"),
            dims(&r.resolution),
            r.points,
            r.modes,
            r.residual,
            o(r.ratio),
            o(r.hom_error),
            o(r.transfer_error)
        );
    }
    out
}

pub fn write_consolidated(dir: &Path, doc: &Consolidated) -> Result<(), CliError> {
    ensure_dir(dir)?;
    write_file(&dir.join("convergence.csv"), &convergence_csv(&doc.convergence))?;
    write_file(&dir.join("convergence.txt"), &(doc.table.join("\n") + "\n"))?;
    write_file(&dir.join("consolidated.json"), &to_json(doc))
}

pub fn write_report(dir: &Path, report: &RunReport) -> Result<(), CliError> {
    ensure_dir(dir)?;
    write_file(&dir.join("report.json"), &to_json(report))?;
    write_file(&dir.join("report.kv"), &crate::report::to_kv(report))
}
