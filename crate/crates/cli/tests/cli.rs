//! End-to-end runs of the command line front end on the shipped scenarios.

use std::path::{Path, PathBuf};
use std::process::Command;

use nilrigid::solver::{Grid, GridFunction};
use nilrigid::specfile::write_grid;
use nilrigid_cli::report::{Consolidated, RunReport};
use nilrigid_cli::{run_from_args, Outcome};

fn scenario(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(rel).display().to_string()
}

fn run(args: &[&str]) -> Outcome {
    run_from_args(std::iter::once("nilrigid").chain(args.iter().copied()))
}

fn report_of(o: &Outcome) -> RunReport {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("{e}\n{}\n{}", o.stdout, o.stderr))
}

#[test]
fn validate_h3_reports_step_two() {
    let o = run(&["validate", &scenario("algebras/h3.toml")]);
    assert_eq!(o.exit_code, 0, "{}", o.stderr);
    let r = report_of(&o);
    assert_eq!(r.algebra.unwrap().step, 2);
    assert_eq!(r.status.code, "OK");
}

#[test]
fn jacobi_broken_exits_two_with_witness() {
    let o = run(&["validate", &scenario("algebras/jacobi_broken.toml")]);
    assert_eq!(o.exit_code, 2);
    assert!(o.stderr.contains("stage=algebra-validation code=JACOBI_VIOLATION exit=2"), "{}", o.stderr);
    assert!(o.stderr.contains("(3,4,5)"), "{}", o.stderr);
    assert_eq!(report_of(&o).status.code, "JACOBI_VIOLATION");
}

#[test]
fn missing_file_and_bad_arguments_are_usage_errors() {
    assert_eq!(run(&["validate", "/nonexistent/spec.toml"]).exit_code, 64);
    assert_eq!(run(&["frobnicate"]).exit_code, 64);
    assert_eq!(run(&["solve"]).exit_code, 64);
    assert_eq!(run(&["--help"]).exit_code, 0);
}

#[test]
fn parse_errors_carry_a_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "[algebra]\ndim = 3\nbrackets = [{ i = 2, j = }]\n").unwrap();
    let o = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.exit_code, 2);
    assert!(o.stderr.contains("code=PARSE") && o.stderr.contains("line 3"), "{}", o.stderr);
}

#[test]
fn sections_merge_across_files() {
    let o = run(&["lattice-build", &scenario("algebras/h3.toml"), &scenario("lattices/h3_cbrt2.toml")]);
    assert_eq!(o.exit_code, 0, "{}", o.stderr);
    let lat = report_of(&o).lattice.unwrap();
    assert_eq!(lat.hom_dimension, 2);
    assert_eq!(lat.min_poly.as_deref(), Some("x^3 - 2"));
    assert_eq!(lat.certificates[0].as_ref().unwrap().alpha_exp, 2.0);
    let dup = run(&["validate", &scenario("algebras/h3.toml"), &scenario("algebras/h5.toml")]);
    assert_eq!(dup.exit_code, 2);
    assert!(dup.stderr.contains("DUPLICATE_SECTION"));
}

#[test]
fn cohomology_and_series_of_h3() {
    let o = run(&["cohomology", &scenario("algebras/h3.toml"), &scenario("lattices/h3_cbrt2.toml")]);
    let c = report_of(&o).cohomology.unwrap();
    assert_eq!((c.h0, c.h1, c.h2, c.hom_lattice_dim), (1, 2, 2, Some(2)));
    let s = report_of(&run(&["series", &scenario("algebras/ut4.toml")])).series.unwrap();
    assert_eq!(s.dims, vec![6, 3, 1]);
    let kv = run(&["series", &scenario("algebras/filiform5.toml"), "--format", "kv"]);
    assert!(kv.stdout.contains("series.step=4\n"), "{}", kv.stdout);
}

#[test]
fn shipped_round_trip_solves() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = run(&["solve", &scenario("h3_roundtrip.toml"), "--out", out.to_str().unwrap(), "--check-identity"]);
    assert_eq!(o.exit_code, 0, "{}", o.stderr);
    let r = report_of(&o);
    let red = r.reduction.as_ref().unwrap();
    assert!(red.residual <= 1e-6);
    assert!(red.reference.as_ref().unwrap().hom_error <= 1e-7);
    assert!(red.identity.as_ref().unwrap().max_defect <= 1e-8);
    for f in ["report.json", "report.kv", "P.grid", "h_level1.grid", "h_level3.grid", "divisors.csv"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let (_, p) = nilrigid::specfile::read_grid(&out.join("P.grid")).unwrap();
    assert_eq!(p.grid.dims(), &[64, 32, 32]);
    let csv = std::fs::read_to_string(out.join("divisors.csv")).unwrap();
    assert!(csv.starts_with(nilrigid_cli::commands::DIVISORS_CSV_HEADER));
    // The written report round-trips and matches stdout.
    let written: RunReport = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(written, r);
    let again: RunReport = serde_json::from_str(&serde_json::to_string(&written).unwrap()).unwrap();
    assert_eq!(again, written);
}

#[test]
fn resonance_and_fat_tail_scenarios_fail_distinctly() {
    let o = run(&["solve", &scenario("rational_resonance.toml")]);
    assert_eq!(o.exit_code, 3, "{}", o.stderr);
    assert!(o.stderr.contains("code=RESONANCE") && o.stderr.contains("level=1"));
    let o = run(&["solve", &scenario("fat_tail.toml")]);
    assert_eq!(o.exit_code, 4, "{}", o.stderr);
    assert_eq!(report_of(&o).status.code, "TAIL_TOO_FAT");
}

fn write_h3_grids(dir: &Path, c2: impl Fn(&[f64]) -> f64 + Sync) -> PathBuf {
    let grid = Grid::new(vec![16, 8, 8]);
    let zero = GridFunction::zeros(grid.clone());
    std::fs::write(dir.join("c1.grid"), write_grid(&zero, "c(Y1)")).unwrap();
    std::fs::write(dir.join("c2.grid"), write_grid(&GridFunction::from_fn(grid.clone(), c2), "c(Y2)")).unwrap();
    std::fs::write(dir.join("c3.grid"), write_grid(&zero, "c(Y3)")).unwrap();
    let spec = dir.join("raw.toml");
    let text = std::fs::read_to_string(scenario("algebras/h3.toml")).unwrap()
        + &std::fs::read_to_string(scenario("lattices/h3_cbrt2.toml")).unwrap()
        + "\n[cocycle]\ngrids = [\"c1.grid\", \"c2.grid\", \"c3.grid\"]\n";
    std::fs::write(&spec, text).unwrap();
    spec
}

#[test]
fn fiber_noise_exits_five() {
    let dir = tempfile::tempdir().unwrap();
    // Oscillation along the X1 fiber in c(Y2): not constant along fibers after the first transfer.
    let spec = write_h3_grids(dir.path(), |x| 0.1 * (2.0 * std::f64::consts::PI * x[0]).cos());
    let o = run(&["solve", spec.to_str().unwrap()]);
    assert_eq!(o.exit_code, 5, "{}", o.stderr);
    assert!(o.stderr.contains("stage=descent"), "{}", o.stderr);
    // Constant raw data is a homomorphism.
    let spec = write_h3_grids(dir.path(), |_| 0.25);
    let o = run(&["solve", spec.to_str().unwrap(), "--resolution", "16,8,8"]);
    assert_eq!(o.exit_code, 0, "{}", o.stderr);
    assert_eq!(report_of(&o).reduction.unwrap().c0, vec![0.0, 0.25, 0.0]);
    let o = run(&["solve", spec.to_str().unwrap(), "--resolution", "32,8,8"]);
    assert_eq!(o.exit_code, 2);
}

#[test]
fn config_invariants_are_enforced() {
    let o = run(&["solve", &scenario("h3_roundtrip.toml"), "--modes", "32"]);
    assert_eq!(o.exit_code, 2);
    assert!(o.stderr.contains("code=INVALID_CONFIG"), "{}", o.stderr);
    assert_eq!(run(&["solve", &scenario("h3_roundtrip.toml"), "--resolution", "64,24,32"]).exit_code, 2);
    assert_eq!(run(&["solve", &scenario("h3_roundtrip.toml"), "--tol", "2"]).exit_code, 2);
}

#[test]
fn identical_runs_agree_modulo_timings() {
    let args = ["solve", &scenario("h3_convergence.toml"), "--resolution", "16,8,8"];
    let a = report_of(&run(&args));
    let b = report_of(&run(&args));
    let one = run(&[&args[..], &["--threads", "1"]].concat());
    let c = report_of(&one);
    assert_eq!(serde_json::to_string(&a.without_timings()).unwrap(), serde_json::to_string(&b.without_timings()).unwrap());
    assert_eq!(a.reduction, c.reduction);
}

#[test]
fn report_verb_tables_merges_and_passes_through() {
    let dir = tempfile::tempdir().unwrap();
    for res in ["16,8,8", "32,16,16"] {
        let out = dir.path().join("runs").join(res.replace(',', "x"));
        let o = run(&["solve", &scenario("h3_convergence.toml"), "--resolution", res, "--out", out.to_str().unwrap()]);
        assert_eq!(o.exit_code, 0, "{}", o.stderr);
    }
    let runs = dir.path().join("runs");
    let merged_dir = dir.path().join("merged");
    let o = run(&["report", runs.to_str().unwrap(), "--out", merged_dir.to_str().unwrap()]);
    assert_eq!(o.exit_code, 0, "{}", o.stderr);
    let doc: Consolidated = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(doc.convergence.len(), 2);
    assert!(doc.min_ratio.unwrap() > 4.0);
    assert_eq!(doc.table.len(), 3);
    let csv = std::fs::read_to_string(merged_dir.join("convergence.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.starts_with(nilrigid_cli::commands::CONVERGENCE_CSV_HEADER));

    let single = run(&["report", runs.join("16x8x8").to_str().unwrap()]);
    assert_eq!(single.exit_code, 0);
    assert_eq!(report_of(&single).reduction.unwrap().resolution, vec![16, 8, 8]);

    let empty = dir.path().join("empty");
    std::fs::create_dir(&empty).unwrap();
    let o = run(&["report", empty.to_str().unwrap()]);
    assert_eq!(o.exit_code, 64);
    assert!(o.stderr.contains("code=MISSING_ARTIFACTS"));
}

#[test]
fn binary_reports_exit_code_and_stage() {
    let out = Command::new(env!("CARGO_BIN_EXE_nilrigid")).args(["solve", &scenario("rational_resonance.toml")]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error: stage=fiber-rotation-solve code=RESONANCE exit=3"), "{err}");
}
