//! Acceptance suite: one PASS/FAIL line per criterion, each with its own oracle,
//! tolerance and time budget. Exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use nilrigid::algebras::{abelian, heisenberg3, heisenberg5, upper_triangular4};
use nilrigid::cohomology::{ce_differential, cohomology_dim};
use nilrigid::lattices::{
    build_diophantine_pair, diagonal_pair, diophantine_certificate, triangular_relation_check, verify_graded_automorphism,
    CertificateOptions, GradedStructure, LatticePair, NfElement, NumberField, PairOptions,
};
use nilrigid::lie::{coords_from_log, log_from_coords, reduce_mod_lattice, AlgebraElement, LieAlgebra};
use nilrigid::scalar::{int, rat};
use nilrigid::solver::testfns::{generate_cocycle, TestFunction, TransferSpec};
use nilrigid::solver::{
    average_cocycle, reduce_cocycle, solve_rotation_coboundary, CocycleData, Grid, GridFunction, RotationOptions, SolverError,
    SolverOptions,
};
use nilrigid::Rational;
use nilrigid_cli::report::Consolidated;
use nilrigid_cli::run_from_args;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn scenario(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(rel).display().to_string()
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-20..=20), rng.gen_range(1..=6))
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| random_rational(rng)).collect()
}

fn cbrt2() -> Arc<NumberField> {
    NumberField::from_i64(&[-2, 0, 0, 1], None).unwrap()
}

fn h3_pair() -> LatticePair {
    let h3 = heisenberg3();
    let g = GradedStructure::new(&h3, vec![2, 1, 1]).unwrap();
    build_diophantine_pair(&h3, &g, &cbrt2(), &PairOptions::default()).unwrap()
}

// ---------- criterion 1: exact algebra ----------

type Mat = Vec<Vec<Rational>>;

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let d = a.len();
    (0..d).map(|i| (0..d).map(|j| (0..d).fold(Rational::zero(), |acc, k| acc + &a[i][k] * &b[k][j])).collect()).collect()
}

fn mat_identity(d: usize) -> Mat {
    (0..d).map(|i| (0..d).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
}

/// `exp` of a strictly upper triangular matrix (the series terminates).
fn mat_exp(n: &Mat) -> Mat {
    let d = n.len();
    let mut out = mat_identity(d);
    let mut term = mat_identity(d);
    for k in 1..d {
        term = mat_mul(&term, n).into_iter().map(|r| r.into_iter().map(|x| x / int(k as i64)).collect()).collect();
        for i in 0..d {
            for j in 0..d {
                out[i][j] += &term[i][j];
            }
        }
    }
    out
}

/// Unitriangular realisation; `slots[i]` is the matrix entry of `X_i`.
fn realise_group(size: usize, slots: &[(usize, usize)], t: &[Rational]) -> Mat {
    let mut m = mat_identity(size);
    for (ti, &(r, c)) in t.iter().zip(slots) {
        let mut x = vec![vec![Rational::zero(); size]; size];
        x[r][c] = ti.clone();
        m = mat_mul(&m, &mat_exp(&x));
    }
    m
}

fn jacobi_defect_is_zero(alg: &LieAlgebra) -> bool {
    let n = alg.dim();
    let e = |i: usize| AlgebraElement::<Rational>::basis(n, i);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let a = alg.bracket(&e(i), &alg.bracket(&e(j), &e(k)));
                let b = alg.bracket(&e(j), &alg.bracket(&e(k), &e(i)));
                let c = alg.bracket(&e(k), &alg.bracket(&e(i), &e(j)));
                if !a.plus(&b).plus(&c).is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

fn criterion_1() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let corpus: Vec<(&str, LieAlgebra)> = vec![
        ("R^1", abelian(1)),
        ("R^2", abelian(2)),
        ("R^3", abelian(3)),
        ("R^4", abelian(4)),
        ("h3", heisenberg3()),
        ("h5", heisenberg5()),
        ("ut4", upper_triangular4()),
    ];
    let samples = 25;
    for (name, alg) in &corpus {
        let n = alg.dim();
        ensure(jacobi_defect_is_zero(alg), || format!("{name}: Jacobi defect"))?;
        let law = alg.group_law();
        for _ in 0..samples {
            let (g, h, k) = (random_vec(&mut rng, n), random_vec(&mut rng, n), random_vec(&mut rng, n));
            ensure(law.multiply(&law.multiply(&g, &h), &k) == law.multiply(&g, &law.multiply(&h, &k)), || format!("{name}: associativity"))?;
            let x = AlgebraElement(g.clone());
            ensure(log_from_coords(alg, &coords_from_log(alg, &x)) == x, || format!("{name}: log∘coords"))?;
            ensure(coords_from_log(alg, &log_from_coords(alg, &g)) == g, || format!("{name}: coords∘log"))?;
            let (gamma, g0) = reduce_mod_lattice(&law, &g);
            ensure(law.multiply(&gamma, &g0) == g, || format!("{name}: γ·g0 != g"))?;
            ensure(gamma.iter().all(|c| c.is_integer()), || format!("{name}: γ not integral"))?;
            ensure(g0.iter().all(|c| *c >= int(0) && *c < int(1)), || format!("{name}: g0 outside the unit cube"))?;
        }
    }
    // Matrix oracle.
    type Realisation = (&'static str, LieAlgebra, usize, Vec<(usize, usize)>);
    let reals: [Realisation; 2] = [
        ("h3", heisenberg3(), 3, vec![(0, 2), (0, 1), (1, 2)]),
        ("ut4", upper_triangular4(), 4, vec![(0, 3), (0, 2), (1, 3), (0, 1), (1, 2), (2, 3)]),
    ];
    for (name, alg, size, slots) in &reals {
        let law = alg.group_law();
        for _ in 0..samples {
            let (g, h) = (random_vec(&mut rng, alg.dim()), random_vec(&mut rng, alg.dim()));
            let lhs = realise_group(*size, slots, &law.multiply(&g, &h));
            let rhs = mat_mul(&realise_group(*size, slots, &g), &realise_group(*size, slots, &h));
            ensure(lhs == rhs, || format!("{name}: group law disagrees with matrix product"))?;
        }
    }
    Ok(format!("{} algebras x {samples} samples, matrix oracle on h3 and ut4, all defects exactly zero", corpus.len()))
}

// ---------- criterion 2: cohomology ----------

/// Chevalley–Eilenberg matrix from the defining formula
/// `dω(x_0..x_p) = Σ_{i<j} (-1)^{i+j} ω([x_i,x_j], x_0..x̂_i..x̂_j..x_p)` on basis vectors.
fn ce_matrix_brute(alg: &LieAlgebra, p: usize) -> Vec<Vec<Rational>> {
    // Increasing index sets in lexicographic order, via bitmasks.
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> =
            (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect();
        out.sort();
        out
    }
    let n = alg.dim();
    let cols = subsets(n, p);
    let rows = subsets(n, p + 1);
    // ω_I evaluated on increasing-or-not index tuples: sign of the sorting permutation.
    let eval = |form: &[usize], args: &[usize]| -> Rational {
        let mut sorted = args.to_vec();
        let mut sign = 1i64;
        for i in 0..sorted.len() {
            for j in 0..sorted.len() - 1 - i {
                if sorted[j] > sorted[j + 1] {
                    sorted.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) || sorted != form {
            Rational::zero()
        } else {
            int(sign)
        }
    };
    rows.iter()
        .map(|x| {
            cols.iter()
                .map(|form| {
                    let mut acc = Rational::zero();
                    for i in 0..x.len() {
                        for j in i + 1..x.len() {
                            let rest: Vec<usize> = x.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &v)| v).collect();
                            let sign = if (i + j) % 2 == 0 { int(1) } else { int(-1) };
                            for (k, c) in alg.structure_constants(x[i], x[j]) {
                                let mut args = vec![*k];
                                args.extend(&rest);
                                acc += &sign * c * eval(form, &args);
                            }
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn rank(mut m: Vec<Vec<Rational>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                let pivot = m[r].clone();
                m[i].iter_mut().zip(&pivot).for_each(|(x, y)| *x -= &f * y);
            }
        }
        r += 1;
    }
    r
}

fn brute_betti(alg: &LieAlgebra, p: usize) -> usize {
    let n = alg.dim();
    let binom = |k: usize| (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1));
    let kernel = binom(p) - rank(ce_matrix_brute(alg, p));
    let image = if p == 0 { 0 } else { rank(ce_matrix_brute(alg, p - 1)) };
    kernel - image
}

fn criterion_2() -> Check {
    let corpus = [abelian(2), abelian(4), heisenberg3(), heisenberg5(), upper_triangular4()];
    for alg in &corpus {
        for p in 0..alg.dim() {
            let d0 = ce_differential(alg, p).map_err(|e| e.to_string())?;
            let d1 = ce_differential(alg, p + 1).map_err(|e| e.to_string())?;
            let cols = d0.first().map_or(0, Vec::len);
            for row in &d1 {
                for c in 0..cols {
                    let v = row.iter().zip(&d0).fold(Rational::zero(), |acc, (a, r)| acc + a * &r[c]);
                    ensure(v.is_zero(), || format!("d∘d != 0 in degree {p} for dim {}", alg.dim()))?;
                }
            }
            ensure(d0 == ce_matrix_brute(alg, p), || format!("differential in degree {p} disagrees with the defining formula"))?;
        }
    }
    let h3 = heisenberg3();
    let dims: Vec<usize> = (0..3).map(|p| cohomology_dim(&h3, p).unwrap()).collect();
    let brute: Vec<usize> = (0..3).map(|p| brute_betti(&h3, p)).collect();
    ensure(dims == vec![1, 2, 2] && brute == dims, || format!("h3 dims {dims:?}, brute force {brute:?}"))?;
    let ut4 = upper_triangular4();
    let (h1, b1) = (cohomology_dim(&ut4, 1).unwrap(), brute_betti(&ut4, 1));
    ensure(h1 == 3 && b1 == 3, || format!("ut4 H^1 = {h1}, brute force {b1}"))?;
    Ok(format!("d∘d = 0 on {} algebras; h3 (H0,H1,H2) = {dims:?}; ut4 H1 = {h1}; brute-force ranks agree", corpus.len()))
}

// ---------- criterion 3: graded construction ----------

fn criterion_3() -> Check {
    let h3 = heisenberg3();
    let field = cbrt2();
    let pair = h3_pair();
    let y = |i: usize| AlgebraElement(pair.a[i].clone());
    ensure(h3.bracket(&y(1), &y(2)) == y(0), || "[Y2, Y3] != Y1".into())?;
    ensure(verify_graded_automorphism(pair.algebra(), &[2, 1, 1], &field).is_ok(), || "graded automorphism check failed".into())?;
    let x_basis: Vec<Vec<NfElement>> =
        (0..3).map(|i| (0..3).map(|k| NfElement::rational(if i == k { int(1) } else { int(0) })).collect()).collect();
    let a = triangular_relation_check(&x_basis, &pair.a).map_err(|e| e.to_string())?;
    let alpha = field.generator();
    let expected = [alpha.pow(2), alpha.clone(), alpha.clone()];
    for (i, row) in a.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            let want = if i == j { expected[i].clone() } else { NfElement::zero() };
            ensure(*entry == want, || format!("A[{i}][{j}] = {}", entry.display()))?;
        }
    }
    Ok(format!("[Y2,Y3] = Y1 in Q(2^(1/3)); A = diag({}, {}, {})", a[0][0].display(), a[1][1].display(), a[2][2].display()))
}

// ---------- criterion 4: divisor certificates ----------

fn criterion_4() -> Check {
    let bits = 128u32;
    let sqrt2 = NumberField::from_i64(&[-2, 0, 1], None).unwrap().generator();
    let c2 = cbrt2().generator();
    let cases = [("sqrt2", sqrt2, 2u32, 2u32), ("2^(1/3)", c2.clone(), 2, 3), ("2^(2/3)", c2.pow(2), 4, 3)];
    let mut parts = Vec::new();
    for (name, elem, r, n) in cases {
        let cert = diophantine_certificate(&elem.algebraic_number(), CertificateOptions { k_max: 4096, precision_bits: bits })
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(cert.alpha_exp == (n - 1) as f64, || format!("{name}: alpha_exp {}", cert.alpha_exp))?;
        // Independent check: floor(a·2^bits) by integer root extraction.
        let a_fixed = (BigInt::from(r) << (bits * n) as usize).nth_root(n);
        let one = BigInt::one() << bits as usize;
        let mut worst = f64::INFINITY;
        for k in 1..=4096i64 {
            let frac = (&a_fixed * k) % &one;
            let dist = std::cmp::min(frac.clone(), &one - &frac);
            let d = (dist >> (bits as usize - 60)).to_f64().unwrap() / 2f64.powi(60);
            let divisor = 2.0 * (PI * d).sin();
            ensure(divisor >= cert.bound(k), || format!("{name}: k = {k}, {divisor:e} < {:e}", cert.bound(k)))?;
            worst = worst.min(divisor / cert.bound(k));
        }
        parts.push(format!("{name}: C = {:.3e}, alpha = {}, min ratio {worst:.2}", cert.c, cert.alpha_exp));
    }
    Ok(parts.join("; "))
}

// ---------- criterion 5: circle base case ----------

fn criterion_5() -> Check {
    let field = NumberField::from_i64(&[-2, 0, 1], None).unwrap();
    let a = 2f64.sqrt();
    let cert = diophantine_certificate(&field.generator().algebraic_number(), CertificateOptions::default()).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let coef: Vec<(f64, f64)> = (0..=8).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let f = |s: f64| coef.iter().enumerate().map(|(k, (c, d))| c * (2.0 * PI * k as f64 * s).cos() + d * (2.0 * PI * k as f64 * s).sin()).sum::<f64>();
    let m = 128;
    let samples: Vec<f64> = (0..m).map(|j| f(j as f64 / m as f64)).collect();
    let opts = RotationOptions { modes: 64, tol: 1e-10, divisor_floor: cert.divisor_floor(64), noise_floor: 0.0 };
    let sol = solve_rotation_coboundary(&samples, a, opts).map_err(|e| e.to_string())?;
    let mean = coef[0].0;
    let residual = (0..4096)
        .map(|j| {
            let s = j as f64 / 4096.0;
            (sol.eval(s + a) - sol.eval(s) - (f(s) - mean)).abs()
        })
        .fold(0.0, f64::max);
    ensure(residual <= 1e-10, || format!("residual {residual:e}"))?;
    // Rational rotation: the solver must refuse.
    let pair = diagonal_pair(&abelian(1), None, vec![NfElement::rational(rat(1, 2))], &PairOptions::default()).map_err(|e| e.to_string())?;
    let grid = Grid::new(vec![16]);
    let c = CocycleData::new(grid.clone(), vec![grid.points().map(|x| (4.0 * PI * x[0]).cos()).collect()]).unwrap();
    match reduce_cocycle(&c, &pair, &SolverOptions::default()) {
        Err(SolverError::Resonance { k, .. }) => Ok(format!("residual {residual:.2e} on 4096 points at K = 64; a = 1/2 resonates at k = {k}")),
        other => Err(format!("rational rotation gave {other:?}")),
    }
}

// ---------- criterion 6: nilmanifold round trip ----------

fn criterion_6() -> Check {
    let o = run_from_args(["nilrigid", "solve", &scenario("h3_roundtrip.toml"), "--threads", "1"]);
    ensure(o.exit_code == 0, || format!("exit {}: {}", o.exit_code, o.stderr))?;
    let report: nilrigid_cli::report::RunReport = serde_json::from_str(&o.stdout).map_err(|e| e.to_string())?;
    let red = report.reduction.ok_or("no reduction in report")?;
    ensure(red.resolution == vec![64, 32, 32], || format!("resolution {:?}", red.resolution))?;
    let want = [0.0, 0.3, -0.7];
    let hom_err = red.c0.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let p_err = red.reference.as_ref().ok_or("no reference errors")?.transfer_error;
    // The reported P error is also recomputed here from an independent evaluation.
    let pair = h3_pair();
    let spec = TransferSpec::RandomBaseTorus { bandwidth: 4, amplitude: 1.0, seed: 11 };
    let p = TestFunction::new(&spec, pair.algebra()).map_err(|e| e.to_string())?;
    let grid = Grid::new(vec![64, 32, 32]);
    let c = generate_cocycle(&pair, &grid, &want, &p).map_err(|e| e.to_string())?;
    let direct = reduce_cocycle(&c, &pair, &SolverOptions { modes: 16, ..SolverOptions::default() }).map_err(|e| e.to_string())?;
    let truth = GridFunction::from_fn(grid.clone(), |x| p.eval(x));
    let mean = truth.mean();
    let p_err_direct = truth.values.iter().zip(&direct.transfer.values).map(|(t, v)| (t - mean - v).abs()).fold(0.0, f64::max);
    ensure(hom_err <= 1e-7, || format!("homomorphism error {hom_err:e}"))?;
    ensure(p_err <= 1e-6 && p_err_direct <= 1e-6, || format!("P error {p_err:e} / {p_err_direct:e}"))?;
    ensure(red.residual <= 1e-6, || format!("residual {:e}", red.residual))?;
    Ok(format!(
        "c0 error {hom_err:.2e}, P error {p_err:.2e}, residual {:.2e}, solve {:.2} s single-threaded",
        red.residual,
        report.timings.get("reduce").copied().unwrap_or(f64::NAN)
    ))
}

// ---------- criterion 7: consistency ----------

fn criterion_7() -> Check {
    let pair = h3_pair();
    let qpair = pair.quotient().map_err(|e| e.to_string())?;
    let base_grid = Grid::new(vec![32, 32]);
    let spec = TransferSpec::RandomBaseTorus { bandwidth: 4, amplitude: 1.0, seed: 7 };
    let p = TestFunction::new(&spec, qpair.algebra()).map_err(|e| e.to_string())?;
    let cq = generate_cocycle(&qpair, &base_grid, &[0.4, -0.1], &p).map_err(|e| e.to_string())?;
    let m1 = 16;
    let mut gens = vec![vec![0.0; m1 * base_grid.len()]];
    gens.extend(cq.generators.iter().map(|g| GridFunction::new(base_grid.clone(), g.clone()).pullback(m1).values));
    let c = CocycleData::new(Grid::new(vec![m1, 32, 32]), gens).map_err(|e| e.to_string())?;
    let opts = SolverOptions { modes: 8, ..SolverOptions::default() };
    let full = reduce_cocycle(&c, &pair, &opts).map_err(|e| e.to_string())?;
    let direct = reduce_cocycle(&cq, &qpair, &opts).map_err(|e| e.to_string())?;
    let c0_diff = full.c0[1..].iter().zip(&direct.c0).map(|(a, b)| (a - b).abs()).fold(full.c0[0].abs(), f64::max);
    let pulled = direct.transfer.pullback(m1);
    let p_diff = full.transfer.values.iter().zip(&pulled.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ensure(c0_diff <= 1e-8 && p_diff <= 1e-8, || format!("descent paths differ: c0 {c0_diff:e}, P {p_diff:e}"))?;
    // Averaging: bandwidth 4 < resolution 16.
    let grid = Grid::new(vec![16, 16, 16]);
    let q = TestFunction::new(&TransferSpec::RandomBaseTorus { bandwidth: 4, amplitude: 1.0, seed: 9 }, pair.algebra()).map_err(|e| e.to_string())?;
    let cob = generate_cocycle(&pair, &grid, &[0.0; 3], &q).map_err(|e| e.to_string())?;
    let (avg, _) = average_cocycle(&cob);
    let worst = avg.iter().map(|v| v.abs()).fold(0.0, f64::max);
    ensure(worst <= 1e-12, || format!("average of a coboundary {worst:e}"))?;
    Ok(format!("descent paths agree to {:.1e} (c0) / {:.1e} (P); coboundary averages {worst:.1e}", c0_diff, p_diff))
}

// ---------- criterion 8: convergence ----------

fn criterion_8() -> Check {
    let dir = std::env::temp_dir().join(format!("nilrigid-acceptance-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let runs = dir.join("runs");
    for res in ["16,8,8", "32,16,16", "64,32,32"] {
        let out = runs.join(res.replace(',', "x"));
        let o = run_from_args(["nilrigid", "solve", &scenario("h3_convergence.toml"), "--resolution", res, "--out", out.to_str().unwrap()]);
        ensure(o.exit_code == 0, || format!("{res}: exit {}: {}", o.exit_code, o.stderr))?;
    }
    let o = run_from_args(["nilrigid", "report", runs.to_str().unwrap(), "--out", dir.join("report").to_str().unwrap()]);
    ensure(o.exit_code == 0, || format!("report exit {}: {}", o.exit_code, o.stderr))?;
    let doc: Consolidated = serde_json::from_str(&o.stdout).map_err(|e| e.to_string())?;
    for line in &doc.table {
        println!("    {line}");
    }
    let _ = std::fs::remove_dir_all(&dir);
    ensure(doc.convergence.len() == 3, || format!("{} rows", doc.convergence.len()))?;
    let ratios: Vec<f64> = doc.convergence.iter().filter_map(|r| r.ratio).collect();
    ensure(ratios.len() == 2 && ratios.iter().all(|&r| r >= 4.0), || format!("ratios {ratios:?}"))?;
    Ok(format!("residual ratios per doubling {:.1} and {:.1} (analytic transfer function)", ratios[0], ratios[1]))
}

fn main() {
    let criteria: [Criterion; 8] = [
        (1, "exact algebra", Duration::from_secs(10), criterion_1),
        (2, "cohomology", Duration::from_secs(5), criterion_2),
        (3, "graded construction", Duration::from_secs(1), criterion_3),
        (4, "divisor certificates", Duration::from_secs(5), criterion_4),
        (5, "circle base case", Duration::from_secs(1), criterion_5),
        (6, "nilmanifold round trip", Duration::from_secs(60), criterion_6),
        (7, "consistency", Duration::from_secs(600), criterion_7),
        (8, "convergence", Duration::from_secs(600), criterion_8),
    ];
    let mut outcomes = BTreeMap::new();
    for (id, name, budget, f) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(msg) if elapsed > budget => Err(format!("{msg}; took {elapsed:.2?}, budget {budget:?}")),
            other => other,
        };
        match &result {
            Ok(msg) => println!("PASS criterion {id} ({name}, {:.2?}): {msg}", elapsed),
            Err(msg) => println!("FAIL criterion {id} ({name}, {:.2?}): {msg}", elapsed),
        }
        outcomes.insert(id, result.is_ok());
    }
    let failed: Vec<u32> = outcomes.iter().filter(|(_, ok)| !**ok).map(|(id, _)| *id).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", outcomes.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
