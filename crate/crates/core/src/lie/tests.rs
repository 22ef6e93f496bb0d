use num_traits::Zero;

use super::*;
use crate::algebras::{abelian, heisenberg3, upper_triangular4};
use crate::scalar::{int, rat, Rational};

fn elem(v: &[Rational]) -> AlgebraElement<Rational> {
    AlgebraElement(v.to_vec())
}

/// Independent Jacobi defect: sums over every ordered triple with cyclic signs.
fn brute_force_jacobi_defect(raw: &RawAlgebra) -> Vec<Rational> {
    let n = raw.dim;
    let br = |x: &[Rational], y: &[Rational]| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); n];
        for (&(i, j), c) in &raw.brackets {
            let w = &x[i] * &y[j] - &x[j] * &y[i];
            for k in 0..n {
                out[k] += &w * &c[k];
            }
        }
        out
    };
    let e = |i: usize| (0..n).map(|k| if k == i { int(1) } else { int(0) }).collect::<Vec<_>>();
    let mut total = vec![Rational::zero(); n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let a = br(&e(i), &br(&e(j), &e(k)));
                let b = br(&e(j), &br(&e(k), &e(i)));
                let c = br(&e(k), &br(&e(i), &e(j)));
                for t in 0..n {
                    let d = &a[t] + &b[t] + &c[t];
                    total[t] += d.clone() * &d;
                }
            }
        }
    }
    total
}

#[test]
fn abelian_plane_is_step_one() {
    let alg = abelian(2);
    assert_eq!(alg.step(), 1);
    assert!(alg.is_abelian());
}

#[test]
fn heisenberg_is_step_two() {
    let raw = RawAlgebra::new(3).bracket(2, 3, &[(1, int(1))]);
    assert!(brute_force_jacobi_defect(&raw).iter().all(Zero::is_zero));
    assert_eq!(validate_algebra(&raw).unwrap().step(), 2);
}

#[test]
fn extra_bracket_on_h3_is_a_lie_algebra_but_not_nilpotent() {
    // [X2,X3] = X1 together with [X1,X2] = X3 still satisfies Jacobi (it is the
    // Euclidean algebra), so the rejection comes from nilpotency.
    let raw = RawAlgebra::new(3).bracket(2, 3, &[(1, int(1))]).bracket(1, 2, &[(3, int(1))]);
    assert!(brute_force_jacobi_defect(&raw).iter().all(Zero::is_zero));
    assert!(matches!(validate_algebra(&raw), Err(AlgebraError::NotNilpotent { .. })));
}

#[test]
fn jacobi_violation_reports_witness() {
    let raw = RawAlgebra::new(5)
        .bracket(4, 5, &[(3, int(1))])
        .bracket(3, 5, &[(2, int(1))])
        .bracket(3, 4, &[(1, int(1))])
        .bracket(2, 4, &[(1, int(1))]);
    assert!(brute_force_jacobi_defect(&raw).iter().any(|d| !d.is_zero()));
    match validate_algebra(&raw) {
        Err(AlgebraError::JacobiViolation { i, j, k, defect }) => {
            assert_eq!((i, j, k), (3, 4, 5));
            assert_eq!(defect, vec![int(1), int(0), int(0), int(0), int(0)]);
        }
        other => panic!("expected Jacobi violation, got {other:?}"),
    }
}

#[test]
fn wrong_basis_order_is_rejected() {
    // h3 listed as (X2, X3, X1): span{first} is not an ideal.
    let raw = RawAlgebra::new(3).bracket(1, 2, &[(3, int(1))]);
    assert_eq!(validate_algebra(&raw).unwrap_err(), AlgebraError::NotStrongMalcevOrder { index: 1 });
}

#[test]
fn rejects_malformed_input() {
    let mut raw = RawAlgebra::new(3);
    raw.brackets.insert((2, 1), vec![int(1), int(0), int(0)]);
    assert!(matches!(validate_algebra(&raw), Err(AlgebraError::InvalidBracketKey { i: 3, j: 2 })));
    assert_eq!(validate_algebra(&RawAlgebra::new(0)).unwrap_err(), AlgebraError::EmptyAlgebra);
}

#[test]
fn lower_central_series_examples() {
    let s = lower_central_series(&abelian(4));
    assert_eq!(s.step(), 1);
    assert_eq!(s.complements[0].len(), 4);

    let s = lower_central_series(&heisenberg3());
    assert_eq!(s.dims(), vec![3, 1]);
    let e = |i: usize| (0..3).map(|k| if k == i { int(1) } else { int(0) }).collect::<Vec<_>>();
    assert_eq!(s.complements[0], vec![e(1), e(2)]);
    assert_eq!(s.complements[1], vec![e(0)]);

    let s = lower_central_series(&upper_triangular4());
    assert_eq!(s.step(), 3);
    assert_eq!(s.dims(), vec![6, 3, 1]);
    let total: usize = s.complements.iter().map(Vec::len).sum();
    assert_eq!(total, 6);
}

#[test]
fn bch_examples() {
    let h3 = heisenberg3();
    let x = elem(&[int(0), int(1), int(0)]);
    let y = elem(&[int(0), int(0), int(1)]);
    assert_eq!(bch_product(&h3, &x, &y), elem(&[rat(1, 2), int(1), int(1)]));
    assert_eq!(bch_product(&h3, &x, &AlgebraElement::zero(3)), x);

    let ab = abelian(3);
    let a = elem(&[rat(1, 3), int(2), int(-1)]);
    let b = elem(&[int(5), rat(-7, 2), int(1)]);
    assert_eq!(bch_product(&ab, &a, &b), a.plus(&b));
}

#[test]
fn coordinate_charts() {
    let h3 = heisenberg3();
    assert_eq!(coords_from_log(&h3, &AlgebraElement::<Rational>::zero(3)), vec![int(0); 3]);
    assert_eq!(log_from_coords(&h3, &[int(0), int(1), int(1)]), elem(&[rat(1, 2), int(1), int(1)]));
    let x = elem(&[rat(3, 7), rat(-2, 5), int(4)]);
    assert_eq!(log_from_coords(&h3, &coords_from_log(&h3, &x)), x);
}

#[test]
fn group_law_examples() {
    let ab = compile_group_law(&abelian(2));
    assert_eq!(ab.multiply(&[int(1), rat(1, 2)], &[int(3), int(-1)]), vec![int(4), rat(-1, 2)]);

    let h3 = heisenberg3();
    let law = compile_group_law(&h3);
    // (t1 + u1 - u2 t3, t2 + u2, t3 + u3)
    let g = [rat(1, 3), int(2), rat(5, 4)];
    let h = [int(-1), rat(3, 2), int(7)];
    let expected = vec![rat(1, 3) - int(1) - rat(3, 2) * rat(5, 4), rat(7, 2), rat(33, 4)];
    assert_eq!(law.multiply(&g, &h), expected);
    let gi = law.inverse(&g);
    assert_eq!(law.multiply(&g, &gi), vec![int(0); 3]);
    // Compiled once per algebra.
    assert!(std::sync::Arc::ptr_eq(&law, &compile_group_law(&h3.clone())));
}

#[test]
fn reduce_examples() {
    let law = compile_group_law(&abelian(2));
    let (gamma, g0) = reduce_mod_lattice(&law, &[rat(3, 2), rat(-1, 4)]);
    assert_eq!(gamma, vec![int(1), int(-1)]);
    assert_eq!(g0, vec![rat(1, 2), rat(3, 4)]);
    let (gamma, g0) = reduce_mod_lattice_f64(&law, &[1.5, -0.25]);
    assert_eq!(gamma, vec![1.0, -1.0]);
    assert_eq!(g0, vec![0.5, 0.75]);

    let law = compile_group_law(&heisenberg3());
    let inside = [rat(1, 5), rat(1, 2), rat(3, 4)];
    let (gamma, g0) = reduce_mod_lattice(&law, &inside);
    assert_eq!(gamma, vec![int(0); 3]);
    assert_eq!(g0, inside.to_vec());

    let g = [rat(17, 3), rat(-9, 4), rat(11, 5)];
    let (gamma, g0) = reduce_mod_lattice(&law, &g);
    assert!(gamma.iter().all(|c| c.is_integer()));
    assert!(g0.iter().all(|c| *c >= int(0) && *c < int(1)));
    assert_eq!(law.multiply(&gamma, &g0), g.to_vec());
}

#[test]
fn reduce_recomposes_in_floats() {
    let law = compile_group_law(&heisenberg3());
    let mut state = 12345u64;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 20.0
    };
    for _ in 0..200 {
        let g = [next(), next(), next()];
        let (gamma, g0) = reduce_mod_lattice_f64(&law, &g);
        assert!(g0.iter().all(|&c| (0.0..1.0).contains(&c)));
        let back = law.multiply_f64(&gamma, &g0);
        for (a, b) in back.iter().zip(&g) {
            assert!((a - b).abs() < 1e-12, "{back:?} vs {g:?}");
        }
    }
}

#[test]
fn quotient_examples() {
    let q = quotient_algebra(&heisenberg3()).unwrap();
    assert_eq!(q.dim(), 2);
    assert!(q.is_abelian());
    assert_eq!(q.grading(), Some(&[1u32, 1][..]));

    let q = quotient_algebra(&abelian(4)).unwrap();
    assert_eq!(q.dim(), 3);
    assert!(q.is_abelian());

    let q = quotient_algebra(&upper_triangular4()).unwrap();
    assert_eq!(q.dim(), 5);
    assert_eq!(q.step(), 2);
}

#[test]
fn periodic_directions() {
    let h3 = heisenberg3();
    assert!(h3.left_translation_is_shift(0));
    assert!(h3.left_translation_is_shift(1));
    assert!(!h3.left_translation_is_shift(2));
}
