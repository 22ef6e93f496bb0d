//! Baker–Campbell–Hausdorff product via the Dynkin series, truncated at the
//! nilpotency step (exact for nilpotent algebras), and the two coordinate charts.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::algebra::{AlgebraElement, LieAlgebra};
use crate::scalar::{Rational, Scalar};

/// Dynkin terms grouped by bracket word; `true` stands for `X`, `false` for `Y`.
#[derive(Debug)]
pub(crate) struct BchPlan {
    terms: Vec<(Rational, Vec<bool>)>,
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

impl BchPlan {
    pub(crate) fn new(step: usize) -> Self {
        let mut acc: BTreeMap<Vec<bool>, Rational> = BTreeMap::new();
        // Sequences of n pairs (r_i, s_i) with r_i + s_i >= 1 and total length <= step.
        fn rec(
            pairs: &mut Vec<(usize, usize)>,
            remaining: usize,
            n_target: usize,
            acc: &mut BTreeMap<Vec<bool>, Rational>,
        ) {
            if pairs.len() == n_target {
                let n = n_target as i64;
                let total: usize = pairs.iter().map(|(r, s)| r + s).sum();
                let mut denom = BigInt::from(n) * BigInt::from(total);
                for &(r, s) in pairs.iter() {
                    denom *= factorial(r) * factorial(s);
                }
                let sign = if n % 2 == 1 { 1 } else { -1 };
                let coef = Rational::new(BigInt::from(sign), denom);
                let mut word = Vec::with_capacity(total);
                for &(r, s) in pairs.iter() {
                    word.extend(std::iter::repeat_n(true, r));
                    word.extend(std::iter::repeat_n(false, s));
                }
                // Right-nested brackets ending in [Z, Z] vanish.
                if word.len() >= 2 && word[word.len() - 1] == word[word.len() - 2] {
                    return;
                }
                *acc.entry(word).or_insert_with(Rational::zero) += coef;
                return;
            }
            for len in 1..=remaining {
                for r in 0..=len {
                    pairs.push((r, len - r));
                    rec(pairs, remaining - len, n_target, acc);
                    pairs.pop();
                }
            }
        }
        for n in 1..=step.max(1) {
            rec(&mut Vec::new(), step.max(1), n, &mut acc);
        }
        BchPlan {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(w, c)| (c, w)).collect(),
        }
    }
}

/// `Z` with `exp(X) exp(Y) = exp(Z)`.
pub fn bch_product<S: Scalar>(alg: &LieAlgebra, x: &AlgebraElement<S>, y: &AlgebraElement<S>) -> AlgebraElement<S> {
    if alg.is_abelian() {
        return x.plus(y);
    }
    let plan = alg.bch_plan();
    let mut memo: HashMap<Vec<bool>, AlgebraElement<S>> = HashMap::new();
    let mut z = AlgebraElement::zero(alg.dim());
    for (coef, word) in &plan.terms {
        let b = nested(alg, word, x, y, &mut memo);
        if !b.is_zero() {
            z = z.plus(&b.scale_rational(coef));
        }
    }
    z
}

fn nested<S: Scalar>(
    alg: &LieAlgebra,
    word: &[bool],
    x: &AlgebraElement<S>,
    y: &AlgebraElement<S>,
    memo: &mut HashMap<Vec<bool>, AlgebraElement<S>>,
) -> AlgebraElement<S> {
    if let Some(v) = memo.get(word) {
        return v.clone();
    }
    let head = if word[0] { x } else { y };
    let v = if word.len() == 1 {
        head.clone()
    } else {
        let tail = nested(alg, &word[1..], x, y, memo);
        if tail.is_zero() {
            tail
        } else {
            alg.bracket(head, &tail)
        }
    };
    memo.insert(word.to_vec(), v.clone());
    v
}

/// Second-kind coordinates `(t_1..t_n)` with `exp(X) = e^{t_1 X_1} ... e^{t_n X_n}`.
///
/// Peels from the last coordinate: `span{X_1..X_{i-1}}` is an ideal, so the
/// `i`-th coordinate is additive modulo it.
pub fn coords_from_log<S: Scalar>(alg: &LieAlgebra, x: &AlgebraElement<S>) -> Vec<S> {
    let n = alg.dim();
    let mut cur = x.clone();
    let mut t = vec![S::zero(); n];
    for i in (0..n).rev() {
        let ti = cur.0[i].clone();
        if !ti.is_zero() {
            let mut shift = AlgebraElement::zero(n);
            shift.0[i] = ti.negated();
            cur = bch_product(alg, &cur, &shift);
            debug_assert!(cur.0[i].is_zero());
        }
        t[i] = ti;
    }
    t
}

/// Inverse of [`coords_from_log`].
pub fn log_from_coords<S: Scalar>(alg: &LieAlgebra, t: &[S]) -> AlgebraElement<S> {
    let n = alg.dim();
    let mut z = AlgebraElement::zero(n);
    for (i, ti) in t.iter().enumerate() {
        if ti.is_zero() {
            continue;
        }
        let mut step = AlgebraElement::zero(n);
        step.0[i] = ti.clone();
        z = bch_product(alg, &z, &step);
    }
    z
}
