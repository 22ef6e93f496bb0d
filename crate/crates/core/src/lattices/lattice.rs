//! Closure certificates for `Γ = e^{ZX_1}···e^{ZX_n}` and the integer rescaling
//! that makes integer points a subgroup.

use num_traits::Zero;
use serde::Serialize;

use super::error::LatticeError;
use crate::lie::{reduce_mod_lattice, validate_algebra, LieAlgebra};
use crate::scalar::{format_rational, Rational};

#[derive(Clone, Copy, Debug)]
pub struct ClosureOptions {
    /// Longest generator word checked.
    pub max_word_len: usize,
    /// Largest uniform integer rescaling tried; 1 disables rescaling.
    pub rescale_bound: u32,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions { max_word_len: 4, rescale_bound: 64 }
    }
}

/// A lattice strongly based on the basis of `algebra`: its points are the integer
/// second-kind coordinates. `rescale` records the factor `N` applied to the original
/// basis (`X_i ↦ N X_i`, which multiplies every structure constant by `N`).
#[derive(Clone, Debug)]
pub struct LatticeSpec {
    pub algebra: LieAlgebra,
    pub rescale: u32,
    pub word_length: usize,
    pub words_checked: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeSummary {
    pub rescale: u32,
    pub word_length: usize,
    pub words_checked: usize,
}

impl LatticeSpec {
    pub fn summary(&self) -> LatticeSummary {
        LatticeSummary { rescale: self.rescale, word_length: self.word_length, words_checked: self.words_checked }
    }

    /// `g = γ·g0` with `γ ∈ Γ` and `g0 ∈ [0,1)^n`, exactly.
    pub fn reduce(&self, g: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        reduce_mod_lattice(&self.algebra.group_law(), g)
    }
}

/// Multiplies every structure constant by `factor` (the basis scaled by `factor`).
pub fn rescale_algebra(alg: &LieAlgebra, factor: u32) -> LieAlgebra {
    let mut raw = alg.to_raw();
    let f = Rational::from_integer(factor.into());
    for v in raw.brackets.values_mut() {
        for c in v.iter_mut() {
            *c *= &f;
        }
    }
    validate_algebra(&raw).expect("rescaling preserves validity")
}

/// Checks that every word of length `≤ max_len` in the generators `e^{±X_i}` has
/// integer coordinates; returns the number of words or the first failing word
/// (signed 1-based generator indices).
pub fn check_closure(alg: &LieAlgebra, max_len: usize) -> Result<usize, LatticeError> {
    let law = alg.group_law();
    let n = alg.dim();
    let gens: Vec<(i32, Vec<Rational>)> = (0..n)
        .flat_map(|i| {
            [1i64, -1].map(|s| {
                let mut v = vec![Rational::zero(); n];
                v[i] = Rational::from_integer(s.into());
                ((i as i32 + 1) * s as i32, v)
            })
        })
        .collect();
    let mut count = 0usize;
    let mut stack: Vec<(Vec<i32>, Vec<Rational>)> = vec![(Vec::new(), vec![Rational::zero(); n])];
    while let Some((word, g)) = stack.pop() {
        if word.len() == max_len {
            continue;
        }
        for (label, h) in &gens {
            if word.last() == Some(&-label) {
                continue;
            }
            let p = law.multiply(&g, h);
            count += 1;
            let mut w = word.clone();
            w.push(*label);
            if p.iter().any(|c| !c.is_integer()) {
                return Err(LatticeError::ClosureFailure { word: w, coords: p.iter().map(format_rational).collect() });
            }
            stack.push((w, p));
        }
    }
    Ok(count)
}

/// Certifies that integer coordinates form a lattice (up to words of the configured
/// length), rescaling the basis by the smallest integer that makes this so.
pub fn verify_lattice(alg: &LieAlgebra, opts: ClosureOptions) -> Result<LatticeSpec, LatticeError> {
    let first = match check_closure(alg, opts.max_word_len) {
        Ok(words) => {
            return Ok(LatticeSpec { algebra: alg.clone(), rescale: 1, word_length: opts.max_word_len, words_checked: words })
        }
        Err(e) => e,
    };
    if opts.rescale_bound <= 1 {
        return Err(first);
    }
    for factor in 2..=opts.rescale_bound {
        let scaled = rescale_algebra(alg, factor);
        if let Ok(words) = check_closure(&scaled, opts.max_word_len) {
            return Ok(LatticeSpec { algebra: scaled, rescale: factor, word_length: opts.max_word_len, words_checked: words });
        }
    }
    Err(LatticeError::RescaleBoundExceeded { bound: opts.rescale_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::{abelian, heisenberg3};
    use crate::lie::RawAlgebra;
    use crate::scalar::{int, rat};

    #[test]
    fn integer_lattices() {
        assert_eq!(verify_lattice(&abelian(2), ClosureOptions::default()).unwrap().rescale, 1);
        let spec = verify_lattice(&heisenberg3(), ClosureOptions::default()).unwrap();
        assert_eq!(spec.rescale, 1);
        // e^{X2} e^{X3} e^{-X2} e^{-X3} = e^{X1}
        let law = heisenberg3().group_law();
        let e = |i: usize, s: i64| {
            let mut v = vec![int(0); 3];
            v[i] = int(s);
            v
        };
        let comm = law.multiply(&law.multiply(&law.multiply(&e(1, 1), &e(2, 1)), &e(1, -1)), &e(2, -1));
        assert_eq!(comm, e(0, 1));
    }

    #[test]
    fn half_bracket_needs_rescale() {
        let raw = RawAlgebra::new(3).bracket(2, 3, &[(1, rat(1, 2))]);
        let alg = validate_algebra(&raw).unwrap();
        let no_rescale = ClosureOptions { rescale_bound: 1, ..Default::default() };
        assert!(matches!(verify_lattice(&alg, no_rescale), Err(LatticeError::ClosureFailure { .. })));
        let spec = verify_lattice(&alg, ClosureOptions::default()).unwrap();
        assert_eq!(spec.rescale, 2);
        assert_eq!(spec.algebra.bracket_basis(1, 2), vec![int(1), int(0), int(0)]);
    }
}
