//! Multiplication in second-kind Malcev coordinates as explicit polynomials.

use super::algebra::{AlgebraElement, LieAlgebra};
use super::bch::{bch_product, coords_from_log, log_from_coords};
use crate::mpoly::{CompiledPoly, MPoly};

use crate::scalar::{Floor, Scalar};

/// `product[k]` is a polynomial in `2n` variables (`g` then `h`) giving the
/// `k`-th coordinate of `g·h`; `inverse[k]` is a polynomial in `n` variables.
#[derive(Clone, Debug)]
pub struct GroupLaw {
    dim: usize,
    product: Vec<MPoly>,
    inverse: Vec<MPoly>,
    product_f64: Vec<CompiledPoly>,
    inverse_f64: Vec<CompiledPoly>,
}

impl GroupLaw {
    pub fn compile(alg: &LieAlgebra) -> Self {
        let n = alg.dim();
        let g: Vec<MPoly> = (0..n).map(MPoly::var).collect();
        let h: Vec<MPoly> = (n..2 * n).map(MPoly::var).collect();
        let lg = log_from_coords(alg, &g);
        let lh = log_from_coords(alg, &h);
        let product = coords_from_log(alg, &bch_product(alg, &lg, &lh));
        let inverse = coords_from_log(alg, &lg.negated());
        GroupLaw {
            dim: n,
            product_f64: product.iter().map(MPoly::compile).collect(),
            inverse_f64: inverse.iter().map(MPoly::compile).collect(),
            product,
            inverse,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn product_polynomials(&self) -> &[MPoly] {
        &self.product
    }

    pub fn inverse_polynomials(&self) -> &[MPoly] {
        &self.inverse
    }

    pub fn multiply<S: Scalar>(&self, g: &[S], h: &[S]) -> Vec<S> {
        let vars: Vec<S> = g.iter().chain(h).cloned().collect();
        self.product.iter().map(|p| p.eval(&vars)).collect()
    }

    pub fn inverse<S: Scalar>(&self, g: &[S]) -> Vec<S> {
        self.inverse.iter().map(|p| p.eval(g)).collect()
    }

    pub fn multiply_f64(&self, g: &[f64], h: &[f64]) -> Vec<f64> {
        let mut vars = Vec::with_capacity(2 * self.dim);
        vars.extend_from_slice(g);
        vars.extend_from_slice(h);
        self.product_f64.iter().map(|p| p.eval(&vars)).collect()
    }

    pub fn inverse_f64(&self, g: &[f64]) -> Vec<f64> {
        self.inverse_f64.iter().map(|p| p.eval(g)).collect()
    }

    /// `g^m` for an integer `m` by repeated squaring.
    pub fn power<S: Scalar>(&self, g: &[S], m: i64) -> Vec<S> {
        let base = if m < 0 { self.inverse(g) } else { g.to_vec() };
        let mut e = m.unsigned_abs();
        let mut acc = vec![S::zero(); self.dim];
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.multiply(&sq, &sq);
            }
        }
        acc
    }

    /// `g h g^{-1} h^{-1}`.
    pub fn commutator<S: Scalar>(&self, g: &[S], h: &[S]) -> Vec<S> {
        let gh = self.multiply(g, h);
        let gi = self.inverse(g);
        let hi = self.inverse(h);
        self.multiply(&self.multiply(&gh, &gi), &hi)
    }
}

/// Multiplication through the charts and BCH, without compiled polynomials.
/// This is the reference route the compiled law must agree with.
pub fn multiply_via_bch<S: Scalar>(alg: &LieAlgebra, g: &[S], h: &[S]) -> Vec<S> {
    let z: AlgebraElement<S> = bch_product(alg, &log_from_coords(alg, g), &log_from_coords(alg, h));
    coords_from_log(alg, &z)
}

/// Writes `g = γ · g0` with `γ` in the integer lattice `e^{Z X_1}···e^{Z X_n}` and
/// `g0` in the cube `[0,1)^n`.
///
/// `γ` has integer coordinates only when integer points form a subgroup, i.e. the
/// structure constants make the law integral (check with `verify_lattice`).
///
/// The last coordinate is additive (quotient by the ideal `span{X_1..X_{n-1}}`), so it is
/// reduced first by a left translation `e^{-m X_n}`; this leaves the higher coordinates alone
/// and the remaining ones are handled the same way from index `n-1` down to 1.
pub fn reduce_mod_lattice<S: Floor>(law: &GroupLaw, g: &[S]) -> (Vec<S>, Vec<S>) {
    let n = law.dim();
    let mut cur = g.to_vec();
    for i in (0..n).rev() {
        let m = cur[i].floor_int();
        if m != 0 {
            let mut shift = vec![S::zero(); n];
            shift[i] = S::from_i64(-m);
            cur = law.multiply(&shift, &cur);
        }
        cur[i] = cur[i].clamp_unit();
    }
    let gamma = law.multiply(g, &law.inverse(&cur));
    let gamma = gamma.into_iter().map(|c| c.round_if_inexact()).collect();
    (gamma, cur)
}

/// `f64` version of [`reduce_mod_lattice`] on the compiled polynomials.
pub fn reduce_mod_lattice_f64(law: &GroupLaw, g: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = law.dim();
    let mut cur = g.to_vec();
    let mut shift = vec![0.0; n];
    for i in (0..n).rev() {
        let m = cur[i].floor();
        if m != 0.0 {
            shift[i] = -m;
            cur = law.multiply_f64(&shift, &cur);
            shift[i] = 0.0;
        }
        cur[i] = cur[i].clamp_unit();
    }
    let gamma = law.multiply_f64(g, &law.inverse_f64(&cur));
    (gamma.into_iter().map(f64::round).collect(), cur)
}
