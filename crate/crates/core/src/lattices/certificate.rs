//! Quantitative small-divisor bounds `|e^{2πika} - 1| ≥ C |k|^{-α_exp}` for
//! real algebraic irrationals, from Liouville's inequality.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::error::LatticeError;
use super::numfield::{format_poly, AlgebraicNumber};
use crate::scalar::{format_rational, rational_to_f64, Rational};

pub const DEFAULT_K_MAX: u64 = 4096;
pub const DEFAULT_PRECISION_BITS: u32 = 128;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Provenance {
    /// Liouville's inequality for the given integer minimal polynomial.
    Liouville { min_poly: String },
    UserSupplied,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiophantineCertificate {
    /// Approximate value of `a`.
    pub value: f64,
    pub c: f64,
    pub alpha_exp: f64,
    pub provenance: Provenance,
    /// Largest `|k|` for which the bound was verified numerically.
    pub k_max: u64,
    pub precision_bits: u32,
    /// `min_k |e^{2πika} - 1| · |k|^{α_exp} / C` over the verified range (≥ 1 on success).
    pub min_ratio: f64,
}

impl DiophantineCertificate {
    /// Floor below which a divisor at cutoff `k` counts as resonant: half the certified bound.
    pub fn divisor_floor(&self, k: usize) -> f64 {
        0.5 * self.c * (k.max(1) as f64).powf(-self.alpha_exp)
    }

    pub fn bound(&self, k: i64) -> f64 {
        self.c * (k.unsigned_abs() as f64).powf(-self.alpha_exp)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CertificateOptions {
    pub k_max: u64,
    pub precision_bits: u32,
}

impl Default for CertificateOptions {
    fn default() -> Self {
        CertificateOptions { k_max: DEFAULT_K_MAX, precision_bits: DEFAULT_PRECISION_BITS }
    }
}

/// Liouville certificate: with `P` the primitive integer minimal polynomial of degree `d`
/// and `M ≥ max |P'|` on `[a-1, a+1]`, `|a - p/q| ≥ min(1, 1/M) q^{-d}`; then
/// `dist(ka, Z) ≥ C_L k^{1-d}` and `2|sin πx| ≥ 4 dist(x, Z)` give `C = 4 C_L`, `α_exp = d - 1`.
pub fn diophantine_certificate(a: &AlgebraicNumber, opts: CertificateOptions) -> Result<DiophantineCertificate, LatticeError> {
    if a.is_rational() {
        return Err(LatticeError::RationalInput { value: format_rational(&-a.min_poly.coeff(0)) });
    }
    let p = a.integer_min_poly();
    let d = p.len() - 1;
    let (lo, hi) = a.refine(opts.precision_bits);
    let radius = lo.abs().max(hi.abs()) + Rational::one();
    let mut m = Rational::zero();
    let mut pow = Rational::one();
    for (i, c) in p.iter().enumerate().skip(1) {
        m += Rational::from_integer(BigInt::from(i) * c.abs()) * &pow;
        pow *= &radius;
    }
    let c_l = if m <= Rational::one() { Rational::one() } else { Rational::one() / m };
    // Round the constant down so the f64 value is still a valid bound.
    let c = rational_to_f64(&(c_l * Rational::from_integer(4.into()))) * (1.0 - 1e-12);
    let cert = DiophantineCertificate {
        value: a.to_f64(),
        c,
        alpha_exp: (d - 1) as f64,
        provenance: Provenance::Liouville { min_poly: format_poly(&p) },
        k_max: opts.k_max,
        precision_bits: opts.precision_bits,
        min_ratio: f64::INFINITY,
    };
    spot_check(cert, &lo, &hi)
}

/// A user-supplied `(C, α_exp)`, accepted only after the same numerical spot check.
pub fn user_certificate(
    a: &AlgebraicNumber,
    c: f64,
    alpha_exp: f64,
    opts: CertificateOptions,
) -> Result<DiophantineCertificate, LatticeError> {
    if a.is_rational() {
        return Err(LatticeError::RationalInput { value: format_rational(&-a.min_poly.coeff(0)) });
    }
    let (lo, hi) = a.refine(opts.precision_bits);
    let cert = DiophantineCertificate {
        value: a.to_f64(),
        c,
        alpha_exp,
        provenance: Provenance::UserSupplied,
        k_max: opts.k_max,
        precision_bits: opts.precision_bits,
        min_ratio: f64::INFINITY,
    };
    spot_check(cert, &lo, &hi)
}

/// Lower bound on `dist(x, Z)` over `x ∈ [lo, hi]`, zero if the interval meets an integer.
fn dist_to_integers(lo: &Rational, hi: &Rational) -> Rational {
    let m = lo.floor();
    if hi.floor() != m || *lo == m {
        return Rational::zero();
    }
    let up = &m + Rational::one() - hi;
    let down = lo - &m;
    up.min(down)
}

/// Verifies `2|sin(πka)| ≥ C k^{-α}` for `1 ≤ k ≤ k_max` (negative `k` are symmetric),
/// using the exact enclosure `[lo, hi]` of `a`.
fn spot_check(mut cert: DiophantineCertificate, lo: &Rational, hi: &Rational) -> Result<DiophantineCertificate, LatticeError> {
    let results: Vec<(i64, f64, f64)> = (1..=cert.k_max as i64)
        .into_par_iter()
        .map(|k| {
            let kk = Rational::from_integer(BigInt::from(k));
            let dist = dist_to_integers(&(lo * &kk), &(hi * &kk));
            let d = rational_to_f64(&dist) * (1.0 - 1e-15);
            let divisor = 2.0 * (std::f64::consts::PI * d).sin() * (1.0 - 1e-12);
            (k, divisor, cert.bound(k))
        })
        .collect();
    let mut min_ratio = f64::INFINITY;
    for (k, divisor, bound) in results {
        if divisor < bound {
            return Err(LatticeError::CertificateSpotCheckFailed { k, divisor, bound });
        }
        min_ratio = min_ratio.min(divisor / bound);
    }
    cert.min_ratio = min_ratio;
    Ok(cert)
}

/// Runtime divisor floor for rotations without a certificate (e.g. rational test rotations).
pub const UNCERTIFIED_DIVISOR_FLOOR: f64 = 1e-9;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattices::numfield::NumberField;
    use crate::lattices::upoly::UPoly;
    use crate::scalar::{int, rat};

    #[test]
    fn sqrt_two() {
        let a = NumberField::from_i64(&[-2, 0, 1], None).unwrap().generator().algebraic_number();
        let cert = diophantine_certificate(&a, CertificateOptions::default()).unwrap();
        assert_eq!(cert.alpha_exp, 1.0);
        assert!(cert.c > 0.0 && cert.min_ratio >= 1.0);
    }

    #[test]
    fn rational_rejected() {
        let half = AlgebraicNumber { min_poly: UPoly::new(vec![rat(-1, 2), int(1)]), lo: int(0), hi: int(1) };
        assert!(matches!(
            diophantine_certificate(&half, CertificateOptions::default()),
            Err(LatticeError::RationalInput { .. })
        ));
    }

    #[test]
    fn overclaimed_user_bound_fails() {
        let a = NumberField::from_i64(&[-2, 0, 1], None).unwrap().generator().algebraic_number();
        let opts = CertificateOptions { k_max: 512, precision_bits: 128 };
        assert!(matches!(user_certificate(&a, 5.0, 1.0, opts), Err(LatticeError::CertificateSpotCheckFailed { .. })));
        assert!(user_certificate(&a, 0.1, 1.0, opts).is_ok());
    }
}
