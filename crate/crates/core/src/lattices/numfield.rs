//! Exact arithmetic in `Q(α)` for a real algebraic number `α`, represented by
//! residues modulo its minimal polynomial, with rational interval enclosures
//! for the real embedding.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::error::LatticeError;
use super::upoly::{count_roots, isolate_real_roots, rational_root, refine_root, UPoly};
use crate::linalg::nullspace;
use crate::scalar::{format_rational, rational_to_f64, Rational, Scalar};

/// Bits of the cached enclosure of the generator.
const ENCLOSURE_BITS: u32 = 256;

/// How irreducibility of the minimal polynomial was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Irreducibility {
    /// Degree ≤ 4: no rational root and no quadratic factor.
    Checked,
    /// Degree > 4: taken on trust after the rational-root test.
    Assumed,
}

/// `Q(α)` with `α` the unique root of `min_poly` in `(root_lo, root_hi]`.
pub struct NumberField {
    min_poly: UPoly,
    int_poly: Vec<BigInt>,
    root_lo: Rational,
    root_hi: Rational,
    irreducibility: Irreducibility,
    enclosure: OnceLock<(Rational, Rational)>,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(root of {} in ({}, {}])", format_poly(&self.int_poly), format_rational(&self.root_lo), format_rational(&self.root_hi))
    }
}

pub fn format_poly(coeffs: &[BigInt]) -> String {
    let mut terms = Vec::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{k}"),
        };
        let coef = if k > 0 && c.abs().is_one() {
            if c.is_negative() { "-".to_string() } else { String::new() }
        } else {
            c.to_string()
        };
        terms.push(format!("{coef}{mono}"));
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ").replace("+ -", "- ")
    }
}

/// Looks for a factor of degree 1 or 2 (the only possible proper factors up to degree 4).
fn small_factor(p: &UPoly) -> Result<Option<UPoly>, ()> {
    if let Some(r) = rational_root(p) {
        return Ok(Some(UPoly::new(vec![-r, Rational::one()])));
    }
    if p.degree() < 4 {
        return Ok(None);
    }
    // Kronecker: a quadratic factor g has g(x) | f(x) at x = 0, 1, -1.
    let f = UPoly::from_integers(&p.primitive_integer());
    let vals: Vec<BigInt> = [0i64, 1, -1].iter().map(|&x| f.eval(&Rational::from_integer(x.into())).to_integer()).collect();
    let mut divs: Vec<Vec<i64>> = Vec::new();
    for v in &vals {
        let v: i64 = v.abs().try_into().map_err(|_| ())?;
        if v > 1_000_000 {
            return Err(());
        }
        let mut d: Vec<i64> = (1..=v).filter(|d| v % d == 0).collect();
        d.extend(d.clone().iter().map(|x| -x));
        divs.push(d);
    }
    for &d0 in divs[0].iter().filter(|&&d| d > 0) {
        for &d1 in &divs[1] {
            for &d2 in &divs[2] {
                if (d1 - d2) % 2 != 0 {
                    continue;
                }
                let b = (d1 - d2) / 2;
                let c = (d1 + d2) / 2 - d0;
                if c == 0 {
                    continue;
                }
                let g = UPoly::from_i64(&[d0, b, c]);
                if f.rem(&g).is_zero() {
                    return Ok(Some(g));
                }
            }
        }
    }
    Ok(None)
}

impl NumberField {
    /// Builds the field from integer coefficients (ascending) and an optional isolating
    /// interval `(lo, hi]`; without an interval the largest real root is used.
    pub fn new(coeffs: &[BigInt], interval: Option<(Rational, Rational)>) -> Result<Arc<Self>, LatticeError> {
        let p = UPoly::from_integers(coeffs);
        if p.degree() == 0 {
            return Err(LatticeError::InvalidPolynomial("degree must be at least 1".into()));
        }
        let irreducibility = if p.degree() == 1 {
            Irreducibility::Checked
        } else {
            match small_factor(&p) {
                Ok(Some(g)) => {
                    return Err(LatticeError::ReduciblePolynomial { factor: format_poly(&g.primitive_integer()) })
                }
                Ok(None) if p.degree() <= 4 => Irreducibility::Checked,
                _ => Irreducibility::Assumed,
            }
        };
        let (lo, hi) = match interval {
            Some((lo, hi)) => {
                let roots = if lo < hi { count_roots(&p, &lo, &hi) } else { 0 };
                if roots != 1 {
                    return Err(LatticeError::InvalidRootInterval {
                        lo: format_rational(&lo),
                        hi: format_rational(&hi),
                        roots,
                    });
                }
                (lo, hi)
            }
            None => isolate_real_roots(&p).pop().ok_or(LatticeError::NoRealRoot)?,
        };
        Ok(Arc::new(NumberField {
            int_poly: p.primitive_integer(),
            min_poly: p.monic(),
            root_lo: lo,
            root_hi: hi,
            irreducibility,
            enclosure: OnceLock::new(),
        }))
    }

    pub fn from_i64(coeffs: &[i64], interval: Option<(Rational, Rational)>) -> Result<Arc<Self>, LatticeError> {
        NumberField::new(&coeffs.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>(), interval)
    }

    pub fn degree(&self) -> usize {
        self.min_poly.degree()
    }

    pub fn min_poly(&self) -> &UPoly {
        &self.min_poly
    }

    pub fn integer_min_poly(&self) -> &[BigInt] {
        &self.int_poly
    }

    pub fn irreducibility(&self) -> Irreducibility {
        self.irreducibility
    }

    pub fn root_interval(&self) -> (&Rational, &Rational) {
        (&self.root_lo, &self.root_hi)
    }

    /// Enclosure of `α` of width at most `2^-256`.
    pub fn alpha_enclosure(&self) -> &(Rational, Rational) {
        self.enclosure.get_or_init(|| refine_root(&self.min_poly, &self.root_lo, &self.root_hi, ENCLOSURE_BITS))
    }

    pub fn generator(self: &Arc<Self>) -> NfElement {
        NfElement::from_poly(UPoly::monomial(Rational::one(), 1), self)
    }

    pub fn element(self: &Arc<Self>, coeffs: Vec<Rational>) -> NfElement {
        NfElement::from_poly(UPoly::new(coeffs), self)
    }

    pub fn describe(&self) -> String {
        format!("{:?}", self)
    }
}

/// Element of `Q(α)`; `field` is `None` for rational constants, which mix freely
/// with elements of any field.
#[derive(Clone)]
pub struct NfElement {
    poly: UPoly,
    field: Option<Arc<NumberField>>,
}

impl fmt::Debug for NfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

impl PartialEq for NfElement {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly
    }
}

impl NfElement {
    pub fn rational(q: Rational) -> Self {
        NfElement { poly: UPoly::constant(q), field: None }
    }

    pub fn from_poly(p: UPoly, field: &Arc<NumberField>) -> Self {
        NfElement { poly: p.rem(&field.min_poly), field: Some(field.clone()) }
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    /// Residue coefficients in ascending powers of `α`.
    pub fn coeffs(&self) -> &[Rational] {
        self.poly.coeffs()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        (self.poly.degree() == 0).then(|| self.poly.coeff(0))
    }

    fn join(&self, o: &Self) -> Option<Arc<NumberField>> {
        self.field.clone().or_else(|| o.field.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(NfElement::rational(Rational::one()), |acc, _| acc.times(self))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.poly.is_zero() {
            return None;
        }
        let Some(field) = &self.field else {
            return Some(NfElement::rational(Rational::one() / self.poly.coeff(0)));
        };
        // Extended Euclid: s·a ≡ g (mod m).
        let (mut r0, mut r1) = (field.min_poly.clone(), self.poly.clone());
        let (mut s0, mut s1) = (UPoly::default(), UPoly::constant(Rational::one()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != 0 {
            return None;
        }
        let inv = s0.scale(&(Rational::one() / r0.coeff(0)));
        Some(NfElement::from_poly(inv, field))
    }

    pub fn divided(&self, o: &Self) -> Option<Self> {
        o.inverse().map(|inv| self.times(&inv))
    }

    /// Rational interval containing the real value, of width about `2^-200` or better.
    pub fn enclosure(&self) -> (Rational, Rational) {
        let Some(field) = &self.field else {
            let q = self.poly.coeff(0);
            return (q.clone(), q);
        };
        let (alo, ahi) = field.alpha_enclosure();
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        for c in self.poly.coeffs().iter().rev() {
            let products = [&lo * alo, &lo * ahi, &hi * alo, &hi * ahi];
            let min = products.iter().min().unwrap().clone();
            let max = products.iter().max().unwrap().clone();
            lo = min + c;
            hi = max + c;
        }
        (lo, hi)
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.enclosure();
        rational_to_f64(&((lo + hi) / Rational::from_integer(2.into())))
    }

    /// Minimal polynomial over `Q` (monic), by linear dependence of powers.
    pub fn minimal_polynomial(&self) -> UPoly {
        let Some(field) = &self.field else {
            return UPoly::new(vec![-self.poly.coeff(0), Rational::one()]);
        };
        let d = field.degree();
        let mut powers: Vec<Vec<Rational>> = Vec::new();
        let mut cur = NfElement::rational(Rational::one());
        for j in 0..=d {
            powers.push((0..d).map(|k| cur.poly.coeff(k)).collect());
            // Columns are the powers so far; a kernel vector is a relation.
            let rows: Vec<Vec<Rational>> = (0..d).map(|k| powers.iter().map(|p| p[k].clone()).collect()).collect();
            let kernel = nullspace(&rows, j + 1);
            if let Some(v) = kernel.first() {
                return UPoly::new(v.clone()).monic();
            }
            cur = cur.times(self);
        }
        unreachable!("powers of an element of a degree-{d} field are dependent by degree {d}")
    }

    /// The element as a standalone algebraic number with its own isolating interval.
    pub fn algebraic_number(&self) -> AlgebraicNumber {
        let min_poly = self.minimal_polynomial();
        let (lo, hi) = self.enclosure();
        if min_poly.degree() == 1 {
            let q = -min_poly.coeff(0);
            return AlgebraicNumber { min_poly, lo: q.clone() - Rational::one(), hi: q };
        }
        // Irrational: the enclosure interior is root-free except for the value itself.
        let pad = (&hi - &lo).max(Rational::new(BigInt::one(), BigInt::one() << 200));
        let (mut lo, mut hi) = (lo - &pad, hi + &pad);
        while count_roots(&min_poly, &lo, &hi) > 1 {
            let w = (&hi - &lo) / Rational::from_integer(4.into());
            lo += &w;
            hi -= &w;
        }
        AlgebraicNumber { min_poly, lo, hi }
    }

    pub fn display(&self) -> String {
        if self.poly.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in self.poly.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = format_rational(c);
            parts.push(match k {
                0 => c,
                1 => format!("{c}*a"),
                _ => format!("{c}*a^{k}"),
            });
        }
        parts.join(" + ")
    }
}

impl Scalar for NfElement {
    fn from_rational(q: &Rational) -> Self {
        NfElement::rational(q.clone())
    }
    fn plus(&self, o: &Self) -> Self {
        NfElement { poly: self.poly.add(&o.poly), field: self.join(o) }
    }
    fn minus(&self, o: &Self) -> Self {
        NfElement { poly: self.poly.sub(&o.poly), field: self.join(o) }
    }
    fn times(&self, o: &Self) -> Self {
        let field = self.join(o);
        let p = self.poly.mul(&o.poly);
        let poly = match &field {
            Some(f) if p.degree() >= f.degree() => p.rem(&f.min_poly),
            _ => p,
        };
        NfElement { poly, field }
    }
    fn negated(&self) -> Self {
        NfElement { poly: self.poly.scale(&-Rational::one()), field: self.field.clone() }
    }
    fn scaled(&self, q: &Rational) -> Self {
        NfElement { poly: self.poly.scale(q), field: self.field.clone() }
    }
}

impl std::ops::Add for NfElement {
    type Output = NfElement;
    fn add(self, o: NfElement) -> NfElement {
        self.plus(&o)
    }
}

impl std::ops::Mul for NfElement {
    type Output = NfElement;
    fn mul(self, o: NfElement) -> NfElement {
        self.times(&o)
    }
}

impl Zero for NfElement {
    fn zero() -> Self {
        NfElement { poly: UPoly::default(), field: None }
    }
    fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

impl One for NfElement {
    fn one() -> Self {
        NfElement::rational(Rational::one())
    }
}

/// A real algebraic number: monic minimal polynomial and an isolating interval `(lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicNumber {
    pub min_poly: UPoly,
    pub lo: Rational,
    pub hi: Rational,
}

impl AlgebraicNumber {
    pub fn degree(&self) -> usize {
        self.min_poly.degree()
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    /// Enclosure of width at most `2^-bits`.
    pub fn refine(&self, bits: u32) -> (Rational, Rational) {
        if self.is_rational() {
            let q = -self.min_poly.coeff(0);
            return (q.clone(), q);
        }
        refine_root(&self.min_poly, &self.lo, &self.hi, bits)
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.refine(64);
        rational_to_f64(&((lo + hi) / Rational::from_integer(2.into())))
    }

    pub fn integer_min_poly(&self) -> Vec<BigInt> {
        self.min_poly.primitive_integer()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn cube_root_of_two() {
        let f = NumberField::from_i64(&[-2, 0, 0, 1], None).unwrap();
        assert_eq!(f.irreducibility(), Irreducibility::Checked);
        let a = f.generator();
        assert_eq!(a.pow(3), NfElement::rational(int(2)));
        assert!((a.to_f64() - 2f64.cbrt()).abs() < 1e-15);
        let a2 = a.pow(2);
        assert_eq!(a2.minimal_polynomial(), UPoly::from_i64(&[-4, 0, 0, 1]));
        let inv = a.inverse().unwrap();
        assert_eq!(inv.times(&a), NfElement::one());
        assert_eq!(inv, f.element(vec![int(0), int(0), rat(1, 2)]));
        let num = a2.algebraic_number();
        assert!((num.to_f64() - 4f64.cbrt()).abs() < 1e-15);
        assert_eq!(count_roots(&num.min_poly, &num.lo, &num.hi), 1);
    }

    #[test]
    fn rejects_bad_polynomials() {
        assert!(matches!(NumberField::from_i64(&[-4, 0, 1], None), Err(LatticeError::ReduciblePolynomial { .. })));
        // (x^2 - 2)(x^2 - 3) has no rational root but a quadratic factor.
        assert!(matches!(NumberField::from_i64(&[6, 0, -5, 0, 1], None), Err(LatticeError::ReduciblePolynomial { .. })));
        assert!(matches!(NumberField::from_i64(&[1, 0, 1], None), Err(LatticeError::NoRealRoot)));
        assert!(matches!(
            NumberField::from_i64(&[-2, 0, 1], Some((int(2), int(3)))),
            Err(LatticeError::InvalidRootInterval { roots: 0, .. })
        ));
        let neg = NumberField::from_i64(&[-2, 0, 1], Some((int(-2), int(-1)))).unwrap();
        assert!((neg.generator().to_f64() + 2f64.sqrt()).abs() < 1e-15);
        let big = NumberField::from_i64(&[-2, 0, 0, 0, 0, 1], None).unwrap();
        assert_eq!(big.irreducibility(), Irreducibility::Assumed);
    }

    #[test]
    fn rational_constants_mix_with_fields() {
        let f = NumberField::from_i64(&[-2, 0, 1], None).unwrap();
        let s = f.generator();
        let x = NfElement::rational(rat(1, 3)).plus(&s);
        assert_eq!(x.times(&x), f.element(vec![rat(19, 9), rat(2, 3)]));
        assert_eq!(format_poly(&[BigInt::from(-2), BigInt::from(0), BigInt::from(1)]), "x^2 - 2");
    }
}
