//! Coefficient rings used by the Lie machinery.
//!
//! Everything in `lie` is written against [`Scalar`] so that the same BCH
//! code runs over exact rationals, over `Q(alpha)`, over polynomial rings (to
//! compile the group law symbolically) and over `f64` (for the solver).

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};


pub type Rational = BigRational;

/// A commutative ring containing the rationals.
pub trait Scalar: Clone + Debug + PartialEq + Send + Sync + Zero + One + 'static {
    fn from_rational(q: &Rational) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;

    fn scaled(&self, q: &Rational) -> Self {
        self.times(&Self::from_rational(q))
    }
}

impl Scalar for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
}

impl Scalar for f64 {
    fn from_rational(q: &Rational) -> Self {
        rational_to_f64(q)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
}

/// Scalars with a floor, needed to reduce points modulo an integer lattice.
pub trait Floor: Scalar {
    fn floor_int(&self) -> i64;
    /// Forces a value that rounding pushed just outside `[0, 1)` back inside.
    fn clamp_unit(&self) -> Self;
    /// Snaps values that should be integers (lattice coordinates) to them.
    fn round_if_inexact(&self) -> Self;
}

impl Floor for Rational {
    fn floor_int(&self) -> i64 {
        self.floor().to_integer().to_i64().expect("coordinate out of i64 range")
    }
    fn clamp_unit(&self) -> Self {
        self.clone()
    }
    fn round_if_inexact(&self) -> Self {
        self.clone()
    }
}

/// Largest `f64` below 1.
pub const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

impl Floor for f64 {
    fn floor_int(&self) -> i64 {
        self.floor() as i64
    }
    fn clamp_unit(&self) -> Self {
        if *self >= 1.0 {
            BELOW_ONE
        } else if *self < 0.0 {
            0.0
        } else {
            *self
        }
    }
    fn round_if_inexact(&self) -> Self {
        self.round()
    }
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Converts a rational to the nearest `f64`, also for huge numerators and denominators.
pub fn rational_to_f64(q: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && n.abs() < 9.0e15 && d < 9.0e15 {
            return n / d;
        }
    }
    // Scale to keep 64 significant bits of the quotient.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = 64 - (nb - db);
    let scaled = if shift >= 0 {
        (q.numer() << (shift as usize)) / q.denom()
    } else {
        q.numer() / (q.denom() << ((-shift) as usize))
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(shift as i32))
}

/// Parses `"p/q"`, `"p"` or a plain decimal like `"0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let whole_abs = whole.trim().trim_start_matches(['-', '+']);
        let digits = format!("{}{}", if whole_abs.is_empty() { "0" } else { whole_abs }, frac);
        if !digits.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let numer: BigInt = digits.parse().ok()?;
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        let value = Rational::new(numer, denom);
        return Some(if negative { -value } else { value });
    }
    let p: BigInt = s.parse().ok()?;
    Some(Rational::from_integer(p))
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn abs_rational(q: &Rational) -> Rational {
    q.abs()
}
