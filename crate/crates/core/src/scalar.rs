//! Scalar traits shared by the polynomial and matrix layers.
//!
//! Everything exact in this crate runs over [`Rational`]; the same generic
//! code also runs over `f32`/`f64` for the floating-point oracles.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = BigRational;

/// A commutative ring element usable as a polynomial coefficient or matrix entry.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
{
    fn from_i64(v: i64) -> Self;
}

/// A [`Scalar`] with exact (or IEEE) division.
pub trait Field: Scalar + Div<Output = Self> {}

impl<T> Field for T where T: Scalar + Div<Output = T> {}

/// Ordered fields: the sign of an element is meaningful.
pub trait OrderedField: Field + Signed + PartialOrd {}

impl<T> OrderedField for T where T: Field + Signed + PartialOrd {}

/// Lossy conversion to `f64`, used at float evaluation boundaries.
pub trait ToFloat {
    fn to_float(&self) -> f64;
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Scalar for f32 {
    fn from_i64(v: i64) -> Self {
        v as f32
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

impl ToFloat for f64 {
    fn to_float(&self) -> f64 {
        *self
    }
}

impl ToFloat for f32 {
    fn to_float(&self) -> f64 {
        f64::from(*self)
    }
}

impl ToFloat for BigRational {
    fn to_float(&self) -> f64 {
        self.to_f64().unwrap_or_else(|| {
            // Huge numerator/denominator pairs can overflow f64 individually.
            let n = self.numer().to_f64().unwrap_or(f64::NAN);
            let d = self.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }
}

/// `p/q` as a [`Rational`].
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Integer `p` as a [`Rational`].
pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// `p/q` text form used in reports: integers print without a denominator.
pub fn rational_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Integer power with a signed exponent.
pub fn rational_powi(base: &Rational, exp: i32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp.unsigned_abs() {
        acc *= base;
    }
    if exp < 0 {
        acc.recip()
    } else {
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_canonical() {
        let r = rat(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(rat(0, 7), Rational::zero());
        assert_eq!(rat(0, 7).denom(), &BigInt::from(1));
    }

    #[test]
    fn rational_text() {
        assert_eq!(rational_string(&rat(10, 4)), "5/2");
        assert_eq!(rational_string(&int(-3)), "-3");
    }

    #[test]
    fn powi_handles_negative_exponents() {
        assert_eq!(rational_powi(&rat(2, 3), -2), rat(9, 4));
        assert_eq!(rational_powi(&int(5), 0), int(1));
    }
}
