//! Number types the algebra runs over.
//!
//! Every zero test in the classification goes through [`Scalar::is_negligible`]:
//! floating-point values are compared against a magnitude scaled by the
//! relative [`Tolerance`], exact rationals are compared with zero directly.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Arbitrary precision rational number.
pub type Rational = BigRational;

/// Relative zero tolerance for floating-point decisions.
///
/// A quantity `v` whose natural magnitude is `m` counts as zero when
/// `|v| <= rel * m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
}

impl Tolerance {
    pub const DEFAULT_REL: f64 = 1e-9;

    pub fn new(rel: f64) -> Self {
        Self { rel }
    }

    pub fn is_zero(&self, value: f64, magnitude: f64) -> bool {
        value.abs() <= self.rel * magnitude.abs()
    }

    /// Sign of `value` with the band `[-rel*m, rel*m]` collapsed to zero.
    pub fn sign(&self, value: f64, magnitude: f64) -> Ordering {
        if self.is_zero(value, magnitude) {
            Ordering::Equal
        } else if value > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(Self::DEFAULT_REL)
    }
}

/// Field operations plus the zero test used by branch predicates.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    /// True when arithmetic is performed without rounding.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    /// Converts a float; exact types use the float's exact binary value.
    fn from_f64(v: f64) -> Option<Self>;

    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self;

    /// Zero test of `self` relative to `magnitude`.
    fn is_negligible(&self, magnitude: &Self, tol: Tolerance) -> bool;

    fn sign(&self, magnitude: &Self, tol: Tolerance) -> Ordering {
        if self.is_negligible(magnitude, tol) {
            Ordering::Equal
        } else if *self > Self::zero() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    fn half() -> Self {
        Self::one() / Self::from_i64(2)
    }

    fn max_abs<'a, I>(values: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
        Self: 'a,
    {
        values.into_iter().fold(Self::zero(), |acc, v| {
            let a = v.abs();
            if a > acc {
                a
            } else {
                acc
            }
        })
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn is_negligible(&self, magnitude: &Self, tol: Tolerance) -> bool {
        tol.is_zero(*self, *magnitude)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_f64(v: f64) -> Option<Self> {
        Rational::from_float(v)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // numerator/denominator may individually overflow f64
            let n = self.numer().to_f64().unwrap_or(f64::NAN);
            let d = self.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn is_negligible(&self, _magnitude: &Self, _tol: Tolerance) -> bool {
        self.is_zero()
    }
}

/// Parses `"3/7"`, `"-2"`, or a decimal such as `"0.25"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Ok(n) = text.parse::<BigInt>() {
        return Some(Rational::from_integer(n));
    }
    // decimal literal: split mantissa and optional exponent
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let negative = mantissa.starts_with('-');
    let mantissa = mantissa.trim_start_matches(['-', '+']);
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Some(value)
}

/// Formats a rational as `"p/q"` (or `"p"` for integers).
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        let r = |n: i64, d: i64| Rational::new(n.into(), d.into());
        assert_eq!(parse_rational("3/7"), Some(r(3, 7)));
        assert_eq!(parse_rational(" -2 "), Some(r(-2, 1)));
        assert_eq!(parse_rational("0.25"), Some(r(1, 4)));
        assert_eq!(parse_rational("-1.5e1"), Some(r(-15, 1)));
        assert_eq!(parse_rational("2.5e-2"), Some(r(1, 40)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn float_zero_test_is_relative() {
        let tol = Tolerance::default();
        assert!(1e-10_f64.is_negligible(&1.0, tol));
        assert!(!1e-10_f64.is_negligible(&1e-3, tol));
        assert_eq!((-1e-3_f64).sign(&1.0, tol), Ordering::Less);
    }

    #[test]
    fn rational_zero_test_is_exact() {
        let tiny = Rational::new(1.into(), BigInt::from(10).pow(40));
        assert!(!tiny.is_negligible(&Rational::one(), Tolerance::default()));
        assert!(Rational::zero().is_negligible(&Rational::one(), Tolerance::new(0.0)));
        assert_eq!(format_rational(&Rational::new(6.into(), 4.into())), "3/2");
    }
}
