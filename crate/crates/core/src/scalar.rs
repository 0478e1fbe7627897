//! Scalar abstraction shared by the linear-algebra kernels.
//!
//! Everything above this layer is written against [`Scalar`] so that the same
//! elimination code runs over exact rationals, over rationals with a nilpotent
//! `ε` (for exact first derivatives), and over `f64` for quick numeric probes.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A commutative ring element with a decidable notion of invertibility.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// Multiplicative inverse, `None` when the element is not a unit.
    fn inverse(&self) -> Option<Self>;

    fn is_unit(&self) -> bool {
        self.inverse().is_some()
    }

    fn from_i64(v: i64) -> Self;

    fn from_rational(q: &Rational) -> Self;

    /// Rough size of the element, used to break pivot ties towards cheap entries.
    fn weight(&self) -> u64 {
        1
    }
}

/// Marker for scalars where every nonzero element is a unit.
pub trait Field: Scalar {}

pub type Rational = BigRational;

impl Scalar for Rational {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn is_unit(&self) -> bool {
        !self.is_zero()
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn weight(&self) -> u64 {
        self.numer().bits() + self.denom().bits()
    }
}

impl Field for Rational {}

impl Scalar for f64 {
    fn inverse(&self) -> Option<Self> {
        if self.abs() <= 1e-12 {
            None
        } else {
            Some(1.0 / self)
        }
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_rational(q: &Rational) -> Self {
        q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
    }

    fn weight(&self) -> u64 {
        // prefer large pivots
        if self.abs() >= 1.0 {
            1
        } else {
            2
        }
    }
}

impl Field for f64 {}

/// Shorthand for an integer-valued rational.
pub fn rat(v: i64) -> Rational {
    Rational::from_i64(v)
}

/// `n / d` as a reduced rational. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(BigRational::from_integer(n))
        }
    }
}

/// Canonical `"p/q"` (or `"p"` for integers) rendering used in reports.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Returns `Some(n)` if `q` is an integer fitting in `i64`.
pub fn rational_to_i64(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}

pub fn is_negative(q: &Rational) -> bool {
    q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/4", "-7/2", "5", "0", "-12"] {
            let q = parse_rational(s).unwrap();
            assert_eq!(format_rational(&q), s);
        }
        assert_eq!(parse_rational("6/8").unwrap(), ratio(3, 4));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }

    #[test]
    fn rational_units() {
        assert!(rat(3).is_unit());
        assert!(!rat(0).is_unit());
        assert_eq!(ratio(2, 3).inverse().unwrap(), ratio(3, 2));
    }
}
