//! Truncated polynomial scalars `a + bε` with `ε² = 0`.
//!
//! Threading these through the generic elimination code yields exact first
//! derivatives of anything computed by rational linear algebra.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{Rational, Scalar};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Dual<T> {
    pub value: T,
    pub deriv: T,
}

impl<T: Scalar> Dual<T> {
    pub fn new(value: T, deriv: T) -> Self {
        Dual { value, deriv }
    }

    /// A constant, `value + 0ε`.
    pub fn constant(value: T) -> Self {
        Dual {
            value,
            deriv: T::zero(),
        }
    }

    /// The independent variable evaluated at `value`, i.e. `value + ε`.
    pub fn variable(value: T) -> Self {
        Dual {
            value,
            deriv: T::one(),
        }
    }

    pub fn epsilon() -> Self {
        Dual {
            value: T::zero(),
            deriv: T::one(),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for Dual<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}ε)", self.value, self.deriv)
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Dual {
            value: self.value + rhs.value,
            deriv: self.deriv + rhs.deriv,
        }
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Dual {
            value: self.value - rhs.value,
            deriv: self.deriv - rhs.deriv,
        }
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let deriv = self.value.clone() * rhs.deriv + self.deriv * rhs.value.clone();
        Dual {
            value: self.value * rhs.value,
            deriv,
        }
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual {
            value: -self.value,
            deriv: -self.deriv,
        }
    }
}

/// Division; panics when the divisor is not a unit.
impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        let inv = rhs.inverse().expect("division by a non-unit dual number");
        self * inv
    }
}

impl<T: Scalar> Zero for Dual<T> {
    fn zero() -> Self {
        Dual::constant(T::zero())
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.deriv.is_zero()
    }
}

impl<T: Scalar> One for Dual<T> {
    fn one() -> Self {
        Dual::constant(T::one())
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    fn inverse(&self) -> Option<Self> {
        // (a + bε)⁻¹ = a⁻¹ − b a⁻² ε
        let inv = self.value.inverse()?;
        let deriv = -(self.deriv.clone() * inv.clone() * inv.clone());
        Some(Dual { value: inv, deriv })
    }

    fn is_unit(&self) -> bool {
        self.value.is_unit()
    }

    fn from_i64(v: i64) -> Self {
        Dual::constant(T::from_i64(v))
    }

    fn from_rational(q: &Rational) -> Self {
        Dual::constant(T::from_rational(q))
    }

    fn weight(&self) -> u64 {
        self.value.weight() + self.deriv.weight()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};
    use crate::DualRational;

    #[test]
    fn epsilon_squares_to_zero() {
        let e = DualRational::epsilon();
        assert!((e.clone() * e).is_zero());
    }

    #[test]
    fn inverse_matches_quotient_rule() {
        // d/dx (1/x) at x = 3 is -1/9
        let x = DualRational::variable(rat(3));
        let inv = x.inverse().unwrap();
        assert_eq!(inv.value, ratio(1, 3));
        assert_eq!(inv.deriv, ratio(-1, 9));
        assert!(DualRational::epsilon().inverse().is_none());
    }
}
