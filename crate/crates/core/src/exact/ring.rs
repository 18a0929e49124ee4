//! Algebraic traits shared by every coefficient type in the crate.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One as _, Signed, Zero as _};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Commutative ring with identity.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_int(v: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * &base;
            }
        }
        acc
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring + Div<Output = Self> + for<'a> Div<&'a Self, Output = Self> {
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
}

/// Integral domain with computable gcds and exact division.
///
/// `gcd` returns a canonical associate: its leading sign (see [`GcdDomain::lead_sign`])
/// is positive unless both arguments are zero.
pub trait GcdDomain: Ring {
    fn gcd(&self, other: &Self) -> Self;
    /// `Some(q)` with `q * other == self`, or `None` when `other` does not divide `self`.
    fn div_exact(&self, other: &Self) -> Option<Self>;
    /// Sign (+1, -1, or 0 for zero) of the leading rational coefficient.
    fn lead_sign(&self) -> i32;
}

impl Ring for Rational {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn from_int(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn is_one(&self) -> bool {
        num_traits::One::is_one(self)
    }
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if num_traits::Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl GcdDomain for Rational {
    /// Rational content gcd: `gcd(p1/q1, p2/q2) = gcd(p1, p2) / lcm(q1, q2)`.
    ///
    /// Dividing a polynomial over Q by the gcd of its coefficients yields a
    /// primitive integer polynomial.
    fn gcd(&self, other: &Self) -> Self {
        let a = self.abs();
        let b = other.abs();
        if Ring::is_zero(&a) {
            return b;
        }
        if Ring::is_zero(&b) {
            return a;
        }
        let num = a.numer().gcd(b.numer());
        let den = a.denom().lcm(b.denom());
        Rational::new(num, den)
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        if Ring::is_zero(other) {
            None
        } else {
            Some(self / other)
        }
    }
    fn lead_sign(&self) -> i32 {
        if Ring::is_zero(self) {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }
}

impl Ring for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_int(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
}

impl Field for Complex64 {
    fn inv(&self) -> Option<Self> {
        if Ring::is_zero(self) {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / self)
        }
    }
}

/// Parse `"p"` or `"p/q"` into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => {
            let p: BigInt = s.parse().ok()?;
            Some(Rational::from_integer(p))
        }
    }
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Implements the four by-value/by-reference variants of a binary operator
/// in terms of a `fn(&T, &T) -> T`.
#[macro_export]
#[doc(hidden)]
macro_rules! forward_binop {
    ([$($gen:tt)*] $ty:ty, $tr:ident, $method:ident, $f:path) => {
        impl<$($gen)*> std::ops::$tr<&$ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                $f(self, rhs)
            }
        }
        impl<$($gen)*> std::ops::$tr<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                $f(&self, &rhs)
            }
        }
        impl<$($gen)*> std::ops::$tr<&$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                $f(&self, rhs)
            }
        }
        impl<$($gen)*> std::ops::$tr<$ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                $f(self, &rhs)
            }
        }
    };
}

#[macro_export]
#[doc(hidden)]
macro_rules! forward_neg {
    ([$($gen:tt)*] $ty:ty, $f:path) => {
        impl<$($gen)*> std::ops::Neg for $ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $f(&self)
            }
        }
        impl<$($gen)*> std::ops::Neg for &$ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $f(self)
            }
        }
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_content_gcd() {
        assert_eq!(GcdDomain::gcd(&rat(4, 3), &rat(-6, 5)), rat(2, 15));
        assert_eq!(GcdDomain::gcd(&rat(0, 1), &rat(-3, 7)), rat(3, 7));
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("-3/6"), Some(rat(-1, 2)));
        assert_eq!(parse_rational(" 7 "), Some(rat(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn pow_by_squaring() {
        assert_eq!(rat(-2, 3).pow(5), rat(-32, 243));
        assert_eq!(rat(5, 1).pow(0), rat(1, 1));
    }
}
