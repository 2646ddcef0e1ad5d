//! Coefficient fields.
//!
//! Every algebraic layer of the crate is generic over [`Coeff`]. The exact
//! instantiation used by the checkers and the CLI is [`crate::Rational`]
//! (arbitrary-precision, always reduced); `Ratio<i64>` works for small
//! problems, and `f64` can be plugged in for numerical evaluation, though
//! zero-testing is then only as good as floating point.

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed};

/// Field of coefficients for polynomials and structure constants.
pub trait Coeff:
    Clone + PartialEq + Debug + Display + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer fits the coefficient type")
    }

    /// Parses a decimal natural number.
    fn from_decimal(digits: &str) -> Option<Self> {
        if digits.is_empty() {
            return None;
        }
        let ten = Self::from_int(10);
        digits.chars().try_fold(Self::zero(), |acc, ch| {
            let d = ch.to_digit(10)?;
            Some(acc * ten.clone() + Self::from_int(d as i64))
        })
    }
}

impl<T> Coeff for T where
    T: Clone + PartialEq + Debug + Display + Num + Signed + FromPrimitive + Send + Sync + 'static
{
}

/// `(-1)^(alpha*beta)` as a coefficient.
pub fn sign<C: Coeff>(negative: bool) -> C {
    if negative {
        -C::one()
    } else {
        C::one()
    }
}

/// Coefficients with a notion of content, used to print constraint
/// polynomials with coprime integer coefficients.
pub trait Content: Coeff {
    /// A positive scalar whose quotient makes every coefficient an integer
    /// with overall gcd one.
    fn content(coeffs: &[Self]) -> Self;
}

impl<T> Content for Ratio<T>
where
    T: Clone + Integer + Signed,
    Ratio<T>: Coeff,
{
    fn content(coeffs: &[Self]) -> Self {
        let mut g = T::zero();
        let mut l = T::one();
        for c in coeffs {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        if g.is_zero() {
            return Ratio::from_integer(T::one());
        }
        Ratio::new(g, l)
    }
}
