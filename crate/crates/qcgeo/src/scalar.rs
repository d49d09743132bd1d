//! Exact scalars: arbitrary precision rationals and Gaussian rationals.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use thiserror::Error;

/// Field of coefficients for every tensor in the crate.
pub type Scalar = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("malformed rational `{0}` (expected `p` or `p/q` with q nonzero)")]
pub struct ScalarParseError(pub String);

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn q(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// Parses `"p"` or `"p/q"` into lowest terms.
pub fn parse_scalar(s: &str) -> Result<Scalar, ScalarParseError> {
    let err = || ScalarParseError(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| err())?;
    let den = BigInt::from_str(den).map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(num, den))
}

/// Canonical text form: `p` for integers, `p/q` otherwise, always reduced.
pub fn format_scalar(x: &Scalar) -> String {
    x.to_string()
}

/// `a + b i` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Gaussian {
    pub re: Scalar,
    pub im: Scalar,
}

impl Gaussian {
    pub fn new(re: Scalar, im: Scalar) -> Self {
        Gaussian { re, im }
    }

    pub fn real(re: Scalar) -> Self {
        Gaussian { re, im: zero() }
    }

    pub fn i() -> Self {
        Gaussian { re: zero(), im: one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gaussian { re: self.re.clone(), im: -&self.im }
    }
}

impl From<i64> for Gaussian {
    fn from(n: i64) -> Self {
        Gaussian::real(int(n))
    }
}

impl From<Scalar> for Gaussian {
    fn from(x: Scalar) -> Self {
        Gaussian::real(x)
    }
}

impl Add for Gaussian {
    type Output = Gaussian;
    fn add(self, o: Gaussian) -> Gaussian {
        Gaussian { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for Gaussian {
    type Output = Gaussian;
    fn sub(self, o: Gaussian) -> Gaussian {
        Gaussian { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Neg for Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        Gaussian { re: -self.re, im: -self.im }
    }
}

impl Mul for Gaussian {
    type Output = Gaussian;
    fn mul(self, o: Gaussian) -> Gaussian {
        Gaussian {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl<'a> Mul<&'a Gaussian> for &'a Gaussian {
    type Output = Gaussian;
    fn mul(self, o: &Gaussian) -> Gaussian {
        Gaussian {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}i", self.re, sign, self.im.abs())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_reduces() {
        assert_eq!(parse_scalar("6/-4").unwrap(), q(-3, 2));
        assert_eq!(format_scalar(&parse_scalar(" 10/5 ").unwrap()), "2");
        assert_eq!(format_scalar(&q(-3, 2)), "-3/2");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
        assert!(parse_scalar("").is_err());
        assert!(parse_scalar("1.5").is_err());
    }

    #[test]
    fn gaussian_arithmetic() {
        let i = Gaussian::i();
        assert_eq!(i.clone() * i.clone(), Gaussian::from(-1));
        let z = Gaussian::new(int(1), int(-2));
        assert_eq!(z.to_string(), "1-2i");
        assert_eq!((z.clone() * z.conj()).to_string(), "5");
    }
}
