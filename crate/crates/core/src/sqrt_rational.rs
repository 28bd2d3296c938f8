//! Exact numbers of the form `sign * sqrt(q)` with `q` a non-negative rational.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Mul, Neg};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SqrtError {
    #[error("radicands {0} and {1} differ by a non-square factor")]
    Incompatible(String, String),
    #[error("negative radicand {0}")]
    NegativeRadicand(String),
    #[error("sign must be -1, 0 or 1 (got {0})")]
    BadSign(i64),
    #[error("malformed radicand '{0}'")]
    Malformed(String),
}

/// `sign * sqrt(radicand)`; zero has sign 0 and radicand 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SqrtRational {
    sign: i8,
    radicand: BigRational,
}

/// Exact square root of a rational, if it has one.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = int_sqrt(q.numer())?;
    let d = int_sqrt(q.denom())?;
    Some(BigRational::new(n, d))
}

fn int_sqrt(x: &BigInt) -> Option<BigInt> {
    let s = x.sqrt();
    (&s * &s == *x).then_some(s)
}

impl SqrtRational {
    pub fn zero() -> Self {
        SqrtRational { sign: 0, radicand: BigRational::zero() }
    }

    pub fn one() -> Self {
        SqrtRational { sign: 1, radicand: BigRational::one() }
    }

    pub fn new(sign: i8, radicand: BigRational) -> Result<Self, SqrtError> {
        if radicand.is_negative() {
            return Err(SqrtError::NegativeRadicand(radicand.to_string()));
        }
        match sign {
            0 if radicand.is_zero() => Ok(Self::zero()),
            0 => Err(SqrtError::BadSign(0)),
            1 | -1 if radicand.is_zero() => Ok(Self::zero()),
            1 | -1 => Ok(SqrtRational { sign, radicand }),
            s => Err(SqrtError::BadSign(i64::from(s))),
        }
    }

    /// The rational `r` written as `sign(r) sqrt(r^2)`.
    pub fn from_rational(r: &BigRational) -> Self {
        let sign = sign_of(r);
        SqrtRational { sign, radicand: r * r }
    }

    /// `r * sqrt(q)` for rational `r` and non-negative `q`.
    pub fn scaled_root(r: &BigRational, q: &BigRational) -> Self {
        assert!(!q.is_negative(), "negative radicand");
        let rad = r * r * q;
        if rad.is_zero() {
            return Self::zero();
        }
        SqrtRational { sign: sign_of(r), radicand: rad }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// `sign * radicand`, i.e. the square with the sign kept.
    pub fn signed_square(&self) -> BigRational {
        match self.sign {
            0 => BigRational::zero(),
            1 => self.radicand.clone(),
            _ => -self.radicand.clone(),
        }
    }

    /// The value as a rational when the radicand is a perfect square.
    pub fn as_rational(&self) -> Option<BigRational> {
        let r = rational_sqrt(&self.radicand)?;
        Some(if self.sign < 0 { -r } else { r })
    }

    /// Sum of two values whose radicands differ by a rational square factor.
    pub fn checked_add(&self, other: &Self) -> Result<Self, SqrtError> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let ratio = &other.radicand / &self.radicand;
        let s = rational_sqrt(&ratio).ok_or_else(|| {
            SqrtError::Incompatible(self.radicand.to_string(), other.radicand.to_string())
        })?;
        // self + other = (sign_a + sign_b * s) * sqrt(q_a)
        let a = BigRational::from_integer(BigInt::from(self.sign));
        let b = BigRational::from_integer(BigInt::from(other.sign));
        let factor = a + b * s;
        Ok(Self::scaled_root(&factor, &self.radicand))
    }

    pub fn to_f64(&self) -> f64 {
        let q = self.radicand.to_f64().unwrap_or(f64::NAN);
        f64::from(self.sign) * q.sqrt()
    }

    /// Radicand rendered as `num/den`.
    pub fn radicand_string(&self) -> String {
        format!("{}/{}", self.radicand.numer(), self.radicand.denom())
    }

    pub fn parse_radicand(s: &str) -> Result<BigRational, SqrtError> {
        let bad = || SqrtError::Malformed(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    }
}

fn sign_of(r: &BigRational) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl Mul for &SqrtRational {
    type Output = SqrtRational;
    fn mul(self, rhs: &SqrtRational) -> SqrtRational {
        if self.is_zero() || rhs.is_zero() {
            return SqrtRational::zero();
        }
        SqrtRational { sign: self.sign * rhs.sign, radicand: &self.radicand * &rhs.radicand }
    }
}

impl Mul for SqrtRational {
    type Output = SqrtRational;
    fn mul(self, rhs: SqrtRational) -> SqrtRational {
        &self * &rhs
    }
}

impl Neg for SqrtRational {
    type Output = SqrtRational;
    fn neg(self) -> SqrtRational {
        SqrtRational { sign: -self.sign, radicand: self.radicand }
    }
}

impl fmt::Display for SqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let s = if self.sign < 0 { "-" } else { "" };
        match self.as_rational() {
            Some(r) => write!(f, "{s}{}", r.abs()),
            None => write!(f, "{s}sqrt({})", self.radicand),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    sign: i8,
    radicand: String,
}

impl Serialize for SqrtRational {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        Wire { sign: self.sign, radicand: self.radicand_string() }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SqrtRational {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let w = Wire::deserialize(de)?;
        let q = SqrtRational::parse_radicand(&w.radicand).map_err(serde::de::Error::custom)?;
        SqrtRational::new(w.sign, q).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn compatible_sum() {
        let a = SqrtRational::new(1, q(3, 1)).unwrap();
        let b = SqrtRational::new(1, q(12, 1)).unwrap();
        let c = a.checked_add(&b).unwrap();
        assert_eq!(c, SqrtRational::new(1, q(27, 1)).unwrap());
        let d = SqrtRational::new(-1, q(27, 1)).unwrap();
        assert!(c.checked_add(&d).unwrap().is_zero());
    }

    #[test]
    fn incompatible_sum_is_an_error() {
        let a = SqrtRational::new(1, q(2, 1)).unwrap();
        let b = SqrtRational::new(1, q(3, 1)).unwrap();
        assert!(matches!(a.checked_add(&b), Err(SqrtError::Incompatible(..))));
    }

    #[test]
    fn zero_normalization() {
        assert!(SqrtRational::new(1, q(0, 1)).unwrap().is_zero());
        assert!(SqrtRational::new(0, q(1, 1)).is_err());
        assert!(SqrtRational::new(2, q(1, 1)).is_err());
    }

    #[test]
    fn wire_format() {
        let a = SqrtRational::new(-1, q(6, 4)).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"sign":-1,"radicand":"3/2"}"#);
        let b: SqrtRational = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        assert_eq!(format!("{}", SqrtRational::from_rational(&q(-3, 2))), "-3/2");
    }
}
