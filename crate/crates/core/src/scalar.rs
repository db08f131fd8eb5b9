//! Coefficient field: exact rationals or `f64`.
//!
//! Engines are generic over [`Coeff`], so a single computation can never mix
//! the two modes. [`Scalar`] is the runtime-tagged value used at the I/O
//! boundary, where mixing is checked and reported as [`Error::ModeMismatch`].

use std::fmt;
use std::fmt::Debug;
use std::ops::Neg;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arithmetic mode of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Precision {
    Rational,
    Float,
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Rational => f.write_str("rational"),
            Precision::Float => f.write_str("float"),
        }
    }
}

impl FromStr for Precision {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(Precision::Rational),
            "float" => Ok(Precision::Float),
            other => Err(Error::Parse(format!("unknown precision `{other}`"))),
        }
    }
}

/// A field the engines can run over.
pub trait Coeff:
    Clone + Debug + PartialEq + Num + Neg<Output = Self> + Send + Sync + 'static
{
    const MODE: Precision;

    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &BigRational) -> Self;
    fn to_f64(&self) -> f64;
    fn to_scalar(&self) -> Scalar;

    /// Equality used by checks: exact for rationals, `tol`-relative for floats.
    fn close_to(&self, other: &Self, tol: f64) -> bool;
}

impl Coeff for BigRational {
    const MODE: Precision = Precision::Rational;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Rational(self.clone())
    }
    fn close_to(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

impl Coeff for f64 {
    const MODE: Precision = Precision::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Float(*self)
    }
    fn close_to(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol * 1f64.max(self.abs()).max(other.abs())
    }
}

/// Builds a rational `p/q`.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Runtime-tagged scalar.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Rational(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn mode(&self) -> Precision {
        match self {
            Scalar::Rational(_) => Precision::Rational,
            Scalar::Float(_) => Precision::Float,
        }
    }

    pub fn zero(mode: Precision) -> Scalar {
        match mode {
            Precision::Rational => Scalar::Rational(BigRational::zero()),
            Precision::Float => Scalar::Float(0.0),
        }
    }

    pub fn one(mode: Precision) -> Scalar {
        match mode {
            Precision::Rational => Scalar::Rational(BigRational::one()),
            Precision::Float => Scalar::Float(1.0),
        }
    }

    /// Parses `"p/q"`, `"p"` or a decimal literal in the given mode.
    ///
    /// Decimal literals are accepted in rational mode and converted exactly.
    pub fn parse(s: &str, mode: Precision) -> Result<Scalar> {
        let s = s.trim();
        let exact = parse_exact(s);
        match mode {
            Precision::Rational => exact
                .map(Scalar::Rational)
                .ok_or_else(|| Error::Parse(s.to_string())),
            Precision::Float => {
                if let Some(r) = exact {
                    return Ok(Scalar::Float(<f64 as Coeff>::from_rational(&r)));
                }
                s.parse::<f64>()
                    .map(Scalar::Float)
                    .map_err(|_| Error::Parse(s.to_string()))
            }
        }
    }

    /// Converts an `f64` in the given mode; rational mode takes the exact
    /// binary value.
    pub fn from_f64(v: f64, mode: Precision) -> Result<Scalar> {
        match mode {
            Precision::Float => Ok(Scalar::Float(v)),
            Precision::Rational => BigRational::from_float(v)
                .map(Scalar::Rational)
                .ok_or_else(|| Error::Parse(v.to_string())),
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a + b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a + b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a * b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a * b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Rational(_), Scalar::Rational(b)) if b.is_zero() => {
                Err(Error::InvalidParameter("division by zero".into()))
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a / b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a / b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Float(a) => Scalar::Float(-a),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(a) => a.is_zero(),
            Scalar::Float(a) => *a == 0.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Rational(a) => a.is_positive(),
            Scalar::Float(a) => *a > 0.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(a) => Coeff::to_f64(a),
            Scalar::Float(a) => *a,
        }
    }

    /// Extracts the value as `T`, failing if the mode differs.
    pub fn get<T: Coeff>(&self) -> Result<T> {
        if self.mode() != T::MODE {
            return Err(Error::ModeMismatch);
        }
        Ok(match self {
            Scalar::Rational(a) => T::from_rational(a),
            Scalar::Float(a) => {
                let r = BigRational::from_float(*a).ok_or(Error::ModeMismatch)?;
                T::from_rational(&r)
            }
        })
    }
}

/// Rationals print in lowest terms as `p/q`, with `/1` omitted; floats use
/// the shortest representation that round-trips.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(a) => write!(f, "{a}"),
            Scalar::Float(a) => write!(f, "{a}"),
        }
    }
}

fn parse_exact(s: &str) -> Option<BigRational> {
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).ok()?;
        let q = BigInt::from_str(q.trim()).ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Ok(p) = BigInt::from_str(s) {
        return Some(BigRational::from_integer(p));
    }
    // plain decimal such as -0.25
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.')?;
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num = BigInt::from_str_radix(&digits, 10).ok()?;
    let den = num::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(num, den);
    Some(if neg { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        let half = Scalar::parse("1/2", Precision::Rational).unwrap();
        assert_eq!(half, Scalar::Rational(ratio(1, 2)));
        assert_eq!(
            Scalar::parse("-0.25", Precision::Rational).unwrap(),
            Scalar::Rational(ratio(-1, 4))
        );
        assert_eq!(
            Scalar::parse("6/4", Precision::Rational)
                .unwrap()
                .to_string(),
            "3/2"
        );
        assert_eq!(
            Scalar::parse("1/2", Precision::Float).unwrap(),
            Scalar::Float(0.5)
        );
        assert!(Scalar::parse("1/0", Precision::Rational).is_err());
        assert!(Scalar::parse("1e-3", Precision::Rational).is_err());
        assert_eq!(
            Scalar::parse("1e-3", Precision::Float).unwrap(),
            Scalar::Float(1e-3)
        );
    }

    #[test]
    fn mixing_modes_is_an_error() {
        let a = Scalar::one(Precision::Rational);
        let b = Scalar::one(Precision::Float);
        assert_eq!(a.checked_add(&b), Err(Error::ModeMismatch));
        assert_eq!(a.checked_mul(&b), Err(Error::ModeMismatch));
        assert_eq!(a.get::<f64>(), Err(Error::ModeMismatch));
        assert_eq!(a.checked_add(&a).unwrap().to_string(), "2");
    }

    #[test]
    fn rational_rendering_is_canonical() {
        assert_eq!(Scalar::Rational(ratio(4, -6)).to_string(), "-2/3");
        assert_eq!(Scalar::Rational(ratio(0, 5)).to_string(), "0");
    }
}
