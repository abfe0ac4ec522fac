//! Real numbers in one of two arithmetic modes: exact rationals or `f64`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Float,
    Rational,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Float => f.write_str("float"),
            Mode::Rational => f.write_str("rational"),
        }
    }
}

/// A real value tagged with its arithmetic mode.
///
/// Rationals are kept in lowest terms with a positive denominator (this is
/// what `BigRational` maintains). Binary operations between different modes
/// are rejected with [`Error::ModeMismatch`].
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Rational,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn zero(mode: Mode) -> Self {
        Self::from_int(mode, 0)
    }

    pub fn one(mode: Mode) -> Self {
        Self::from_int(mode, 1)
    }

    pub fn from_int(mode: Mode, n: i64) -> Self {
        match mode {
            Mode::Rational => Scalar::Exact(BigRational::from_integer(n.into())),
            Mode::Float => Scalar::Float(n as f64),
        }
    }

    pub fn from_ratio(mode: Mode, num: i64, den: i64) -> Self {
        match mode {
            Mode::Rational => Scalar::Exact(BigRational::new(num.into(), den.into())),
            Mode::Float => Scalar::Float(num as f64 / den as f64),
        }
    }

    /// Converts an `f64` into the requested mode; the rational conversion is
    /// the exact binary value.
    pub fn from_f64(mode: Mode, x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::invalid(format!("non-finite value {x}")));
        }
        Ok(match mode {
            Mode::Float => Scalar::Float(x),
            Mode::Rational => Scalar::Exact(BigRational::from_float(x).expect("finite")),
        })
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => rational_to_f64(q),
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Float(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_positive(),
            Scalar::Float(x) => *x > 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Scalar::Exact(_) => true,
            Scalar::Float(x) => x.is_finite(),
        }
    }

    pub fn abs(&self) -> Self {
        match self {
            Scalar::Exact(q) => Scalar::Exact(q.abs()),
            Scalar::Float(x) => Scalar::Float(x.abs()),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Scalar::Exact(q) => Scalar::Exact(-q),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }

    pub fn powi(&self, e: i32) -> Self {
        match self {
            Scalar::Exact(q) => Scalar::Exact(num_traits::pow::Pow::pow(q, e)),
            Scalar::Float(x) => Scalar::Float(x.powi(e)),
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Result<Scalar> {
        self.binary(rhs, |a, b| a + b, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Scalar) -> Result<Scalar> {
        self.binary(rhs, |a, b| a - b, |a, b| a - b)
    }

    pub fn mul(&self, rhs: &Scalar) -> Result<Scalar> {
        self.binary(rhs, |a, b| a * b, |a, b| a * b)
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar> {
        if rhs.is_zero() {
            return Err(Error::invalid("division by zero"));
        }
        self.binary(rhs, |a, b| a / b, |a, b| a / b)
    }

    fn binary(
        &self,
        rhs: &Scalar,
        exact: impl FnOnce(&BigRational, &BigRational) -> BigRational,
        float: impl FnOnce(f64, f64) -> f64,
    ) -> Result<Scalar> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(exact(a, b))),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(float(*a, *b))),
            _ => Err(Error::ModeMismatch {
                left: self.mode(),
                right: rhs.mode(),
            }),
        }
    }

    /// Parses a value in the given mode. Rational mode accepts `p/q`, integers
    /// and decimals (with optional exponent), all converted exactly.
    pub fn parse(mode: Mode, s: &str) -> Result<Self> {
        match mode {
            Mode::Rational => parse_rational(s).map(Scalar::Exact),
            Mode::Float => {
                if s.contains('/') {
                    let q = parse_rational(s)?;
                    Ok(Scalar::Float(rational_to_f64(&q)))
                } else {
                    let x = f64::from_str(s.trim())
                        .map_err(|_| Error::invalid(format!("not a number: '{s}'")))?;
                    Scalar::from_f64(Mode::Float, x)
                }
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{q}"),
            Scalar::Float(x) => f.write_str(&format_f64(*x)),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(q) => s.serialize_str(&q.to_string()),
            Scalar::Float(x) => s.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Scalar::Float(x)),
            Raw::Str(s) => parse_rational(&s)
                .map(Scalar::Exact)
                .map_err(serde::de::Error::custom),
        }
    }
}

/// Shortest decimal string that parses back to the same `f64`.
pub fn format_f64(x: f64) -> String {
    format!("{x:?}")
}

/// Nearest `f64` to a rational, robust to numerators and denominators that
/// overflow `f64` on their own.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let Some(x) = q.to_f64() {
        if x.is_finite() && (x != 0.0 || q.is_zero()) {
            return x;
        }
    }
    let n = q.numer();
    let d = q.denom();
    let shift = n.bits() as i64 - d.bits() as i64;
    // scale to roughly unit magnitude before dividing
    let (n2, d2): (BigInt, BigInt) = if shift > 0 {
        (n.clone(), d << (shift as usize))
    } else {
        (n << ((-shift) as usize), d.clone())
    };
    let mant = BigRational::new(n2 << 64usize, d2).to_integer();
    mant.to_f64().unwrap_or(f64::NAN) * 2f64.powi((shift - 64) as i32)
}

/// Parses `p/q`, an integer, or a decimal with optional exponent into an
/// exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not a rational number: '{s}'"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(BigInt::from_str(&all).map_err(|_| bad())?);
    let scale = exp - frac_part.len() as i32;
    let ten = BigRational::from_integer(10.into());
    if scale >= 0 {
        value *= num_traits::pow::Pow::pow(&ten, scale as u32);
    } else {
        value /= num_traits::pow::Pow::pow(&ten, (-scale) as u32);
    }
    Ok(if neg { -value } else { value })
}

#[cfg(test)]
pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_stay_in_lowest_terms() {
        let a = Scalar::from_ratio(Mode::Rational, 6, -4);
        let q = a.as_rational().unwrap();
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
    }

    #[test]
    fn mixed_mode_is_rejected() {
        let a = Scalar::one(Mode::Rational);
        let b = Scalar::one(Mode::Float);
        assert!(matches!(a.add(&b), Err(Error::ModeMismatch { .. })));
        assert!(a.mul(&a).is_ok());
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("0.3").unwrap(), rat(3, 10));
        assert_eq!(parse_rational("-1.25e2").unwrap(), rat(-125, 1));
        assert_eq!(parse_rational("1e-3").unwrap(), rat(1, 1000));
        assert_eq!(parse_rational("7/21").unwrap(), rat(1, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn huge_rationals_convert_to_f64() {
        let big = BigInt::from(3) * num_traits::pow::Pow::pow(&BigInt::from(10), 400u32);
        let q = BigRational::new(big.clone(), big * BigInt::from(7));
        assert!((rational_to_f64(&q) - 1.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn serde_round_trip() {
        for s in [
            Scalar::from_ratio(Mode::Rational, -5, 12),
            Scalar::Float(0.1),
            Scalar::Float(2.0),
        ] {
            let js = serde_json::to_string(&s).unwrap();
            let back: Scalar = serde_json::from_str(&js).unwrap();
            assert_eq!(back, s);
        }
        assert_eq!(
            serde_json::to_string(&Scalar::from_ratio(Mode::Rational, 1, 3)).unwrap(),
            "\"1/3\""
        );
    }
}
