//! Arbitrary-precision rationals, always reduced, with the literal grammar
//! used by the CLI and sample files.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced fraction with arbitrary-precision numerator and positive
/// denominator. Zero is `0/1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self(BigRational::new(num, den)))
    }

    pub fn from_integer(n: i64) -> Self {
        Self(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self(BigRational::from_integer(n))
    }

    pub fn ratio(num: i64, den: i64) -> Result<Self> {
        Self::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// True for 0, 1, 2, ... — the sample members the natural-number
    /// norm bound applies to.
    pub fn is_natural(&self) -> bool {
        self.0.is_integer() && !self.0.is_negative()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self(&self.0 / &rhs.0))
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..exp {
            out = &out * self;
        }
        out
    }

    /// Integer value when the fraction is an integer that fits `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }
}

impl Add for &ExactRational {
    type Output = ExactRational;
    fn add(self, rhs: Self) -> ExactRational {
        ExactRational(&self.0 + &rhs.0)
    }
}

impl Sub for &ExactRational {
    type Output = ExactRational;
    fn sub(self, rhs: Self) -> ExactRational {
        ExactRational(&self.0 - &rhs.0)
    }
}

impl Mul for &ExactRational {
    type Output = ExactRational;
    fn mul(self, rhs: Self) -> ExactRational {
        ExactRational(&self.0 * &rhs.0)
    }
}

impl Neg for &ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-&self.0)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    /// Grammar: optional `-`, digits, optional `/` digits. E.g. `-3/8`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::ParseRational(s.to_string());
        let (sign, body) = match t.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, t),
        };
        if body.is_empty() {
            return Err(bad());
        }
        let (num_str, den_str) = match body.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (body, None),
        };
        let all_digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
        if !all_digits(num_str) {
            return Err(bad());
        }
        let num: BigInt = num_str.parse().map_err(|_| bad())?;
        let den: BigInt = match den_str {
            Some(d) => {
                if !all_digits(d) {
                    return Err(bad());
                }
                d.parse().map_err(|_| bad())?
            }
            None => BigInt::one(),
        };
        Self::new(num * sign, den)
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parse a newline-delimited list of rational literals. Blank lines and
/// lines starting with `#` are skipped; inline whitespace is trimmed.
pub fn parse_sample(text: &str) -> Result<Vec<ExactRational>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(line.parse()?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_the_literal_grammar() {
        let q: ExactRational = "-3/8".parse().unwrap();
        assert_eq!(q, ExactRational::ratio(-3, 8).unwrap());
        assert_eq!("12".parse::<ExactRational>().unwrap(), ExactRational::from_integer(12));
        assert_eq!(" 5/10 ".parse::<ExactRational>().unwrap(), ExactRational::ratio(1, 2).unwrap());
        for bad in ["", "3/", "/4", "1.5", "2/-3", "+4", "a", "1/0x"] {
            assert!(bad.parse::<ExactRational>().is_err(), "accepted {bad:?}");
        }
        assert!(matches!("1/0".parse::<ExactRational>(), Err(Error::ZeroDenominator)));
    }

    #[test]
    fn stays_reduced_with_positive_denominator() {
        let q = ExactRational::new(BigInt::from(6), BigInt::from(-8)).unwrap();
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(4));
        assert_eq!(ExactRational::zero().denom(), &BigInt::from(1));
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = ExactRational::ratio(1, 3).unwrap();
        let b = ExactRational::ratio(1, 6).unwrap();
        assert_eq!(&a + &b, ExactRational::ratio(1, 2).unwrap());
        assert_eq!(&a - &b, b);
        assert_eq!(&a * &b, ExactRational::ratio(1, 18).unwrap());
        assert_eq!(a.checked_div(&b).unwrap(), ExactRational::from_integer(2));
        assert!(a.checked_div(&ExactRational::zero()).is_err());
    }

    #[test]
    fn sample_files_skip_comments_and_blanks() {
        let sample = parse_sample("# header\n1/2\n\n  -3/8\n7\n").unwrap();
        assert_eq!(sample.len(), 3);
        assert!(parse_sample("1/2\noops\n").is_err());
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(n in -10_000i64..10_000, d in 1i64..500) {
            let q = ExactRational::ratio(n, d).unwrap();
            let back: ExactRational = q.to_string().parse().unwrap();
            prop_assert_eq!(q, back);
        }
    }
}
