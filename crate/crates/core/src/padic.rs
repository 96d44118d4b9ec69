//! Truncated elements of Q_p with exact arithmetic and explicit precision
//! semantics.
//!
//! A nonzero element is stored in relative-precision form `p^val * unit +
//! O(p^(val+prec))` with `unit` reduced mod `p^prec` and coprime to p, the
//! standard representation in p-adic computer algebra. Cancellation
//! renormalizes (divides out p) and shrinks the recorded relative
//! precision; a result whose retained digits all cancel becomes "zero to
//! precision", a state kept distinct from exact zero so that division can
//! tell an exact zero divisor from an insufficiently precise one.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::ExactRational;
use crate::valuation::{bigint_val, validate_prime, ExtInt, NormValue};

/// Default number of p-adic digits carried by CLI commands and tests.
pub const DEFAULT_PRECISION: u32 = 16;

const MAX_DIGITS: u32 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    /// `order: None` is exact zero; `Some(m)` means "≡ 0 mod p^m, nothing
    /// known below".
    Zero { order: Option<i64> },
    Unit { val: i64, prec: u32, unit: BigUint },
}

/// A truncated p-adic number: `p^val * unit + O(p^(val+prec))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicNumber {
    p: u64,
    repr: Repr,
}

/// Base-p digits of a nonzero element, starting at its valuation. The
/// first digit is nonzero and the value is `Σ digits[i] · p^(val+i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitExpansion {
    pub val: i64,
    pub digits: Vec<u64>,
}

impl fmt::Display for DigitExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
        write!(f, "v={} [{}]", self.val, digits.join(","))
    }
}

fn pow_p(p: u64, exp: u32) -> BigUint {
    BigUint::from(p).pow(exp)
}

fn mod_inverse(x: &BigInt, modulus: &BigInt) -> Option<BigInt> {
    let g = x.extended_gcd(modulus);
    if g.gcd.is_one() {
        Some(g.x.mod_floor(modulus))
    } else {
        None
    }
}

impl PAdicNumber {
    /// Embed a rational into Q_p at `prec` digits of relative precision.
    /// The embedding is exact in norm: `result.norm()` equals `abs_p(q, p)`.
    pub fn from_rational(q: &ExactRational, p: u64, prec: u32) -> Result<Self> {
        validate_prime(p)?;
        if prec == 0 || prec > MAX_DIGITS {
            return Err(Error::InvalidInput(format!(
                "relative precision must be in 1..={MAX_DIGITS}, got {prec}"
            )));
        }
        if q.is_zero() {
            return Ok(Self { p, repr: Repr::Zero { order: None } });
        }
        let vn = bigint_val(q.numer(), p).expect("nonzero numerator");
        let vd = bigint_val(q.denom(), p).expect("nonzero denominator");
        let p_big = BigInt::from(p);
        let a = q.numer() / p_big.pow(vn as u32);
        let b = q.denom() / p_big.pow(vd as u32);
        let modulus = BigInt::from(pow_p(p, prec));
        let inv_b = mod_inverse(&b, &modulus).expect("denominator unit is invertible");
        let unit = (a * inv_b).mod_floor(&modulus);
        let unit = unit.to_biguint().expect("mod_floor is non-negative");
        Ok(Self { p, repr: Repr::Unit { val: vn - vd, prec, unit } })
    }

    pub fn exact_zero(p: u64) -> Result<Self> {
        validate_prime(p)?;
        Ok(Self { p, repr: Repr::Zero { order: None } })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Zero to working precision (covers exact zero).
    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { order: None })
    }

    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { val, .. } => Some(*val),
        }
    }

    /// Relative precision in digits; `None` for zero.
    pub fn rel_precision(&self) -> Option<u32> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { prec, .. } => Some(*prec),
        }
    }

    /// The exponent a such that the value is known modulo p^a.
    pub fn abs_precision(&self) -> ExtInt {
        match &self.repr {
            Repr::Zero { order: None } => ExtInt::Infinity,
            Repr::Zero { order: Some(m) } => ExtInt::Finite(*m),
            Repr::Unit { val, prec, .. } => ExtInt::Finite(val + *prec as i64),
        }
    }

    pub fn unit(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { unit, .. } => Some(unit),
        }
    }

    fn check_same_prime(&self, rhs: &Self) -> Result<()> {
        if self.p != rhs.p {
            return Err(Error::MismatchedPrime { left: self.p, right: rhs.p });
        }
        Ok(())
    }

    fn zero_to(p: u64, order: i64) -> Self {
        Self { p, repr: Repr::Zero { order: Some(order) } }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_prime(rhs)?;
        let p = self.p;
        let out = match (&self.repr, &rhs.repr) {
            (Repr::Zero { order: a }, Repr::Zero { order: b }) => {
                let order = match (a, b) {
                    (None, None) => None,
                    (None, Some(m)) | (Some(m), None) => Some(*m),
                    (Some(m1), Some(m2)) => Some(*m1.min(m2)),
                };
                Self { p, repr: Repr::Zero { order } }
            }
            (Repr::Zero { order: None }, Repr::Unit { .. }) => rhs.clone(),
            (Repr::Unit { .. }, Repr::Zero { order: None }) => self.clone(),
            (Repr::Zero { order: Some(m) }, Repr::Unit { val, prec, unit })
            | (Repr::Unit { val, prec, unit }, Repr::Zero { order: Some(m) }) => {
                // the unknown O(p^m) caps the result's absolute precision
                let cap = (*m).min(val + *prec as i64);
                if cap <= *val {
                    Self::zero_to(p, cap)
                } else {
                    let digits = (cap - val) as u32;
                    let unit = unit.mod_floor(&pow_p(p, digits));
                    Self { p, repr: Repr::Unit { val: *val, prec: digits, unit } }
                }
            }
            (
                Repr::Unit { val: vx, prec: px, unit: ux },
                Repr::Unit { val: vy, prec: py, unit: uy },
            ) => {
                let cap = (vx + *px as i64).min(vy + *py as i64);
                let base = *vx.min(vy);
                let window = (cap - base) as u32;
                let modulus = pow_p(p, window);
                let lift = |v: i64, u: &BigUint| -> BigUint {
                    let shift = (v - base) as u32;
                    if shift >= window {
                        BigUint::zero()
                    } else {
                        (u * pow_p(p, shift)).mod_floor(&modulus)
                    }
                };
                let sum = (lift(*vx, ux) + lift(*vy, uy)).mod_floor(&modulus);
                if sum.is_zero() {
                    Self::zero_to(p, cap)
                } else {
                    let v = bigint_val(&BigInt::from(sum.clone()), p).expect("nonzero") as u32;
                    let digits = window - v;
                    let unit = sum / pow_p(p, v);
                    Self { p, repr: Repr::Unit { val: base + v as i64, prec: digits, unit } }
                }
            }
        };
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Unit { val, prec, unit } => {
                let unit = pow_p(self.p, *prec) - unit;
                Self { p: self.p, repr: Repr::Unit { val: *val, prec: *prec, unit } }
            }
        }
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_prime(rhs)?;
        let p = self.p;
        let out = match (&self.repr, &rhs.repr) {
            (Repr::Zero { order: None }, _) | (_, Repr::Zero { order: None }) => {
                Self { p, repr: Repr::Zero { order: None } }
            }
            (Repr::Zero { order: Some(m1) }, Repr::Zero { order: Some(m2) }) => {
                Self::zero_to(p, m1 + m2)
            }
            (Repr::Zero { order: Some(m) }, Repr::Unit { val, .. })
            | (Repr::Unit { val, .. }, Repr::Zero { order: Some(m) }) => Self::zero_to(p, m + val),
            (
                Repr::Unit { val: vx, prec: px, unit: ux },
                Repr::Unit { val: vy, prec: py, unit: uy },
            ) => {
                let prec = *px.min(py);
                let unit = (ux * uy).mod_floor(&pow_p(p, prec));
                Self { p, repr: Repr::Unit { val: vx + vy, prec, unit } }
            }
        };
        Ok(out)
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        self.check_same_prime(rhs)?;
        let p = self.p;
        let (vy, py, uy) = match &rhs.repr {
            Repr::Zero { order: None } => return Err(Error::DivisionByZero),
            Repr::Zero { order: Some(_) } => {
                return Err(Error::InsufficientPrecision(
                    "divisor is zero to working precision (not provably nonzero)".into(),
                ))
            }
            Repr::Unit { val, prec, unit } => (*val, *prec, unit),
        };
        let out = match &self.repr {
            Repr::Zero { order: None } => Self { p, repr: Repr::Zero { order: None } },
            Repr::Zero { order: Some(m) } => Self::zero_to(p, m - vy),
            Repr::Unit { val: vx, prec: px, unit: ux } => {
                let prec = (*px).min(py);
                let modulus = BigInt::from(pow_p(p, prec));
                let inv = mod_inverse(&BigInt::from(uy.clone()), &modulus)
                    .expect("unit is coprime to p");
                let unit = (BigInt::from(ux.clone()) * inv).mod_floor(&modulus);
                let unit = unit.to_biguint().expect("non-negative");
                Self { p, repr: Repr::Unit { val: vx - vy, prec, unit } }
            }
        };
        Ok(out)
    }

    /// |x|_p = p^(-val); zero-to-precision reports norm 0.
    pub fn norm(&self) -> NormValue {
        match &self.repr {
            Repr::Zero { .. } => NormValue::Zero,
            Repr::Unit { val, .. } => NormValue::padic(self.p, -val),
        }
    }

    /// Base-p digits of the unit, shifted by the valuation. Errors on zero.
    pub fn digit_expansion(&self) -> Result<DigitExpansion> {
        match &self.repr {
            Repr::Zero { .. } => {
                Err(Error::InvalidInput("digit expansion of zero is undefined".into()))
            }
            Repr::Unit { val, prec, unit } => {
                let p = BigUint::from(self.p);
                let mut digits = Vec::with_capacity(*prec as usize);
                let mut rest = unit.clone();
                for _ in 0..*prec {
                    let (q, r) = rest.div_rem(&p);
                    digits.push(r.to_u64().expect("digit < p"));
                    rest = q;
                }
                Ok(DigitExpansion { val: *val, digits })
            }
        }
    }

    /// True iff |self − other| ≤ p^(−m) is provable at the available
    /// precision.
    pub fn equal_to_precision(&self, other: &Self, m: i64) -> Result<bool> {
        let diff = self.sub(other)?;
        Ok(match diff.repr {
            Repr::Zero { order: None } => true,
            Repr::Zero { order: Some(k) } => k >= m,
            Repr::Unit { val, .. } => val >= m,
        })
    }

    /// Long textual rendering, digit by digit.
    pub fn long_form(&self) -> String {
        match &self.repr {
            Repr::Zero { order: None } => format!("p-adic(p={}): 0", self.p),
            Repr::Zero { order: Some(m) } => {
                format!("p-adic(p={}): O({}^{})", self.p, self.p, m)
            }
            Repr::Unit { val, prec, .. } => {
                let expansion = self.digit_expansion().expect("nonzero");
                let mut terms = Vec::with_capacity(expansion.digits.len());
                let mut power = BigUint::one();
                for (i, d) in expansion.digits.iter().enumerate() {
                    if i == 0 {
                        terms.push(format!("{d}"));
                    } else {
                        terms.push(format!("{d}*{power}"));
                    }
                    power *= self.p;
                }
                format!(
                    "p-adic(p={}, N={}): {}^{} * ({}) = digits {}",
                    self.p,
                    prec,
                    self.p,
                    val,
                    terms.join(" + "),
                    expansion
                )
            }
        }
    }
}

impl fmt::Display for PAdicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero { order: None } => write!(f, "0"),
            Repr::Zero { order: Some(m) } => write!(f, "O({}^{})", self.p, m),
            Repr::Unit { val, prec, unit } => {
                write!(f, "{}^{} * {} + O({}^{})", self.p, val, unit, self.p, val + *prec as i64)
            }
        }
    }
}

/// JSON form `{p, prec, zero, val, unit}`. For a nonzero element `prec` is
/// the relative precision in digits; for zero-to-precision it is the order
/// it is known zero to, and null for exact zero.
#[derive(Serialize, Deserialize)]
struct PAdicJson {
    p: u64,
    prec: Option<i64>,
    zero: bool,
    val: Option<i64>,
    unit: Option<String>,
}

impl Serialize for PAdicNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let json = match &self.repr {
            Repr::Zero { order } => {
                PAdicJson { p: self.p, prec: *order, zero: true, val: None, unit: None }
            }
            Repr::Unit { val, prec, unit } => PAdicJson {
                p: self.p,
                prec: Some(*prec as i64),
                zero: false,
                val: Some(*val),
                unit: Some(unit.to_string()),
            },
        };
        json.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PAdicNumber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let json = PAdicJson::deserialize(deserializer)?;
        validate_prime(json.p).map_err(DeError::custom)?;
        if json.zero {
            return Ok(PAdicNumber { p: json.p, repr: Repr::Zero { order: json.prec } });
        }
        let val = json.val.ok_or_else(|| DeError::custom("nonzero element needs val"))?;
        let prec = json
            .prec
            .and_then(|n| u32::try_from(n).ok())
            .filter(|n| (1..=MAX_DIGITS).contains(n))
            .ok_or_else(|| DeError::custom("nonzero element needs prec in 1..=10000"))?;
        let unit: BigUint = json
            .unit
            .ok_or_else(|| DeError::custom("nonzero element needs unit"))?
            .parse()
            .map_err(DeError::custom)?;
        if unit.is_zero() || unit >= pow_p(json.p, prec) || (&unit % json.p).is_zero() {
            return Err(DeError::custom("unit must lie in [1, p^prec) and be coprime to p"));
        }
        Ok(PAdicNumber { p: json.p, repr: Repr::Unit { val, prec, unit } })
    }
}
