//! Exact valuations on the rationals: the p-adic valuation and norm, the
//! trivial valuation, and the non-Archimedean field axioms as checkable
//! predicates. Norm values are (base, exponent) pairs and are never
//! converted to floating point.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::ExactRational;

/// Largest prime accepted by the deterministic trial-division check.
pub const MAX_PRIME: u64 = 1_000_000;

/// Integer extended with +∞, which absorbs addition and compares greater
/// than every integer. Houses valuations, where v(0) = +∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtInt {
    Finite(i64),
    Infinity,
}

impl ExtInt {
    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Finite(n) => Some(n),
            ExtInt::Infinity => None,
        }
    }

}

impl std::ops::Add for ExtInt {
    type Output = ExtInt;

    fn add(self, other: ExtInt) -> ExtInt {
        match (self, other) {
            (ExtInt::Finite(a), ExtInt::Finite(b)) => ExtInt::Finite(a + b),
            _ => ExtInt::Infinity,
        }
    }
}

impl PartialOrd for ExtInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtInt {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtInt::Infinity, ExtInt::Infinity) => Ordering::Equal,
            (ExtInt::Infinity, ExtInt::Finite(_)) => Ordering::Greater,
            (ExtInt::Finite(_), ExtInt::Infinity) => Ordering::Less,
            (ExtInt::Finite(a), ExtInt::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::Finite(n) => write!(f, "{n}"),
            ExtInt::Infinity => write!(f, "+inf"),
        }
    }
}

/// Base of a finite norm value: a prime power scale, or the trivial
/// valuation whose only nonzero value is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Base {
    Prime(u64),
    Trivial,
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Prime(p) => write!(f, "{p}"),
            Base::Trivial => write!(f, "trivial"),
        }
    }
}

/// An exact absolute value: zero, or `base^exp`. Values over distinct
/// primes are never compared or combined; doing so is an error, not a
/// coercion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormValue {
    Zero,
    Finite { base: Base, exp: i64 },
}

impl NormValue {
    pub fn zero() -> Self {
        NormValue::Zero
    }

    pub fn padic(p: u64, exp: i64) -> Self {
        NormValue::Finite { base: Base::Prime(p), exp }
    }

    /// The trivial valuation's 1.
    pub fn trivial_one() -> Self {
        NormValue::Finite { base: Base::Trivial, exp: 0 }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, NormValue::Zero)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, NormValue::Finite { exp: 0, .. })
    }

    pub fn exp(&self) -> Option<i64> {
        match self {
            NormValue::Zero => None,
            NormValue::Finite { exp, .. } => Some(*exp),
        }
    }

    fn join_base(a: Base, b: Base) -> Result<Base> {
        if a == b {
            Ok(a)
        } else {
            Err(Error::MixedBase { left: a.to_string(), right: b.to_string() })
        }
    }

    /// Exact comparison; errors on mixed bases.
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        match (self, other) {
            (NormValue::Zero, NormValue::Zero) => Ok(Ordering::Equal),
            (NormValue::Zero, NormValue::Finite { .. }) => Ok(Ordering::Less),
            (NormValue::Finite { .. }, NormValue::Zero) => Ok(Ordering::Greater),
            (NormValue::Finite { base: ba, exp: ea }, NormValue::Finite { base: bb, exp: eb }) => {
                let base = Self::join_base(*ba, *bb)?;
                match base {
                    // base ≥ 2, so the order is the exponent order
                    Base::Prime(_) => Ok(ea.cmp(eb)),
                    Base::Trivial => Ok(Ordering::Equal),
                }
            }
        }
    }

    pub fn try_max(self, other: Self) -> Result<Self> {
        Ok(match self.try_cmp(&other)? {
            Ordering::Less => other,
            _ => self,
        })
    }

    /// |x||y|: exponents add, zero absorbs.
    pub fn try_mul(self, other: Self) -> Result<Self> {
        match (self, other) {
            (NormValue::Zero, _) | (_, NormValue::Zero) => Ok(NormValue::Zero),
            (NormValue::Finite { base: ba, exp: ea }, NormValue::Finite { base: bb, exp: eb }) => {
                let base = Self::join_base(ba, bb)?;
                Ok(NormValue::Finite { base, exp: ea + eb })
            }
        }
    }

    pub fn recip(self) -> Result<Self> {
        match self {
            NormValue::Zero => Err(Error::DivisionByZero),
            NormValue::Finite { base, exp } => Ok(NormValue::Finite { base, exp: -exp }),
        }
    }

    /// True iff `self` ≤ `other`.
    pub fn le(&self, other: &Self) -> Result<bool> {
        Ok(self.try_cmp(other)? != Ordering::Greater)
    }

    /// Human form: `0`, `1` for any unit value, else `p^e`.
    pub fn human(&self) -> String {
        match self {
            NormValue::Zero => "0".to_string(),
            NormValue::Finite { exp: 0, .. } => "1".to_string(),
            NormValue::Finite { base, exp } => format!("{base}^{exp}"),
        }
    }
}

impl fmt::Display for NormValue {
    /// Canonical form, unambiguous for round-trips: `0`, `1` (trivial),
    /// or `p^e` (always with the exponent, even `3^0`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormValue::Zero => write!(f, "0"),
            NormValue::Finite { base: Base::Trivial, .. } => write!(f, "1"),
            NormValue::Finite { base: Base::Prime(p), exp } => write!(f, "{p}^{exp}"),
        }
    }
}

impl FromStr for NormValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "0" => Ok(NormValue::Zero),
            "1" => Ok(NormValue::trivial_one()),
            _ => {
                let (base, exp) = t.split_once('^').ok_or_else(|| Error::ParseNorm(s.into()))?;
                let p: u64 = base.parse().map_err(|_| Error::ParseNorm(s.into()))?;
                let e: i64 = exp.parse().map_err(|_| Error::ParseNorm(s.into()))?;
                Ok(NormValue::padic(p, e))
            }
        }
    }
}

impl Serialize for NormValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NormValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Deterministic trial-division primality for desk-scale p.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn validate_prime(p: u64) -> Result<()> {
    if p > MAX_PRIME {
        return Err(Error::PrimeTooLarge(p, MAX_PRIME));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// p-adic valuation of a nonzero integer: the exponent of p dividing it.
pub(crate) fn bigint_val(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut m = n.clone();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&m, &p);
        if r.is_zero() {
            v += 1;
            m = q;
        } else {
            return Some(v);
        }
    }
}

/// The unique n with q = (a/b)·p^n and p dividing neither a nor b;
/// +∞ for q = 0.
pub fn padic_val(q: &ExactRational, p: u64) -> Result<ExtInt> {
    validate_prime(p)?;
    if q.is_zero() {
        return Ok(ExtInt::Infinity);
    }
    let vn = bigint_val(q.numer(), p).expect("nonzero numerator");
    let vd = bigint_val(q.denom(), p).expect("nonzero denominator");
    Ok(ExtInt::Finite(vn - vd))
}

/// |q|_p = p^(-v_p(q)), with |0|_p = 0.
pub fn abs_p(q: &ExactRational, p: u64) -> Result<NormValue> {
    match padic_val(q, p)? {
        ExtInt::Infinity => Ok(NormValue::Zero),
        ExtInt::Finite(v) => Ok(NormValue::padic(p, -v)),
    }
}

/// The trivial valuation: everything but 0 goes to 1.
pub fn trivial_abs(q: &ExactRational) -> NormValue {
    if q.is_zero() {
        NormValue::Zero
    } else {
        NormValue::trivial_one()
    }
}

/// A choice of valuation on the rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Valuation {
    PAdic { p: u64 },
    Trivial,
}

impl Valuation {
    pub fn padic(p: u64) -> Result<Self> {
        validate_prime(p)?;
        Ok(Valuation::PAdic { p })
    }

    pub fn trivial() -> Self {
        Valuation::Trivial
    }

    pub fn base(&self) -> Base {
        match self {
            Valuation::PAdic { p } => Base::Prime(*p),
            Valuation::Trivial => Base::Trivial,
        }
    }

    pub fn abs(&self, q: &ExactRational) -> NormValue {
        match self {
            // the prime was validated at construction
            Valuation::PAdic { p } => abs_p(q, *p).expect("validated prime"),
            Valuation::Trivial => trivial_abs(q),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::PAdic { p } => write!(f, "p-adic(p={p})"),
            Valuation::Trivial => write!(f, "trivial"),
        }
    }
}

/// First field-axiom violation found, if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom")]
pub enum FieldAxiomViolation {
    Multiplicative { r: ExactRational, s: ExactRational, lhs: NormValue, rhs: NormValue },
    StrongTriangle { r: ExactRational, s: ExactRational, lhs: NormValue, bound: NormValue },
    ZeroNorm { r: ExactRational, norm: NormValue },
    NaturalBound { n: ExactRational, norm: NormValue },
}

impl fmt::Display for FieldAxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldAxiomViolation::Multiplicative { r, s, lhs, rhs } => {
                write!(f, "|rs| != |r||s| at r={r}, s={s}: {lhs} vs {rhs}")
            }
            FieldAxiomViolation::StrongTriangle { r, s, lhs, bound } => {
                write!(f, "|r+s| > max(|r|,|s|) at r={r}, s={s}: {lhs} > {bound}")
            }
            FieldAxiomViolation::ZeroNorm { r, norm } => {
                write!(f, "|r| = 0 iff r = 0 fails at r={r}: |r| = {norm}")
            }
            FieldAxiomViolation::NaturalBound { n, norm } => {
                write!(f, "|n| <= 1 fails at n={n}: |n| = {norm}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldAxiomReport {
    pub valuation: Valuation,
    pub members_checked: usize,
    pub pairs_checked: usize,
    pub violation: Option<FieldAxiomViolation>,
}

impl FieldAxiomReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

impl fmt::Display for FieldAxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.violation {
            None => write!(
                f,
                "field axioms ({}): PASS ({} members, {} pairs)",
                self.valuation, self.members_checked, self.pairs_checked
            ),
            Some(v) => write!(f, "field axioms ({}): FAIL: {v}", self.valuation),
        }
    }
}

/// Verify |rs| = |r||s|, |r+s| ≤ max(|r|,|s|), |r| = 0 ⇔ r = 0 on every
/// pair from the sample, and |n| ≤ 1 for its natural-number members.
/// Stops at the first violating pair.
pub fn check_field_axioms(valuation: &Valuation, sample: &[ExactRational]) -> FieldAxiomReport {
    let mut pairs = 0usize;
    let mut violation = None;

    'outer: for r in sample {
        let ar = valuation.abs(r);
        if ar.is_zero() != r.is_zero() {
            violation = Some(FieldAxiomViolation::ZeroNorm { r: r.clone(), norm: ar });
            break;
        }
        if r.is_natural() && !ar.le(&NormValue::Finite { base: valuation.base(), exp: 0 }).unwrap()
        {
            violation = Some(FieldAxiomViolation::NaturalBound { n: r.clone(), norm: ar });
            break;
        }
        for s in sample {
            pairs += 1;
            let a_s = valuation.abs(s);
            let product = valuation.abs(&(r * s));
            let expected = ar.try_mul(a_s).expect("same base");
            if product != expected {
                violation = Some(FieldAxiomViolation::Multiplicative {
                    r: r.clone(),
                    s: s.clone(),
                    lhs: product,
                    rhs: expected,
                });
                break 'outer;
            }
            let sum = valuation.abs(&(r + s));
            let bound = ar.try_max(a_s).expect("same base");
            if !sum.le(&bound).expect("same base") {
                violation = Some(FieldAxiomViolation::StrongTriangle {
                    r: r.clone(),
                    s: s.clone(),
                    lhs: sum,
                    bound,
                });
                break 'outer;
            }
        }
    }

    FieldAxiomReport {
        valuation: *valuation,
        members_checked: sample.len(),
        pairs_checked: pairs,
        violation,
    }
}

/// |a−b| together with max(|a|,|b|); the two agree whenever |a| ≠ |b|.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharpTriangle {
    pub difference: NormValue,
    pub maximum: NormValue,
}

impl SharpTriangle {
    pub fn holds(&self) -> bool {
        self.difference == self.maximum
    }
}

/// The sharp form of the strong triangle inequality: for |a| ≠ |b|,
/// |a−b| = max(|a|,|b|). Equal norms are rejected up front since
/// equality is not guaranteed there.
pub fn sharp_triangle(
    a: &ExactRational,
    b: &ExactRational,
    valuation: &Valuation,
) -> Result<SharpTriangle> {
    let na = valuation.abs(a);
    let nb = valuation.abs(b);
    if na == nb {
        return Err(Error::EqualNorms);
    }
    let difference = valuation.abs(&(a - b));
    let maximum = na.try_max(nb)?;
    debug_assert_eq!(difference, maximum);
    Ok(SharpTriangle { difference, maximum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    #[test]
    fn padic_val_examples() {
        assert_eq!(padic_val(&q("12"), 2).unwrap(), ExtInt::Finite(2));
        assert_eq!(padic_val(&q("0"), 5).unwrap(), ExtInt::Infinity);
        assert_eq!(padic_val(&q("3/8"), 2).unwrap(), ExtInt::Finite(-3));
        assert!(matches!(padic_val(&q("1"), 4), Err(Error::NotPrime(4))));
        assert!(matches!(padic_val(&q("1"), 1_000_003), Err(Error::PrimeTooLarge(..))));
    }

    #[test]
    fn abs_p_examples() {
        assert_eq!(abs_p(&q("1"), 7).unwrap(), NormValue::padic(7, 0));
        assert_eq!(abs_p(&q("12"), 2).unwrap(), NormValue::padic(2, -2));
        assert_eq!(abs_p(&q("-1"), 3).unwrap(), NormValue::padic(3, 0));
        assert!(abs_p(&q("-1"), 3).unwrap().is_one());
        assert_eq!(abs_p(&q("0"), 3).unwrap(), NormValue::Zero);
    }

    #[test]
    fn trivial_abs_examples() {
        assert_eq!(trivial_abs(&q("0")), NormValue::Zero);
        assert_eq!(trivial_abs(&q("5")), NormValue::trivial_one());
        assert_eq!(trivial_abs(&q("-7/3")), NormValue::trivial_one());
    }

    #[test]
    fn norm_values_are_exact_and_base_checked() {
        let a = NormValue::padic(2, -2);
        let b = NormValue::padic(2, 1);
        assert_eq!(a.try_max(b).unwrap(), b);
        assert_eq!(a.try_mul(b).unwrap(), NormValue::padic(2, -1));
        assert_eq!(NormValue::Zero.try_mul(b).unwrap(), NormValue::Zero);
        assert!(NormValue::Zero.le(&a).unwrap());
        let c = NormValue::padic(3, 0);
        assert!(matches!(a.try_cmp(&c), Err(Error::MixedBase { .. })));
        assert!(matches!(a.try_mul(c), Err(Error::MixedBase { .. })));
        assert!(matches!(
            NormValue::trivial_one().try_cmp(&c),
            Err(Error::MixedBase { .. })
        ));
    }

    #[test]
    fn norm_value_string_round_trip() {
        for v in [
            NormValue::Zero,
            NormValue::trivial_one(),
            NormValue::padic(3, -2),
            NormValue::padic(2, 0),
            NormValue::padic(5, 4),
        ] {
            let s = v.to_string();
            assert_eq!(s.parse::<NormValue>().unwrap(), v, "via {s}");
        }
        assert_eq!(NormValue::padic(2, -2).human(), "2^-2");
        assert_eq!(NormValue::padic(2, 0).human(), "1");
    }

    #[test]
    fn field_axioms_pass_on_samples() {
        let sample: Vec<_> = ["0", "1", "2", "3", "1/2"].iter().map(|s| q(s)).collect();
        let report = check_field_axioms(&Valuation::padic(2).unwrap(), &sample);
        assert!(report.passed(), "{report}");

        let sample: Vec<_> = ["0", "1", "-1", "7"].iter().map(|s| q(s)).collect();
        let report = check_field_axioms(&Valuation::trivial(), &sample);
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn naturals_have_norm_at_most_one() {
        let sample: Vec<_> = (0..=100).map(ExactRational::from_integer).collect();
        for p in [2u64, 3, 5] {
            let report = check_field_axioms(&Valuation::padic(p).unwrap(), &sample);
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn sharp_triangle_examples() {
        let val2 = Valuation::padic(2).unwrap();
        let r = sharp_triangle(&q("1"), &q("4"), &val2).unwrap();
        assert!(r.holds());
        assert_eq!(r.difference, NormValue::padic(2, 0));

        let r = sharp_triangle(&q("0"), &q("12"), &val2).unwrap();
        assert_eq!(r.difference, NormValue::padic(2, -2));

        let r = sharp_triangle(&q("1/2"), &q("1"), &val2).unwrap();
        assert_eq!(r.difference, NormValue::padic(2, 1));

        assert!(matches!(sharp_triangle(&q("1"), &q("3"), &val2), Err(Error::EqualNorms)));
    }

    #[test]
    fn extint_orders_and_absorbs() {
        assert!(ExtInt::Infinity > ExtInt::Finite(i64::MAX));
        assert_eq!(ExtInt::Infinity + ExtInt::Finite(5), ExtInt::Infinity);
        assert_eq!(ExtInt::Finite(2) + ExtInt::Finite(-7), ExtInt::Finite(-5));
    }

    proptest! {
        /// v(qr) = v(q) + v(r), with +∞ absorbing.
        #[test]
        fn valuation_is_additive(
            an in -300i64..300, ad in 1i64..60,
            bn in -300i64..300, bd in 1i64..60,
        ) {
            let a = ExactRational::ratio(an, ad).unwrap();
            let b = ExactRational::ratio(bn, bd).unwrap();
            for p in [2u64, 3, 5] {
                let va = padic_val(&a, p).unwrap();
                let vb = padic_val(&b, p).unwrap();
                prop_assert_eq!(padic_val(&(&a * &b), p).unwrap(), va + vb);
            }
        }

        /// v(q+r) ≥ min(v(q), v(r)), with equality when the valuations differ.
        #[test]
        fn valuation_of_sums(
            an in -300i64..300, ad in 1i64..60,
            bn in -300i64..300, bd in 1i64..60,
        ) {
            let a = ExactRational::ratio(an, ad).unwrap();
            let b = ExactRational::ratio(bn, bd).unwrap();
            for p in [2u64, 3, 5] {
                let va = padic_val(&a, p).unwrap();
                let vb = padic_val(&b, p).unwrap();
                let vs = padic_val(&(&a + &b), p).unwrap();
                prop_assert!(vs >= va.min(vb));
                if va != vb {
                    prop_assert_eq!(vs, va.min(vb));
                }
            }
        }

        /// The trivial valuation satisfies multiplicativity and the strong
        /// triangle inequality on every pair.
        #[test]
        fn trivial_valuation_axioms(
            an in -50i64..50, ad in 1i64..20,
            bn in -50i64..50, bd in 1i64..20,
        ) {
            let a = ExactRational::ratio(an, ad).unwrap();
            let b = ExactRational::ratio(bn, bd).unwrap();
            let na = trivial_abs(&a);
            let nb = trivial_abs(&b);
            prop_assert_eq!(trivial_abs(&(&a * &b)), na.try_mul(nb).unwrap());
            prop_assert!(trivial_abs(&(&a + &b)).le(&na.try_max(nb).unwrap()).unwrap());
        }
    }
}
