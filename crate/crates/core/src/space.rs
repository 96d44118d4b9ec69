//! Non-Archimedean normed spaces: Q_p coordinate vectors under the max
//! norm, the trivially valued rational line, and the finite residue model
//! Z/p^N with truncated p-adic distance. The finite model is the
//! exhaustively searchable stand-in for the unit ball of Q_p: every check
//! that is Π₁ over an infinite space becomes a finite scan there.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::PAdicNumber;
use crate::rational::ExactRational;
use crate::valuation::{abs_p, trivial_abs, validate_prime, Base, NormValue};

/// Exhaustive scans are limited to this many points.
pub const EXHAUSTIVE_LIMIT: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceDescriptor {
    /// Vectors over Q_p (truncated to `prec` digits) under the max norm.
    QpVector { p: u64, prec: u32, dim: usize },
    /// The rationals with the trivial valuation.
    TrivialLine,
    /// The ring Z/p^n with distance p^(-min(v(x-y), n)).
    FiniteModel { p: u64, n: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpacePoint {
    Qp(Vec<PAdicNumber>),
    Trivial(ExactRational),
    Residue(u64),
}

/// A scalar from a space's field: a rational for Q_p vectors and the
/// trivial line, a residue for the finite model (which also accepts
/// rationals whose denominator is a unit).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scalar {
    Rational(ExactRational),
    Residue(u64),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Residue(r) => write!(f, "{r}"),
        }
    }
}

impl fmt::Display for SpacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpacePoint::Qp(coords) => {
                if coords.len() == 1 {
                    write!(f, "{}", coords[0])
                } else {
                    let parts: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
                    write!(f, "({})", parts.join(", "))
                }
            }
            SpacePoint::Trivial(q) => write!(f, "{q}"),
            SpacePoint::Residue(r) => write!(f, "{r}"),
        }
    }
}

fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn mod_add(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

fn mod_neg(a: u64, m: u64) -> u64 {
    if a == 0 {
        0
    } else {
        m - a
    }
}

pub(crate) fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Exponent of p in a residue, capped at n (residue 0 maps to n).
pub(crate) fn residue_val(p: u64, n: u32, r: u64) -> u32 {
    if r == 0 {
        return n;
    }
    let mut v = 0;
    let mut m = r;
    while m.is_multiple_of(p) {
        v += 1;
        m /= p;
    }
    v
}

impl SpaceDescriptor {
    pub fn qp_vector(p: u64, prec: u32, dim: usize) -> Result<Self> {
        validate_prime(p)?;
        if prec == 0 {
            return Err(Error::InvalidInput("precision must be positive".into()));
        }
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        Ok(SpaceDescriptor::QpVector { p, prec, dim })
    }

    pub fn finite_model(p: u64, n: u32) -> Result<Self> {
        validate_prime(p)?;
        if n == 0 {
            return Err(Error::InvalidInput("model level must be positive".into()));
        }
        let mut modulus: u64 = 1;
        for _ in 0..n {
            modulus = modulus
                .checked_mul(p)
                .ok_or_else(|| Error::InvalidInput(format!("p^N overflows: {p}^{n}")))?;
        }
        Ok(SpaceDescriptor::FiniteModel { p, n })
    }

    /// Modulus p^n of the finite model.
    pub fn modulus(&self) -> Option<u64> {
        match self {
            SpaceDescriptor::FiniteModel { p, n } => Some(
                (0..*n)
                    .try_fold(1u64, |acc, _| acc.checked_mul(*p))
                    .expect("descriptor built without validation: p^N overflows u64"),
            ),
            _ => None,
        }
    }

    pub fn field_base(&self) -> Base {
        match self {
            SpaceDescriptor::QpVector { p, .. } | SpaceDescriptor::FiniteModel { p, .. } => {
                Base::Prime(*p)
            }
            SpaceDescriptor::TrivialLine => Base::Trivial,
        }
    }

    /// Whether |2| = 1 holds in the scalar field.
    pub fn two_is_unit(&self) -> bool {
        match self {
            SpaceDescriptor::QpVector { p, .. } | SpaceDescriptor::FiniteModel { p, .. } => *p != 2,
            SpaceDescriptor::TrivialLine => true,
        }
    }

    pub fn require_two_unit(&self) -> Result<()> {
        if self.two_is_unit() {
            Ok(())
        } else {
            Err(Error::TwoNotUnit { p: 2 })
        }
    }

    pub fn zero_point(&self) -> SpacePoint {
        match self {
            SpaceDescriptor::QpVector { p, dim, .. } => SpacePoint::Qp(vec![
                PAdicNumber::exact_zero(*p).expect("validated prime");
                *dim
            ]),
            SpaceDescriptor::TrivialLine => SpacePoint::Trivial(ExactRational::zero()),
            SpaceDescriptor::FiniteModel { .. } => SpacePoint::Residue(0),
        }
    }

    /// All points of the finite model in canonical (ascending residue)
    /// order. Errors for infinite spaces and when the size guard trips.
    pub fn enumerate_points(&self) -> Result<Vec<SpacePoint>> {
        match self {
            SpaceDescriptor::FiniteModel { .. } => {
                let m = self.modulus().expect("finite model");
                if m as u128 > EXHAUSTIVE_LIMIT {
                    return Err(Error::SizeGuard { size: m as u128, limit: EXHAUSTIVE_LIMIT });
                }
                Ok((0..m).map(SpacePoint::Residue).collect())
            }
            _ => Err(Error::InvalidInput(
                "exhaustive enumeration is only available on the finite model".into(),
            )),
        }
    }

    /// Build a point from rational coordinates (one per dimension; the
    /// finite model embeds a rational whose denominator is a unit).
    pub fn point_from_rationals(&self, coords: &[ExactRational]) -> Result<SpacePoint> {
        match self {
            SpaceDescriptor::QpVector { p, prec, dim } => {
                if coords.len() != *dim {
                    return Err(Error::IncompatibleSpace(format!(
                        "expected {dim} coordinates, got {}",
                        coords.len()
                    )));
                }
                let mut out = Vec::with_capacity(*dim);
                for q in coords {
                    out.push(PAdicNumber::from_rational(q, *p, *prec)?);
                }
                Ok(SpacePoint::Qp(out))
            }
            SpaceDescriptor::TrivialLine => {
                if coords.len() != 1 {
                    return Err(Error::IncompatibleSpace("the line is one-dimensional".into()));
                }
                Ok(SpacePoint::Trivial(coords[0].clone()))
            }
            SpaceDescriptor::FiniteModel { .. } => {
                if coords.len() != 1 {
                    return Err(Error::IncompatibleSpace("the model is one-dimensional".into()));
                }
                Ok(SpacePoint::Residue(self.embed_residue(&coords[0])?))
            }
        }
    }

    /// Reduce a rational into Z/p^n; the denominator must be a unit.
    pub fn embed_residue(&self, q: &ExactRational) -> Result<u64> {
        let (p, m) = match self {
            SpaceDescriptor::FiniteModel { p, .. } => (*p, self.modulus().expect("finite model")),
            _ => return Err(Error::IncompatibleSpace("not a finite model".into())),
        };
        let den = q
            .denom()
            .try_into()
            .map_err(|_| Error::IncompatibleSpace(format!("denominator of {q} too large")))?;
        let den: u64 = den;
        if den.is_multiple_of(p) {
            return Err(Error::IncompatibleSpace(format!(
                "{q} has p in the denominator and does not lie in the model"
            )));
        }
        let num = num_integer::Integer::mod_floor(q.numer(), &num_bigint::BigInt::from(m));
        let num: u64 = num.try_into().expect("mod_floor into u64 range");
        let inv = mod_inv(den % m, m).expect("unit denominator");
        Ok(mod_mul(num, inv, m))
    }

    pub fn validate_point(&self, x: &SpacePoint) -> Result<()> {
        match (self, x) {
            (SpaceDescriptor::QpVector { p, dim, .. }, SpacePoint::Qp(coords)) => {
                if coords.len() != *dim {
                    return Err(Error::IncompatibleSpace(format!(
                        "expected {dim} coordinates, got {}",
                        coords.len()
                    )));
                }
                for c in coords {
                    if c.prime() != *p {
                        return Err(Error::MismatchedPrime { left: *p, right: c.prime() });
                    }
                }
                Ok(())
            }
            (SpaceDescriptor::TrivialLine, SpacePoint::Trivial(_)) => Ok(()),
            (SpaceDescriptor::FiniteModel { .. }, SpacePoint::Residue(r)) => {
                let m = self.modulus().expect("finite model");
                if *r >= m {
                    return Err(Error::IncompatibleSpace(format!("residue {r} >= modulus {m}")));
                }
                Ok(())
            }
            _ => Err(Error::IncompatibleSpace(format!("point {x} does not match {self}"))),
        }
    }

    pub fn add(&self, x: &SpacePoint, y: &SpacePoint) -> Result<SpacePoint> {
        self.validate_point(x)?;
        self.validate_point(y)?;
        Ok(match (x, y) {
            (SpacePoint::Qp(a), SpacePoint::Qp(b)) => {
                let mut out = Vec::with_capacity(a.len());
                for (ca, cb) in a.iter().zip(b) {
                    out.push(ca.add(cb)?);
                }
                SpacePoint::Qp(out)
            }
            (SpacePoint::Trivial(a), SpacePoint::Trivial(b)) => SpacePoint::Trivial(a + b),
            (SpacePoint::Residue(a), SpacePoint::Residue(b)) => {
                SpacePoint::Residue(mod_add(*a, *b, self.modulus().expect("finite model")))
            }
            _ => unreachable!("validated"),
        })
    }

    pub fn neg(&self, x: &SpacePoint) -> Result<SpacePoint> {
        self.validate_point(x)?;
        Ok(match x {
            SpacePoint::Qp(a) => SpacePoint::Qp(a.iter().map(|c| c.neg()).collect()),
            SpacePoint::Trivial(a) => SpacePoint::Trivial(-a),
            SpacePoint::Residue(a) => {
                SpacePoint::Residue(mod_neg(*a, self.modulus().expect("finite model")))
            }
        })
    }

    pub fn sub(&self, x: &SpacePoint, y: &SpacePoint) -> Result<SpacePoint> {
        let ny = self.neg(y)?;
        self.add(x, &ny)
    }

    pub fn scalar_mul(&self, s: &Scalar, x: &SpacePoint) -> Result<SpacePoint> {
        self.validate_point(x)?;
        match (self, x) {
            (SpaceDescriptor::QpVector { p, prec, .. }, SpacePoint::Qp(coords)) => {
                let Scalar::Rational(q) = s else {
                    return Err(Error::IncompatibleSpace("Q_p scalars are rationals".into()));
                };
                let factor = PAdicNumber::from_rational(q, *p, *prec)?;
                let mut out = Vec::with_capacity(coords.len());
                for c in coords {
                    out.push(c.mul(&factor)?);
                }
                Ok(SpacePoint::Qp(out))
            }
            (SpaceDescriptor::TrivialLine, SpacePoint::Trivial(a)) => {
                let Scalar::Rational(q) = s else {
                    return Err(Error::IncompatibleSpace("line scalars are rationals".into()));
                };
                Ok(SpacePoint::Trivial(q * a))
            }
            (SpaceDescriptor::FiniteModel { .. }, SpacePoint::Residue(a)) => {
                let m = self.modulus().expect("finite model");
                let r = match s {
                    Scalar::Residue(r) => {
                        if *r >= m {
                            return Err(Error::IncompatibleSpace(format!(
                                "scalar {r} >= modulus {m}"
                            )));
                        }
                        *r
                    }
                    Scalar::Rational(q) => self.embed_residue(q)?,
                };
                Ok(SpacePoint::Residue(mod_mul(r, *a, m)))
            }
            _ => unreachable!("validated"),
        }
    }

    /// Norm of a scalar in the space's field.
    pub fn scalar_norm(&self, s: &Scalar) -> Result<NormValue> {
        match (self, s) {
            (SpaceDescriptor::QpVector { p, .. }, Scalar::Rational(q)) => abs_p(q, *p),
            (SpaceDescriptor::TrivialLine, Scalar::Rational(q)) => Ok(trivial_abs(q)),
            (SpaceDescriptor::FiniteModel { p, n }, Scalar::Residue(r)) => {
                let m = self.modulus().expect("finite model");
                if *r >= m {
                    return Err(Error::IncompatibleSpace(format!("scalar {r} >= modulus {m}")));
                }
                Ok(residue_norm(*p, *n, *r))
            }
            (SpaceDescriptor::FiniteModel { p, n }, Scalar::Rational(q)) => {
                Ok(residue_norm(*p, *n, self.embed_residue(q)?))
            }
            _ => Err(Error::IncompatibleSpace(format!("scalar {s} does not match {self}"))),
        }
    }

    pub fn norm(&self, x: &SpacePoint) -> Result<NormValue> {
        self.validate_point(x)?;
        Ok(match (self, x) {
            (SpaceDescriptor::QpVector { .. }, SpacePoint::Qp(coords)) => {
                let mut acc = NormValue::Zero;
                for c in coords {
                    acc = acc.try_max(c.norm())?;
                }
                acc
            }
            (SpaceDescriptor::TrivialLine, SpacePoint::Trivial(q)) => trivial_abs(q),
            (SpaceDescriptor::FiniteModel { p, n }, SpacePoint::Residue(r)) => {
                residue_norm(*p, *n, *r)
            }
            _ => unreachable!("validated"),
        })
    }

    pub fn distance(&self, x: &SpacePoint, y: &SpacePoint) -> Result<NormValue> {
        let diff = self.sub(x, y)?;
        self.norm(&diff)
    }

    /// Equality at the available precision: exact for the line and the
    /// model, up to the shared absolute precision for Q_p vectors.
    pub fn points_equal(&self, x: &SpacePoint, y: &SpacePoint) -> Result<bool> {
        let diff = self.sub(x, y)?;
        self.is_zero_point(&diff)
    }

    pub fn is_zero_point(&self, x: &SpacePoint) -> Result<bool> {
        self.validate_point(x)?;
        Ok(match x {
            SpacePoint::Qp(coords) => coords.iter().all(|c| c.is_zero()),
            SpacePoint::Trivial(q) => q.is_zero(),
            SpacePoint::Residue(r) => *r == 0,
        })
    }
}

fn residue_norm(p: u64, n: u32, r: u64) -> NormValue {
    let v = residue_val(p, n, r);
    if v >= n {
        NormValue::Zero
    } else {
        NormValue::padic(p, -(v as i64))
    }
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceDescriptor::QpVector { p, prec, dim } => write!(f, "qp:p={p},N={prec},dim={dim}"),
            SpaceDescriptor::TrivialLine => write!(f, "trivial"),
            SpaceDescriptor::FiniteModel { p, n } => write!(f, "model:p={p},N={n}"),
        }
    }
}

impl FromStr for SpaceDescriptor {
    type Err = Error;

    /// Syntax: `qp:p=3,N=8,dim=2` (dim defaults to 1), `trivial`,
    /// `model:p=3,N=4`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let parse_err = |m: &str| Error::ParseSpace(s.to_string(), m.to_string());
        if t == "trivial" {
            return Ok(SpaceDescriptor::TrivialLine);
        }
        let (kind, rest) = t.split_once(':').ok_or_else(|| parse_err("expected kind:params"))?;
        let mut p = None;
        let mut n = None;
        let mut dim = None;
        for item in rest.split(',') {
            let (key, value) = item.split_once('=').ok_or_else(|| parse_err("expected key=value"))?;
            match key.trim() {
                "p" => p = Some(value.trim().parse::<u64>().map_err(|_| parse_err("bad p"))?),
                "N" => n = Some(value.trim().parse::<u32>().map_err(|_| parse_err("bad N"))?),
                "dim" => {
                    dim = Some(value.trim().parse::<usize>().map_err(|_| parse_err("bad dim"))?)
                }
                other => return Err(parse_err(&format!("unknown key `{other}`"))),
            }
        }
        let p = p.ok_or_else(|| parse_err("missing p"))?;
        let n = n.ok_or_else(|| parse_err("missing N"))?;
        match kind {
            "qp" => SpaceDescriptor::qp_vector(p, n, dim.unwrap_or(1)),
            "model" => {
                if dim.is_some() {
                    return Err(parse_err("the model takes no dim"));
                }
                SpaceDescriptor::finite_model(p, n)
            }
            other => Err(parse_err(&format!("unknown space kind `{other}`"))),
        }
    }
}

/// What to search or check over: every point of a finite model, or an
/// explicit sample.
#[derive(Debug, Clone)]
pub enum SearchSet {
    Exhaustive,
    Sample(Vec<SpacePoint>),
}

impl SearchSet {
    pub(crate) fn points(&self, space: &SpaceDescriptor) -> Result<Vec<SpacePoint>> {
        match self {
            SearchSet::Exhaustive => space.enumerate_points(),
            SearchSet::Sample(points) => {
                for x in points {
                    space.validate_point(x)?;
                }
                Ok(points.clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom")]
pub enum NormAxiomViolation {
    ZeroNorm { x: String, norm: NormValue },
    Homogeneity { scalar: String, x: String, lhs: NormValue, rhs: NormValue },
    StrongTriangle { x: String, y: String, lhs: NormValue, bound: NormValue },
}

impl fmt::Display for NormAxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormAxiomViolation::ZeroNorm { x, norm } => {
                write!(f, "norm-zero axiom fails at x={x}: |x| = {norm}")
            }
            NormAxiomViolation::Homogeneity { scalar, x, lhs, rhs } => {
                write!(f, "homogeneity fails at r={scalar}, x={x}: {lhs} vs {rhs}")
            }
            NormAxiomViolation::StrongTriangle { x, y, lhs, bound } => {
                write!(f, "strong triangle fails at x={x}, y={y}: {lhs} > {bound}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormAxiomReport {
    pub space: String,
    pub points: usize,
    pub pairs_checked: usize,
    pub scalar_checks: usize,
    pub violation: Option<NormAxiomViolation>,
}

impl NormAxiomReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

impl fmt::Display for NormAxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.violation {
            None => write!(
                f,
                "norm axioms ({}): PASS ({} points, {} pairs, {} scalar checks)",
                self.space, self.points, self.pairs_checked, self.scalar_checks
            ),
            Some(v) => write!(f, "norm axioms ({}): FAIL: {v}", self.space),
        }
    }
}

/// Check the three norm axioms over the given points and scalars:
/// ‖x‖ = 0 ⇔ x = 0, ‖rx‖ = |r|‖x‖, and ‖x+y‖ ≤ max(‖x‖,‖y‖).
///
/// On the finite model, homogeneity with a non-unit scalar is checked
/// only where it survives truncation (v(r) + v(x) below the level);
/// beyond that the product collapses to the zero point by construction.
pub fn check_norm_axioms(
    space: &SpaceDescriptor,
    sample: &SearchSet,
    scalars: &[Scalar],
) -> Result<NormAxiomReport> {
    let points = sample.points(space)?;
    let mut pairs_checked = 0usize;
    let mut scalar_checks = 0usize;
    let mut violation = None;

    'outer: for x in &points {
        let nx = space.norm(x)?;
        if nx.is_zero() != space.is_zero_point(x)? {
            violation = Some(NormAxiomViolation::ZeroNorm { x: x.to_string(), norm: nx });
            break;
        }
        for s in scalars {
            if skip_truncated_homogeneity(space, s, x)? {
                continue;
            }
            scalar_checks += 1;
            let lhs = space.norm(&space.scalar_mul(s, x)?)?;
            let rhs = space.scalar_norm(s)?.try_mul(nx)?;
            if lhs != rhs {
                violation = Some(NormAxiomViolation::Homogeneity {
                    scalar: s.to_string(),
                    x: x.to_string(),
                    lhs,
                    rhs,
                });
                break 'outer;
            }
        }
        for y in &points {
            pairs_checked += 1;
            let ny = space.norm(y)?;
            let lhs = space.norm(&space.add(x, y)?)?;
            let bound = nx.try_max(ny)?;
            if !lhs.le(&bound)? {
                violation = Some(NormAxiomViolation::StrongTriangle {
                    x: x.to_string(),
                    y: y.to_string(),
                    lhs,
                    bound,
                });
                break 'outer;
            }
        }
    }

    Ok(NormAxiomReport {
        space: space.to_string(),
        points: points.len(),
        pairs_checked,
        scalar_checks,
        violation,
    })
}

fn skip_truncated_homogeneity(
    space: &SpaceDescriptor,
    s: &Scalar,
    x: &SpacePoint,
) -> Result<bool> {
    let SpaceDescriptor::FiniteModel { p, n } = space else {
        return Ok(false);
    };
    let r = match s {
        Scalar::Residue(r) => *r,
        Scalar::Rational(q) => space.embed_residue(q)?,
    };
    let SpacePoint::Residue(xr) = x else { unreachable!("validated") };
    let vr = residue_val(*p, *n, r);
    let vx = residue_val(*p, *n, *xr);
    Ok(r != 0 && *xr != 0 && vr > 0 && vr + vx >= *n)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvexityWitness {
    pub x: SpacePoint,
    pub y: SpacePoint,
    pub common_norm: NormValue,
    pub sum_norm: NormValue,
}

impl fmt::Display for ConvexityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "x={}, y={}: |x| = |y| = {}, |x+y| = {} = max, x != y",
            self.x, self.y, self.common_norm, self.sum_norm
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub space: String,
    pub pairs_checked: usize,
    pub exhaustive: bool,
    pub witness: Option<ConvexityWitness>,
}

impl ConvexityReport {
    /// Certified strictly convex: no witness over an exhaustive scan.
    pub fn certified_strictly_convex(&self) -> bool {
        self.exhaustive && self.witness.is_none()
    }
}

impl fmt::Display for ConvexityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            Some(w) => write!(f, "strict convexity ({}): witness found: {w}", self.space),
            None if self.exhaustive => write!(
                f,
                "strict convexity ({}): no witness over the exhaustive scan ({} pairs); the model is strictly convex",
                self.space, self.pairs_checked
            ),
            None => write!(
                f,
                "strict convexity ({}): no witness in the sample ({} pairs)",
                self.space, self.pairs_checked
            ),
        }
    }
}

/// Search for a pair x ≠ y with ‖x‖ = ‖y‖ and ‖x+y‖ = max(‖x‖,‖y‖) —
/// a witness against strict convexity. The first witness in canonical
/// order is returned, so results are schedule-independent. Requires
/// |2| = 1 in the scalar field (p = 2 is rejected).
pub fn strict_convexity_witness(
    space: &SpaceDescriptor,
    set: &SearchSet,
) -> Result<ConvexityReport> {
    space.require_two_unit()?;
    let points = set.points(space)?;
    let exhaustive = matches!(set, SearchSet::Exhaustive);
    let mut pairs_checked = 0usize;
    let mut witness = None;

    'outer: for (i, x) in points.iter().enumerate() {
        let nx = space.norm(x)?;
        for y in points.iter().skip(i + 1) {
            pairs_checked += 1;
            let ny = space.norm(y)?;
            if nx != ny {
                continue;
            }
            let sum_norm = space.norm(&space.add(x, y)?)?;
            if sum_norm == nx.try_max(ny)? && !space.points_equal(x, y)? {
                witness = Some(ConvexityWitness {
                    x: x.clone(),
                    y: y.clone(),
                    common_norm: nx,
                    sum_norm,
                });
                break 'outer;
            }
        }
    }

    Ok(ConvexityReport { space: space.to_string(), pairs_checked, exhaustive, witness })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueSetReport {
    pub space: String,
    pub point_norms: Vec<NormValue>,
    pub scalar_norms: Vec<NormValue>,
    pub matches: bool,
}

impl fmt::Display for ValueSetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_set = |set: &[NormValue]| {
            let parts: Vec<String> = set.iter().map(|n| n.to_string()).collect();
            format!("{{{}}}", parts.join(", "))
        };
        write!(
            f,
            "value set ({}): points {} / scalars {} -> {}",
            self.space,
            fmt_set(&self.point_norms),
            fmt_set(&self.scalar_norms),
            if self.matches { "match" } else { "differ" }
        )
    }
}

fn sorted_norm_set(mut norms: Vec<NormValue>) -> Result<Vec<NormValue>> {
    // norms of one space share a base, so try_cmp cannot fail here
    let mut err = None;
    norms.sort_by(|a, b| match a.try_cmp(b) {
        Ok(ord) => ord,
        Err(e) => {
            err = Some(e);
            Ordering::Equal
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    norms.dedup();
    Ok(norms)
}

/// Collect the norm values attained by the sample and compare them with
/// the scalar-field values attained on the same sample (coordinates for
/// Q_p vectors, members themselves for the line and the model).
pub fn value_set_report(space: &SpaceDescriptor, set: &SearchSet) -> Result<ValueSetReport> {
    let points = set.points(space)?;
    let mut point_norms = Vec::with_capacity(points.len());
    let mut scalar_norms = Vec::new();
    for x in &points {
        point_norms.push(space.norm(x)?);
        match x {
            SpacePoint::Qp(coords) => {
                for c in coords {
                    scalar_norms.push(c.norm());
                }
            }
            SpacePoint::Trivial(q) => scalar_norms.push(trivial_abs(q)),
            SpacePoint::Residue(r) => {
                let SpaceDescriptor::FiniteModel { p, n } = space else { unreachable!() };
                scalar_norms.push(residue_norm(*p, *n, *r));
            }
        }
    }
    let point_norms = sorted_norm_set(point_norms)?;
    let scalar_norms = sorted_norm_set(scalar_norms)?;
    let matches = point_norms == scalar_norms;
    Ok(ValueSetReport { space: space.to_string(), point_norms, scalar_norms, matches })
}
