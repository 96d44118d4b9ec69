//! Isometry, additivity, midpoint and homogeneity oracles for declarative
//! maps, plus the midpoint and equidistant-point machinery that drives the
//! uniqueness checks on finite models.
//!
//! Checks over space points run in the ambient arithmetic (exact on the
//! line and the model, truncated on Q_p vectors). The `_rational` variants
//! evaluate over exact rationals with the p-adic norm — a dense subfield
//! of Q_p — so inversion-map checks carry no precision caveats.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::MapSpec;
use crate::rational::ExactRational;
use crate::space::{Scalar, SpaceDescriptor, SpacePoint};
use crate::valuation::{abs_p, validate_prime, NormValue};

/// A pair where ‖f(x)−f(y)‖ ≠ ‖x−y‖.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsometryViolation<P> {
    pub x: P,
    pub y: P,
    pub expected: NormValue,
    pub actual: NormValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsometryReport<P> {
    pub map: String,
    pub pairs_checked: usize,
    pub violations: Vec<IsometryViolation<P>>,
}

impl<P> IsometryReport<P> {
    /// Empty violations ⇔ isometry on the checked set.
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl<P: fmt::Display> fmt::Display for IsometryReport<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "isometry ({}): PASS ({} pairs)", self.map, self.pairs_checked)
        } else {
            let v = &self.violations[0];
            write!(
                f,
                "isometry ({}): FAIL ({} of {} pairs; first witness x={}, y={}: |x-y| = {} but |f(x)-f(y)| = {})",
                self.map,
                self.violations.len(),
                self.pairs_checked,
                v.x,
                v.y,
                v.expected,
                v.actual
            )
        }
    }
}

/// A pair failing a g-equation check, with both sides recorded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairFailure<P> {
    pub x: P,
    pub y: P,
    pub lhs: P,
    pub rhs: P,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheckReport<P> {
    pub map: String,
    pub check: String,
    pub pairs_checked: usize,
    pub failures_total: usize,
    pub failures: Vec<PairFailure<P>>,
}

impl<P> PairCheckReport<P> {
    pub fn passed(&self) -> bool {
        self.failures_total == 0
    }

    /// Keep only the first `keep` failures (the canonical least ones);
    /// `failures_total` still reports the full count.
    pub fn truncated(mut self, keep: usize) -> Self {
        self.failures.truncate(keep);
        self
    }
}

impl<P: fmt::Display> fmt::Display for PairCheckReport<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "{} ({}): PASS ({} pairs)", self.check, self.map, self.pairs_checked)
        } else if let Some(w) = self.failures.first() {
            write!(
                f,
                "{} ({}): FAIL ({} of {} pairs; witness x={}, y={}: {} vs {})",
                self.check,
                self.map,
                self.failures_total,
                self.pairs_checked,
                w.x,
                w.y,
                w.lhs,
                w.rhs
            )
        } else {
            write!(
                f,
                "{} ({}): FAIL ({} of {} pairs)",
                self.check, self.map, self.failures_total, self.pairs_checked
            )
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarFailure<P> {
    pub scalar: ExactRational,
    pub x: P,
    pub lhs: P,
    pub rhs: P,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarCheckReport<P> {
    pub map: String,
    pub checks: usize,
    pub failures_total: usize,
    pub failures: Vec<ScalarFailure<P>>,
}

impl<P> ScalarCheckReport<P> {
    pub fn passed(&self) -> bool {
        self.failures_total == 0
    }
}

impl<P: fmt::Display> fmt::Display for ScalarCheckReport<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "homogeneity ({}): PASS ({} checks)", self.map, self.checks)
        } else {
            let w = &self.failures[0];
            write!(
                f,
                "homogeneity ({}): FAIL ({} of {} checks; witness q={}, x={}: {} vs {})",
                self.map, self.failures_total, self.checks, w.scalar, w.x, w.lhs, w.rhs
            )
        }
    }
}

/// All unordered pairs (including the diagonal) in canonical order.
pub fn unordered_pairs<T: Clone>(points: &[T]) -> Vec<(T, T)> {
    let mut out = Vec::with_capacity(points.len() * (points.len() + 1) / 2);
    for (i, x) in points.iter().enumerate() {
        for y in points.iter().skip(i) {
            out.push((x.clone(), y.clone()));
        }
    }
    out
}

/// Check ‖f(x)−f(y)‖ = ‖x−y‖ exactly on every pair.
pub fn check_isometry(
    f: &MapSpec,
    space: &SpaceDescriptor,
    pairs: &[(SpacePoint, SpacePoint)],
) -> Result<IsometryReport<SpacePoint>> {
    let mut violations = Vec::new();
    for (x, y) in pairs {
        let expected = space.distance(x, y)?;
        let actual = space.distance(&f.apply(space, x)?, &f.apply(space, y)?)?;
        if expected != actual {
            violations.push(IsometryViolation { x: x.clone(), y: y.clone(), expected, actual });
        }
    }
    Ok(IsometryReport { map: f.to_string(), pairs_checked: pairs.len(), violations })
}

/// Isometry check over exact rationals carrying the p-adic norm.
pub fn check_isometry_rational(
    f: &MapSpec,
    p: u64,
    pairs: &[(ExactRational, ExactRational)],
) -> Result<IsometryReport<ExactRational>> {
    validate_prime(p)?;
    let mut violations = Vec::new();
    for (x, y) in pairs {
        let expected = abs_p(&(x - y), p)?;
        let fx = f.apply_rational(x)?;
        let fy = f.apply_rational(y)?;
        let actual = abs_p(&(&fx - &fy), p)?;
        if expected != actual {
            violations.push(IsometryViolation { x: x.clone(), y: y.clone(), expected, actual });
        }
    }
    Ok(IsometryReport { map: f.to_string(), pairs_checked: pairs.len(), violations })
}

/// With g = f − f(0), check g(x+y) = g(x) + g(y) on every pair.
pub fn check_additivity(
    f: &MapSpec,
    space: &SpaceDescriptor,
    pairs: &[(SpacePoint, SpacePoint)],
) -> Result<PairCheckReport<SpacePoint>> {
    let f0 = f.apply(space, &space.zero_point())?;
    let g = |x: &SpacePoint| -> Result<SpacePoint> { space.sub(&f.apply(space, x)?, &f0) };
    let mut failures = Vec::new();
    for (x, y) in pairs {
        let lhs = g(&space.add(x, y)?)?;
        let rhs = space.add(&g(x)?, &g(y)?)?;
        if !space.points_equal(&lhs, &rhs)? {
            failures.push(PairFailure { x: x.clone(), y: y.clone(), lhs, rhs });
        }
    }
    Ok(PairCheckReport {
        map: f.to_string(),
        check: "additivity".into(),
        pairs_checked: pairs.len(),
        failures_total: failures.len(),
        failures,
    })
}

/// Additivity of g = f − f(0) over exact rationals with the p-adic norm.
pub fn check_additivity_rational(
    f: &MapSpec,
    p: u64,
    pairs: &[(ExactRational, ExactRational)],
) -> Result<PairCheckReport<ExactRational>> {
    validate_prime(p)?;
    let f0 = f.apply_rational(&ExactRational::zero())?;
    let g = |x: &ExactRational| -> Result<ExactRational> { Ok(&f.apply_rational(x)? - &f0) };
    let mut failures = Vec::new();
    for (x, y) in pairs {
        let lhs = g(&(x + y))?;
        let rhs = &g(x)? + &g(y)?;
        if lhs != rhs {
            failures.push(PairFailure { x: x.clone(), y: y.clone(), lhs, rhs });
        }
    }
    Ok(PairCheckReport {
        map: f.to_string(),
        check: "additivity".into(),
        pairs_checked: pairs.len(),
        failures_total: failures.len(),
        failures,
    })
}

/// The midpoint (x+y)/2. Demands |2| = 1 (p = 2 is rejected): that is
/// exactly what makes the midpoint equidistant from both endpoints at
/// distance ‖x−y‖.
pub fn midpoint(
    space: &SpaceDescriptor,
    x: &SpacePoint,
    y: &SpacePoint,
) -> Result<SpacePoint> {
    space.require_two_unit()?;
    let sum = space.add(x, y)?;
    let half = Scalar::Rational(ExactRational::ratio(1, 2).expect("2 != 0"));
    let mid = space.scalar_mul(&half, &sum)?;
    debug_assert_eq!(
        space.distance(x, &mid).unwrap(),
        space.distance(x, y).unwrap(),
        "midpoint must be at distance |x-y| from x"
    );
    debug_assert_eq!(
        space.distance(y, &mid).unwrap(),
        space.distance(x, y).unwrap(),
        "midpoint must be at distance |x-y| from y"
    );
    Ok(mid)
}

/// All z of the finite model with ‖x−z‖ = ‖y−z‖ = ‖x−y‖, in canonical
/// order. In a strictly convex space the midpoint is the only such
/// point, so cardinality > 1 constructively demonstrates that the model
/// is not strictly convex. x = y is rejected (the set would be the
/// whole sphere).
pub fn equidistant_points(
    space: &SpaceDescriptor,
    x: &SpacePoint,
    y: &SpacePoint,
) -> Result<Vec<SpacePoint>> {
    if !matches!(space, SpaceDescriptor::FiniteModel { .. }) {
        return Err(Error::IncompatibleSpace(
            "the equidistant-point scan needs the exhaustive finite model".into(),
        ));
    }
    if space.points_equal(x, y)? {
        return Err(Error::InvalidInput("x = y: nothing to single out".into()));
    }
    let gap = space.distance(x, y)?;
    let mut out = Vec::new();
    for z in space.enumerate_points()? {
        if space.distance(x, &z)? == gap && space.distance(y, &z)? == gap {
            out.push(z);
        }
    }
    Ok(out)
}

/// With g = f − f(0), check g((x+y)/2) = (g(x)+g(y))/2 on every pair.
/// Needs |2| = 1 in the space's field.
pub fn check_midpoint_equation(
    f: &MapSpec,
    space: &SpaceDescriptor,
    pairs: &[(SpacePoint, SpacePoint)],
) -> Result<PairCheckReport<SpacePoint>> {
    space.require_two_unit()?;
    let f0 = f.apply(space, &space.zero_point())?;
    let g = |x: &SpacePoint| -> Result<SpacePoint> { space.sub(&f.apply(space, x)?, &f0) };
    let mut failures = Vec::new();
    for (x, y) in pairs {
        let lhs = g(&midpoint(space, x, y)?)?;
        let rhs = midpoint(space, &g(x)?, &g(y)?)?;
        if !space.points_equal(&lhs, &rhs)? {
            failures.push(PairFailure { x: x.clone(), y: y.clone(), lhs, rhs });
        }
    }
    Ok(PairCheckReport {
        map: f.to_string(),
        check: "midpoint equation".into(),
        pairs_checked: pairs.len(),
        failures_total: failures.len(),
        failures,
    })
}

/// With g = f − f(0), check g(q·x) = q·g(x) for every sampled scalar and
/// point — the finitely testable fragment of linearity.
pub fn check_rational_homogeneity(
    f: &MapSpec,
    space: &SpaceDescriptor,
    points: &[SpacePoint],
    scalars: &[ExactRational],
) -> Result<ScalarCheckReport<SpacePoint>> {
    let f0 = f.apply(space, &space.zero_point())?;
    let g = |x: &SpacePoint| -> Result<SpacePoint> { space.sub(&f.apply(space, x)?, &f0) };
    let mut failures = Vec::new();
    let mut checks = 0usize;
    for x in points {
        for q in scalars {
            checks += 1;
            let s = Scalar::Rational(q.clone());
            let lhs = g(&space.scalar_mul(&s, x)?)?;
            let rhs = space.scalar_mul(&s, &g(x)?)?;
            if !space.points_equal(&lhs, &rhs)? {
                failures.push(ScalarFailure { scalar: q.clone(), x: x.clone(), lhs, rhs });
            }
        }
    }
    Ok(ScalarCheckReport {
        map: f.to_string(),
        checks,
        failures_total: failures.len(),
        failures,
    })
}
