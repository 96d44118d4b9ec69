//! Ultrametric contraction iteration and closed-ball geometry.
//!
//! Contractiveness is never taken on trust: the iterator checks that
//! consecutive orbit residuals strictly decrease and aborts with the
//! offending pair otherwise; an orbit that starts at its fixed point is
//! probed with a unit shift instead. On top of the iterator sit the
//! inversion of Hensel perturbations (x ↦ y − p·s(x) contracts with
//! factor 1/p on integer balls) and the construction of the unique v
//! with f(u) + f(v) = f((u+v)/k) via the contraction h = φ∘f⁻¹∘ψ∘f.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::MapSpec;
use crate::rational::ExactRational;
use crate::space::{Scalar, SpaceDescriptor, SpacePoint};
use crate::valuation::{Base, NormValue};

/// Closed ball {z : ‖z − center‖ ≤ radius}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ball {
    pub center: SpacePoint,
    pub radius: NormValue,
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B({}, {})", self.center, self.radius)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BallRelation {
    FirstInsideSecond,
    SecondInsideFirst,
    Equal,
    Disjoint,
}

impl fmt::Display for BallRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BallRelation::FirstInsideSecond => "nested (first inside second)",
            BallRelation::SecondInsideFirst => "nested (second inside first)",
            BallRelation::Equal => "equal",
            BallRelation::Disjoint => "disjoint",
        };
        write!(f, "{s}")
    }
}

fn require_model(space: &SpaceDescriptor) -> Result<(u64, u32)> {
    match space {
        SpaceDescriptor::FiniteModel { p, n } => Ok((*p, *n)),
        _ => Err(Error::IncompatibleSpace(
            "ball set semantics are exhaustive and need the finite model".into(),
        )),
    }
}

/// Radii are restricted to norm values the model attains: 0 or p^-k with
/// 0 ≤ k < n. Closed balls with any other radius coincide with one of
/// these anyway.
fn validate_radius(p: u64, n: u32, radius: &NormValue) -> Result<()> {
    match radius {
        NormValue::Zero => Ok(()),
        NormValue::Finite { base: Base::Prime(q), exp }
            if *q == p && -(i64::from(n)) < *exp && *exp <= 0 =>
        {
            Ok(())
        }
        other => Err(Error::InvalidInput(format!(
            "radius {other} is not an attained norm value of the model (0 or {p}^-k, 0 <= k < {n})"
        ))),
    }
}

/// Exact member set of a ball, ascending.
pub fn ball_members(space: &SpaceDescriptor, ball: &Ball) -> Result<Vec<u64>> {
    let (p, n) = require_model(space)?;
    space.validate_point(&ball.center)?;
    validate_radius(p, n, &ball.radius)?;
    let mut out = Vec::new();
    for z in space.enumerate_points()? {
        if space.distance(&ball.center, &z)?.le(&ball.radius)? {
            let SpacePoint::Residue(r) = z else { unreachable!("finite model") };
            out.push(r);
        }
    }
    Ok(out)
}

/// Classify two balls by their exact member sets. Intersecting closed
/// balls in an ultrametric space are always nested, so the four cases
/// are exhaustive.
pub fn ball_relation(space: &SpaceDescriptor, first: &Ball, second: &Ball) -> Result<BallRelation> {
    let a: BTreeSet<u64> = ball_members(space, first)?.into_iter().collect();
    let b: BTreeSet<u64> = ball_members(space, second)?.into_iter().collect();
    if a.is_disjoint(&b) {
        return Ok(BallRelation::Disjoint);
    }
    if a == b {
        return Ok(BallRelation::Equal);
    }
    if a.is_subset(&b) {
        return Ok(BallRelation::FirstInsideSecond);
    }
    if b.is_subset(&a) {
        return Ok(BallRelation::SecondInsideFirst);
    }
    Err(Error::Internal(format!(
        "ultrametric dichotomy violated by {first} and {second}"
    )))
}

/// Exact intersection of a chain of balls. The input must be totally
/// ordered by inclusion; an incomparable pair is reported by name. On a
/// finite model the intersection of a chain is never empty.
pub fn chain_intersection(space: &SpaceDescriptor, balls: &[Ball]) -> Result<Vec<u64>> {
    if balls.is_empty() {
        return Err(Error::InvalidInput("empty chain".into()));
    }
    let mut sets = Vec::with_capacity(balls.len());
    for ball in balls {
        let set: BTreeSet<u64> = ball_members(space, ball)?.into_iter().collect();
        sets.push(set);
    }
    for i in 0..balls.len() {
        for j in (i + 1)..balls.len() {
            if ball_relation(space, &balls[i], &balls[j])? == BallRelation::Disjoint {
                return Err(Error::IncomparableBalls(format!(
                    "{} and {} are disjoint",
                    balls[i], balls[j]
                )));
            }
        }
    }
    let mut acc = sets[0].clone();
    for set in &sets[1..] {
        acc = acc.intersection(set).copied().collect();
    }
    Ok(acc.into_iter().collect())
}

/// Outcome of a contraction iteration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointResult {
    /// The point the orbit settled on.
    pub value: SpacePoint,
    /// Applications of the map along the orbit.
    pub iterations: usize,
    /// ‖h(value) − value‖ at working precision.
    pub residual: NormValue,
    /// Orbit residuals ‖x_{i+1} − x_i‖, strictly decreasing.
    pub residual_history: Vec<NormValue>,
    /// The result satisfied its defining identity at the requested
    /// tolerance.
    pub verified: bool,
}

fn within_tolerance(r: &NormValue, target_exp: i64) -> bool {
    match r {
        NormValue::Zero => true,
        NormValue::Finite { exp, .. } => *exp <= -target_exp,
    }
}

fn unit_shift(space: &SpaceDescriptor) -> Result<SpacePoint> {
    match space {
        SpaceDescriptor::QpVector { dim, .. } => {
            let mut coords = vec![ExactRational::zero(); *dim];
            coords[0] = ExactRational::one();
            space.point_from_rationals(&coords)
        }
        SpaceDescriptor::FiniteModel { .. } => Ok(SpacePoint::Residue(1)),
        SpaceDescriptor::TrivialLine => Ok(SpacePoint::Trivial(ExactRational::one())),
    }
}

/// Iterate x ↦ h(x) from `x0` until ‖x_{i+1} − x_i‖ ≤ p^(−target_exp),
/// verifying strict residual decrease at every step. An orbit that starts
/// exactly at a fixed point is accepted only if a unit-shift probe
/// confirms h contracts there; the identity map is rejected this way.
pub fn iterate_map<F>(
    space: &SpaceDescriptor,
    h: F,
    x0: &SpacePoint,
    target_exp: i64,
    max_iter: usize,
) -> Result<FixedPointResult>
where
    F: Fn(&SpacePoint) -> Result<SpacePoint>,
{
    if matches!(space, SpaceDescriptor::TrivialLine) {
        return Err(Error::IncompatibleSpace(
            "iteration needs a space that is complete at working precision: a Q_p vector space or the finite model".into(),
        ));
    }
    if max_iter == 0 {
        return Err(Error::InvalidInput("max_iter must be positive".into()));
    }

    let mut x_prev = x0.clone();
    let mut x = h(&x_prev)?;
    let mut r_prev = space.distance(&x, &x_prev)?;
    let mut history = vec![r_prev];
    let mut iterations = 1usize;

    if r_prev.is_zero() {
        let probe = space.add(x0, &unit_shift(space)?)?;
        let shrunk = space.distance(&h(&probe)?, &h(x0)?)?;
        let gap = space.distance(&probe, x0)?;
        if shrunk.try_cmp(&gap)? != Ordering::Less {
            return Err(Error::NonContractive {
                step: 0,
                detail: format!(
                    "the orbit starts at a fixed point, and the probe pair (x0, x0+1) does not contract: |h(x0+1)-h(x0)| = {shrunk}, |x0+1-x0| = {gap}"
                ),
            });
        }
        let residual = space.distance(&h(&x)?, &x)?;
        return Ok(FixedPointResult {
            value: x,
            iterations,
            residual,
            residual_history: history,
            verified: true,
        });
    }

    while !within_tolerance(&r_prev, target_exp) {
        if iterations >= max_iter {
            return Err(Error::NoConvergence(max_iter));
        }
        let x_next = h(&x)?;
        let r = space.distance(&x_next, &x)?;
        if r.try_cmp(&r_prev)? != Ordering::Less {
            return Err(Error::NonContractive {
                step: iterations,
                detail: format!(
                    "residual did not shrink: |h(x{})-x{}| = {r} after |x{}-x{}| = {r_prev}",
                    iterations,
                    iterations,
                    iterations,
                    iterations - 1
                ),
            });
        }
        history.push(r);
        x_prev = x;
        x = x_next;
        r_prev = r;
        iterations += 1;
    }
    let _ = x_prev;

    let residual = space.distance(&h(&x)?, &x)?;
    if !residual.le(&r_prev)? {
        return Err(Error::Internal(format!(
            "final residual {residual} exceeds the last orbit step {r_prev}"
        )));
    }
    Ok(FixedPointResult {
        value: x,
        iterations,
        residual,
        residual_history: history,
        verified: true,
    })
}

/// Iterate a declarative map to its fixed point.
pub fn iterate_contraction(
    h: &MapSpec,
    space: &SpaceDescriptor,
    x0: &SpacePoint,
    target_exp: i64,
    max_iter: usize,
) -> Result<FixedPointResult> {
    iterate_map(space, |x| h.apply(space, x), x0, target_exp, max_iter)
}

/// Invert a Hensel perturbation f(x) = x + p·s(x) at `y`: the update
/// x ↦ y − p·s(x) = x + y − f(x) contracts with factor at most 1/p on the
/// integer ball, so the orbit converges to the unique preimage. The
/// returned residual is ‖f(x*) − y‖ and `verified` asserts it meets the
/// tolerance.
pub fn invert_isometry(
    f: &MapSpec,
    space: &SpaceDescriptor,
    y: &SpacePoint,
    target_exp: i64,
    max_iter: usize,
) -> Result<SpacePoint> {
    Ok(invert_isometry_full(f, space, y, target_exp, max_iter)?.value)
}

pub fn invert_isometry_full(
    f: &MapSpec,
    space: &SpaceDescriptor,
    y: &SpacePoint,
    target_exp: i64,
    max_iter: usize,
) -> Result<FixedPointResult> {
    if !matches!(f, MapSpec::HenselPerturb { .. }) {
        return Err(Error::NotInvertible(format!(
            "iterative inversion is defined for Hensel perturbations, not {f}"
        )));
    }
    let update = |x: &SpacePoint| -> Result<SpacePoint> {
        // y − p·s(x), written as x + y − f(x) to reuse the map evaluator
        let fx = f.apply(space, x)?;
        space.sub(&space.add(x, y)?, &fx)
    };
    let mut run = iterate_map(space, update, y, target_exp, max_iter)?;
    let residual = space.distance(&f.apply(space, &run.value)?, y)?;
    run.verified = within_tolerance(&residual, target_exp);
    run.residual = residual;
    Ok(run)
}

/// Outcome of the unique-companion construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompanionResult {
    pub fixed_point: FixedPointResult,
    /// Two distinct starting points converged to the same v at the
    /// requested tolerance.
    pub starts_agreed: bool,
    /// Exact value when f is affine and the fixed point has a closed form.
    pub closed_form: Option<ExactRational>,
}

enum InverseOp<'a> {
    Spec(MapSpec),
    Hensel(&'a MapSpec),
}

fn build_inverse(f: &MapSpec) -> Result<InverseOp<'_>> {
    if let Some((a, b)) = f.as_affine() {
        let inv_a = a.recip().expect("a != 0 validated");
        let neg = -&b;
        let inv_b = neg.checked_div(&a).expect("a != 0 validated");
        return Ok(InverseOp::Spec(MapSpec::Affine { a: inv_a, b: inv_b }));
    }
    match f {
        MapSpec::Q2Inversion => Ok(InverseOp::Spec(MapSpec::Q2Inversion)), // an involution
        MapSpec::HenselPerturb { .. } => Ok(InverseOp::Hensel(f)),
        MapSpec::Cube => Err(Error::NotInvertible(
            "the cube map is not surjective over the computable domain".into(),
        )),
        other => Err(Error::NotInvertible(format!("no inverse available for {other}"))),
    }
}

fn qp_agree(space: &SpaceDescriptor, x: &SpacePoint, y: &SpacePoint, m: i64) -> Result<bool> {
    let (SpacePoint::Qp(a), SpacePoint::Qp(b)) = (x, y) else {
        return space.points_equal(x, y);
    };
    for (ca, cb) in a.iter().zip(b) {
        if !ca.equal_to_precision(cb, m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For a surjective isometry f with computable inverse and a natural k
/// with |k| < 1, construct the unique v with f(u) + f(v) = f((u+v)/k):
/// iterate the contraction h = φ∘f⁻¹∘ψ∘f (φ(x) = kx − u, ψ(y) = f(u) + y)
/// to its fixed point, then verify the identity independently and probe
/// uniqueness from a second starting point. Affine maps additionally get
/// the exact fixed point in closed form.
pub fn companion_point(
    f: &MapSpec,
    space: &SpaceDescriptor,
    u: &ExactRational,
    k: u64,
    target_exp: i64,
    max_iter: usize,
) -> Result<CompanionResult> {
    f.validate()?;
    let p = match space {
        SpaceDescriptor::QpVector { p, dim: 1, .. } => *p,
        SpaceDescriptor::QpVector { .. } => {
            return Err(Error::DomainMismatch(
                "the companion construction works on one-dimensional Q_p spaces".into(),
            ))
        }
        SpaceDescriptor::TrivialLine => {
            // no natural number has trivial norm below 1
            return Err(Error::ScalarNotContractive { k });
        }
        SpaceDescriptor::FiniteModel { .. } => {
            return Err(Error::IncompatibleSpace(
                "scalar division by k is not exact in the residue model; use a Q_p space".into(),
            ))
        }
    };
    if k == 0 {
        return Err(Error::InvalidInput("k must be a positive natural number".into()));
    }
    if !k.is_multiple_of(p) {
        // |k| ≤ 1 always holds for naturals, so |k| ≠ 1 forces p | k
        return Err(Error::ScalarNotContractive { k });
    }

    let inverse = build_inverse(f)?;
    let inner_target = target_exp + 4;
    let inner_max = max_iter * 4 + 64;
    let apply_inverse = |y: &SpacePoint| -> Result<SpacePoint> {
        match &inverse {
            InverseOp::Spec(spec) => spec.apply(space, y),
            InverseOp::Hensel(spec) => invert_isometry(spec, space, y, inner_target, inner_max),
        }
    };

    let u_point = space.point_from_rationals(std::slice::from_ref(u))?;
    let f_u = f.apply(space, &u_point)?;
    let k_rat = ExactRational::from_integer(k as i64);
    let h = |x: &SpacePoint| -> Result<SpacePoint> {
        let fx = f.apply(space, x)?;
        let shifted = space.add(&f_u, &fx)?;
        let pre = apply_inverse(&shifted)?;
        let scaled = space.scalar_mul(&Scalar::Rational(k_rat.clone()), &pre)?;
        space.sub(&scaled, &u_point)
    };

    let mut run = iterate_map(space, h, &u_point, target_exp, max_iter)?;
    let second_start = space.add(&u_point, &unit_shift(space)?)?;
    let second = iterate_map(space, h, &second_start, target_exp, max_iter)?;

    // affine maps admit the exact fixed point v = −u − k·b/(a·(k−1))
    let closed_form = f.as_affine().map(|(a, b)| {
        let k_minus_1 = ExactRational::from_integer(k as i64 - 1);
        let shift = (&k_rat * &b).checked_div(&(&a * &k_minus_1)).expect("k > 1, a != 0");
        &(-u) - &shift
    });
    if let Some(v) = &closed_form {
        let exact_point = space.point_from_rationals(std::slice::from_ref(v))?;
        if !qp_agree(space, &exact_point, &run.value, target_exp)? {
            return Err(Error::Internal(format!(
                "iterated fixed point disagrees with the closed form {v}"
            )));
        }
        run.residual = space.distance(&h(&exact_point)?, &exact_point)?;
        run.value = exact_point;
    }

    let starts_agreed = qp_agree(space, &run.value, &second.value, target_exp)?;

    // independent check of f(u) + f(v) = f((u+v)/k)
    let lhs = space.add(&f_u, &f.apply(space, &run.value)?)?;
    let scaled_sum = space.scalar_mul(
        &Scalar::Rational(k_rat.recip().expect("k > 0")),
        &space.add(&u_point, &run.value)?,
    )?;
    let rhs = f.apply(space, &scaled_sum)?;
    run.verified = qp_agree(space, &lhs, &rhs, target_exp)?;

    Ok(CompanionResult { fixed_point: run, starts_agreed, closed_form })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PAdicNumber;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn model(p: u64, n: u32) -> SpaceDescriptor {
        SpaceDescriptor::finite_model(p, n).unwrap()
    }

    fn qp(p: u64, prec: u32) -> SpaceDescriptor {
        SpaceDescriptor::qp_vector(p, prec, 1).unwrap()
    }

    fn pt(space: &SpaceDescriptor, s: &str) -> SpacePoint {
        space.point_from_rationals(&[q(s)]).unwrap()
    }

    #[test]
    fn ball_relations_on_the_model() {
        let m = model(3, 3);
        let b = |c: u64, r: NormValue| Ball { center: SpacePoint::Residue(c), radius: r };
        let small = NormValue::padic(3, -1);
        let unit = NormValue::padic(3, 0);
        assert_eq!(
            ball_relation(&m, &b(0, small), &b(0, unit)).unwrap(),
            BallRelation::FirstInsideSecond
        );
        assert_eq!(
            ball_relation(&m, &b(0, small), &b(1, small)).unwrap(),
            BallRelation::Disjoint
        );
        // every member is a center: 3 lies in B(0, 1/3)
        assert_eq!(ball_relation(&m, &b(0, small), &b(3, small)).unwrap(), BallRelation::Equal);
    }

    #[test]
    fn ball_radii_are_restricted_to_attained_values() {
        let m = model(3, 3);
        let ball = Ball { center: SpacePoint::Residue(0), radius: NormValue::padic(3, 1) };
        assert!(ball_members(&m, &ball).is_err());
        let ball = Ball { center: SpacePoint::Residue(0), radius: NormValue::padic(3, -3) };
        assert!(ball_members(&m, &ball).is_err());
        let ball = Ball { center: SpacePoint::Residue(0), radius: NormValue::trivial_one() };
        assert!(ball_members(&m, &ball).is_err());
        let point_ball = Ball { center: SpacePoint::Residue(5), radius: NormValue::Zero };
        assert_eq!(ball_members(&m, &point_ball).unwrap(), vec![5]);
    }

    #[test]
    fn chain_intersections() {
        let m = model(3, 3);
        let chain = [
            Ball { center: SpacePoint::Residue(0), radius: NormValue::padic(3, 0) },
            Ball { center: SpacePoint::Residue(0), radius: NormValue::padic(3, -1) },
            Ball { center: SpacePoint::Residue(0), radius: NormValue::padic(3, -2) },
        ];
        assert_eq!(chain_intersection(&m, &chain).unwrap(), vec![0, 9, 18]);

        let single = [chain[1].clone()];
        assert_eq!(chain_intersection(&m, &single).unwrap(), vec![0, 3, 6, 9, 12, 15, 18, 21, 24]);

        let bad = [
            Ball { center: SpacePoint::Residue(0), radius: NormValue::padic(3, -1) },
            Ball { center: SpacePoint::Residue(1), radius: NormValue::padic(3, -1) },
        ];
        assert!(matches!(chain_intersection(&m, &bad), Err(Error::IncomparableBalls(_))));
    }

    #[test]
    fn every_point_of_a_ball_is_a_center() {
        let m = model(3, 3);
        for c in 0..27u64 {
            for radius in [NormValue::Zero, NormValue::padic(3, -2), NormValue::padic(3, -1)] {
                let ball = Ball { center: SpacePoint::Residue(c), radius };
                let members = ball_members(&m, &ball).unwrap();
                for &z in &members {
                    let recentred = Ball { center: SpacePoint::Residue(z), radius };
                    assert_eq!(ball_members(&m, &recentred).unwrap(), members);
                }
            }
        }
    }

    #[test]
    fn linear_contraction_to_zero() {
        let space = qp(3, 16);
        let h = MapSpec::Affine { a: q("3"), b: q("0") };
        let run = iterate_contraction(&h, &space, &pt(&space, "1"), 10, 60).unwrap();
        assert!(run.verified);
        assert!(run.residual.le(&NormValue::padic(3, -10)).unwrap());
        assert!(space.norm(&run.value).unwrap().le(&NormValue::padic(3, -10)).unwrap());
        // geometric residuals with ratio 1/3
        for pair in run.residual_history.windows(2) {
            let (a, b) = (pair[0].exp().unwrap(), pair[1].exp().unwrap());
            assert_eq!(b, a - 1);
        }
    }

    #[test]
    fn affine_contraction_matches_the_closed_form() {
        let space = qp(3, 16);
        let h = MapSpec::Affine { a: q("3"), b: q("1") };
        let run = iterate_contraction(&h, &space, &pt(&space, "1"), 12, 60).unwrap();
        // closed form c/(1-a) = 1/(1-3) = -1/2
        let expected = PAdicNumber::from_rational(&q("-1/2"), 3, 16).unwrap();
        let SpacePoint::Qp(coords) = &run.value else { panic!() };
        assert!(coords[0].equal_to_precision(&expected, 12).unwrap());
    }

    #[test]
    fn identity_is_rejected_as_non_contractive() {
        let space = qp(3, 16);
        let id = MapSpec::Affine { a: q("1"), b: q("0") };
        let err = iterate_contraction(&id, &space, &pt(&space, "1"), 8, 20);
        assert!(matches!(err, Err(Error::NonContractive { step: 0, .. })));

        // a non-fixed start is caught at the first orbit comparison
        let shift = MapSpec::Translation { b: q("1") };
        let err = iterate_contraction(&shift, &space, &pt(&space, "1"), 8, 20);
        assert!(matches!(err, Err(Error::NonContractive { step: 1, .. })));
    }

    #[test]
    fn contraction_from_an_exact_fixed_point_converges() {
        let space = qp(3, 16);
        let h = MapSpec::Affine { a: q("3"), b: q("0") };
        let run = iterate_contraction(&h, &space, &pt(&space, "0"), 10, 20).unwrap();
        assert!(space.is_zero_point(&run.value).unwrap());
        assert_eq!(run.iterations, 1);
    }

    #[test]
    fn contraction_on_the_model_reaches_the_exact_fixed_point() {
        let m = model(3, 4);
        let h = MapSpec::Affine { a: q("3"), b: q("1") };
        let run = iterate_contraction(&h, &m, &SpacePoint::Residue(1), 4, 20).unwrap();
        // 3·40 + 1 = 121 ≡ 40 (mod 81)
        assert_eq!(run.value, SpacePoint::Residue(40));
        assert_eq!(run.residual, NormValue::Zero);
    }

    #[test]
    fn inversion_round_trip() {
        let f = MapSpec::HenselPerturb { p: 3, coeffs: vec![0, 0, 1] };
        let space = qp(3, 16);
        let y = f.apply(&space, &pt(&space, "2")).unwrap(); // 2 + 3·4 = 14
        assert!(space.points_equal(&y, &pt(&space, "14")).unwrap());
        let run = invert_isometry_full(&f, &space, &y, 12, 80).unwrap();
        assert!(run.verified);
        assert!(qp_agree(&space, &run.value, &pt(&space, "2"), 12).unwrap());
    }

    #[test]
    fn trivial_perturbation_inverts_in_one_step() {
        let f = MapSpec::HenselPerturb { p: 3, coeffs: vec![0] };
        let space = qp(3, 16);
        let y = pt(&space, "7");
        let run = invert_isometry_full(&f, &space, &y, 12, 10).unwrap();
        assert_eq!(run.iterations, 1);
        assert!(space.points_equal(&run.value, &y).unwrap());
    }

    #[test]
    fn hensel_perturbation_is_a_bijection_of_the_model() {
        let m = model(3, 4);
        let f = MapSpec::HenselPerturb { p: 3, coeffs: vec![0, 0, 1] };
        let mut image = BTreeSet::new();
        for r in 0..81u64 {
            image.insert(f.apply_residue(&m, r).unwrap());
        }
        assert_eq!(image.len(), 81);

        // and the iterative inverse agrees pointwise
        for y in [0u64, 1, 2, 14, 40, 80] {
            let x = invert_isometry(&f, &m, &SpacePoint::Residue(y), 4, 30).unwrap();
            let SpacePoint::Residue(x) = x else { panic!() };
            assert_eq!(f.apply_residue(&m, x).unwrap(), y);
        }
    }

    #[test]
    fn companion_for_the_identity_is_minus_u() {
        let space = qp(3, 16);
        let id = MapSpec::Affine { a: q("1"), b: q("0") };
        for u in ["0", "1", "5"] {
            let out = companion_point(&id, &space, &q(u), 3, 12, 40).unwrap();
            assert_eq!(out.closed_form, Some(-&q(u)));
            assert!(out.fixed_point.verified);
            assert!(out.starts_agreed);
            assert!(space
                .points_equal(&out.fixed_point.value, &pt(&space, &(-&q(u)).to_string()))
                .unwrap());
        }
    }

    #[test]
    fn companion_for_a_translation_solves_the_identity() {
        let space = qp(3, 16);
        let f = MapSpec::Translation { b: q("1") };
        let out = companion_point(&f, &space, &q("1"), 3, 12, 40).unwrap();
        // symbolic solve: u + v + 2b = (u+v)/k + b forces v = −u − kb/(k−1)
        assert_eq!(out.closed_form, Some(q("-5/2")));
        assert!(out.fixed_point.verified);
        assert!(out.starts_agreed);
    }

    #[test]
    fn companion_for_a_hensel_perturbation_verifies() {
        let space = qp(3, 16);
        let f = MapSpec::HenselPerturb { p: 3, coeffs: vec![0, 0, 1] };
        let out = companion_point(&f, &space, &q("1"), 3, 12, 40).unwrap();
        assert!(out.closed_form.is_none());
        assert!(out.fixed_point.verified, "identity not met: {:?}", out.fixed_point);
        assert!(out.starts_agreed);
        assert!(out.fixed_point.iterations <= 20);
    }

    #[test]
    fn companion_for_the_q2_involution_verifies() {
        let space = qp(2, 16);
        let out = companion_point(&MapSpec::Q2Inversion, &space, &q("1"), 2, 10, 60).unwrap();
        assert!(out.fixed_point.verified);
        assert!(out.starts_agreed);
    }

    #[test]
    fn companion_preconditions() {
        let space = qp(3, 16);
        let id = MapSpec::Affine { a: q("1"), b: q("0") };
        // |k| = 1 in Q_3
        assert!(matches!(
            companion_point(&id, &space, &q("1"), 2, 10, 40),
            Err(Error::ScalarNotContractive { k: 2 })
        ));
        // no contractive natural scalar exists for the trivial valuation
        assert!(matches!(
            companion_point(&id, &SpaceDescriptor::TrivialLine, &q("1"), 3, 10, 40),
            Err(Error::ScalarNotContractive { k: 3 })
        ));
        // the cube map has no computable inverse
        assert!(matches!(
            companion_point(&MapSpec::Cube, &space, &q("1"), 3, 10, 40),
            Err(Error::NotInvertible(_))
        ));
    }

    /// Re-derive the construction by hand for f(x) = x + 3x², u = 1,
    /// k = 3 and iterate from the starts 0 and 5: both orbits land on
    /// the v the library construction returns.
    #[test]
    fn companion_matches_a_hand_built_contraction() {
        let space = qp(3, 16);
        let f = MapSpec::HenselPerturb { p: 3, coeffs: vec![0, 0, 1] };
        let u = pt(&space, "1");
        let f_u = f.apply(&space, &u).unwrap();
        let three = Scalar::Rational(q("3"));
        let h = |x: &SpacePoint| -> crate::error::Result<SpacePoint> {
            let shifted = space.add(&f_u, &f.apply(&space, x)?)?;
            let pre = invert_isometry(&f, &space, &shifted, 16, 80)?;
            space.sub(&space.scalar_mul(&three, &pre)?, &u)
        };
        let from_zero = iterate_map(&space, h, &pt(&space, "0"), 12, 40).unwrap();
        let from_five = iterate_map(&space, h, &pt(&space, "5"), 12, 40).unwrap();
        assert!(qp_agree(&space, &from_zero.value, &from_five.value, 12).unwrap());

        let out = companion_point(&f, &space, &q("1"), 3, 12, 40).unwrap();
        assert!(qp_agree(&space, &from_zero.value, &out.fixed_point.value, 12).unwrap());
    }

    /// Perturbing v by e with ‖e‖ ≥ p^(−(target−2)) breaks the identity.
    #[test]
    fn companion_is_locally_unique() {
        let space = qp(3, 16);
        let f = MapSpec::HenselPerturb { p: 3, coeffs: vec![0, 0, 1] };
        let target = 12;
        let out = companion_point(&f, &space, &q("1"), 3, target, 40).unwrap();
        let u_point = pt(&space, "1");
        let f_u = f.apply(&space, &u_point).unwrap();
        let third = Scalar::Rational(q("1/3"));
        for shift in ["1", "3", "9", "59049"] {
            // 59049 = 3^10 = p^(target-2)
            let v = space.add(&out.fixed_point.value, &pt(&space, shift)).unwrap();
            let lhs = space.add(&f_u, &f.apply(&space, &v).unwrap()).unwrap();
            let mid = space.scalar_mul(&third, &space.add(&u_point, &v).unwrap()).unwrap();
            // a perturbation with unit norm pushes (u+v+e)/3 out of the
            // integer ball, which breaks the identity outright
            let broken = match f.apply(&space, &mid) {
                Err(Error::DomainMismatch(_)) => true,
                Ok(rhs) => !qp_agree(&space, &lhs, &rhs, target).unwrap(),
                Err(e) => panic!("unexpected error: {e}"),
            };
            assert!(broken, "identity survived perturbation by {shift}");
        }
    }
}
