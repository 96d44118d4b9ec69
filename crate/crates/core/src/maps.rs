//! Maps between spaces as first-class, declarative specifications.
//!
//! Every variant evaluates exactly on rational scalars; Q_p vector points
//! additionally get a truncated evaluation path. The inversion map on Q_2
//! interprets its case split "x = (a/b)·2^0" as |x|_2 = 1, the only
//! reading that extends from lowest-terms rationals to all of Q_2.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::PAdicNumber;
use crate::rational::ExactRational;
use crate::space::{SpaceDescriptor, SpacePoint};
use crate::valuation::{abs_p, validate_prime};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum MapSpec {
    /// x ↦ a·x + b with a ≠ 0; an isometry exactly when |a| = 1.
    Affine { a: ExactRational, b: ExactRational },
    /// x ↦ x³ on the trivially valued line or the finite model.
    Cube,
    /// x ↦ 1/x on the 2-adic unit sphere, identity elsewhere.
    Q2Inversion,
    /// x ↦ x + p·s(x) with s an integer polynomial (coefficients constant
    /// first); an isometry of integer balls, invertible by contraction.
    HenselPerturb { p: u64, coeffs: Vec<i64> },
    /// x ↦ x + b.
    Translation { b: ExactRational },
    /// Left-to-right composition: `Compose([f, g])` applies f first.
    Compose(Vec<MapSpec>),
}

impl MapSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            MapSpec::Affine { a, .. } => {
                if a.is_zero() {
                    return Err(Error::InvalidInput("affine coefficient a must be nonzero".into()));
                }
                Ok(())
            }
            MapSpec::HenselPerturb { p, .. } => validate_prime(*p),
            MapSpec::Compose(parts) => {
                if parts.is_empty() {
                    return Err(Error::InvalidInput("empty composition".into()));
                }
                parts.iter().try_for_each(MapSpec::validate)
            }
            _ => Ok(()),
        }
    }

    /// Affine normal form (a, b) when the map is affine (including
    /// compositions of affine maps).
    pub fn as_affine(&self) -> Option<(ExactRational, ExactRational)> {
        match self {
            MapSpec::Affine { a, b } => Some((a.clone(), b.clone())),
            MapSpec::Translation { b } => Some((ExactRational::one(), b.clone())),
            MapSpec::Compose(parts) => {
                let mut acc = (ExactRational::one(), ExactRational::zero());
                for part in parts {
                    let (a, b) = part.as_affine()?;
                    // applying `part` after the accumulated map
                    acc = (&a * &acc.0, &(&a * &acc.1) + &b);
                }
                Some(acc)
            }
            _ => None,
        }
    }

    fn hensel_poly_rational(coeffs: &[i64], x: &ExactRational) -> ExactRational {
        let mut acc = ExactRational::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * x) + &ExactRational::from_integer(*c);
        }
        acc
    }

    /// Exact evaluation on a rational scalar.
    pub fn apply_rational(&self, x: &ExactRational) -> Result<ExactRational> {
        self.validate()?;
        match self {
            MapSpec::Affine { a, b } => Ok(&(a * x) + b),
            MapSpec::Cube => Ok(x.pow(3)),
            MapSpec::Q2Inversion => {
                if abs_p(x, 2)?.is_one() {
                    x.recip()
                } else {
                    Ok(x.clone())
                }
            }
            MapSpec::HenselPerturb { p, coeffs } => {
                if matches!(abs_p(x, *p)?.exp(), Some(e) if e > 0) {
                    return Err(Error::DomainMismatch(format!(
                        "{x} lies outside the integer ball of Q_{p}"
                    )));
                }
                let s = Self::hensel_poly_rational(coeffs, x);
                let scaled = &ExactRational::from_integer(*p as i64) * &s;
                Ok(x + &scaled)
            }
            MapSpec::Translation { b } => Ok(x + b),
            MapSpec::Compose(parts) => {
                let mut acc = x.clone();
                for part in parts {
                    acc = part.apply_rational(&acc)?;
                }
                Ok(acc)
            }
        }
    }

    /// Truncated evaluation on a Q_p element.
    pub fn apply_padic(&self, x: &PAdicNumber) -> Result<PAdicNumber> {
        self.validate()?;
        let p = x.prime();
        let prec = x.rel_precision().unwrap_or(crate::padic::DEFAULT_PRECISION);
        let embed = |q: &ExactRational| PAdicNumber::from_rational(q, p, prec);
        match self {
            MapSpec::Affine { a, b } => embed(a)?.mul(x)?.add(&embed(b)?),
            MapSpec::Cube => {
                Err(Error::DomainMismatch("the cube map is not defined on Q_p spaces".into()))
            }
            MapSpec::Q2Inversion => {
                if p != 2 {
                    return Err(Error::DomainMismatch(
                        "the inversion map lives on p = 2 spaces".into(),
                    ));
                }
                if x.norm().is_one() {
                    embed(&ExactRational::one())?.div(x)
                } else {
                    Ok(x.clone())
                }
            }
            MapSpec::HenselPerturb { p: hp, coeffs } => {
                if *hp != p {
                    return Err(Error::MismatchedPrime { left: *hp, right: p });
                }
                if matches!(x.valuation(), Some(v) if v < 0) {
                    return Err(Error::DomainMismatch(
                        "the perturbation is only defined on the integer ball".into(),
                    ));
                }
                let mut s = PAdicNumber::exact_zero(p)?;
                for c in coeffs.iter().rev() {
                    s = s.mul(x)?.add(&embed(&ExactRational::from_integer(*c))?)?;
                }
                x.add(&embed(&ExactRational::from_integer(*hp as i64))?.mul(&s)?)
            }
            MapSpec::Translation { b } => x.add(&embed(b)?),
            MapSpec::Compose(parts) => {
                let mut acc = x.clone();
                for part in parts {
                    acc = part.apply_padic(&acc)?;
                }
                Ok(acc)
            }
        }
    }

    /// Exact evaluation on a residue of the finite model.
    pub fn apply_residue(&self, space: &SpaceDescriptor, r: u64) -> Result<u64> {
        self.validate()?;
        let SpaceDescriptor::FiniteModel { p, .. } = space else {
            return Err(Error::IncompatibleSpace("not a finite model".into()));
        };
        let m = space.modulus().expect("finite model");
        let mul = |a: u64, b: u64| ((a as u128 * b as u128) % m as u128) as u64;
        match self {
            MapSpec::Affine { a, b } => {
                let a = space.embed_residue(a)?;
                let b = space.embed_residue(b)?;
                Ok((mul(a, r) as u128 + b as u128).rem_euclid(m as u128) as u64)
            }
            MapSpec::Cube => Ok(mul(mul(r, r), r)),
            MapSpec::Q2Inversion => {
                if *p != 2 {
                    return Err(Error::DomainMismatch(
                        "the inversion map lives on p = 2 spaces".into(),
                    ));
                }
                if r % 2 == 1 {
                    Ok(crate::space::mod_inv(r, m).expect("odd residue is a unit"))
                } else {
                    Ok(r)
                }
            }
            MapSpec::HenselPerturb { p: hp, coeffs } => {
                if hp != p {
                    return Err(Error::MismatchedPrime { left: *hp, right: *p });
                }
                let mut s: u64 = 0;
                for c in coeffs.iter().rev() {
                    let c = (*c as i128).rem_euclid(m as i128) as u64;
                    s = (mul(s, r) as u128 + c as u128).rem_euclid(m as u128) as u64;
                }
                Ok((r as u128 + mul(*hp, s) as u128).rem_euclid(m as u128) as u64)
            }
            MapSpec::Translation { b } => {
                let b = space.embed_residue(b)?;
                Ok((r as u128 + b as u128).rem_euclid(m as u128) as u64)
            }
            MapSpec::Compose(parts) => {
                let mut acc = r;
                for part in parts {
                    acc = part.apply_residue(space, acc)?;
                }
                Ok(acc)
            }
        }
    }

    /// Evaluate on a space point in the ambient arithmetic. Scalar maps
    /// require one-dimensional Q_p spaces.
    pub fn apply(&self, space: &SpaceDescriptor, x: &SpacePoint) -> Result<SpacePoint> {
        space.validate_point(x)?;
        match (space, x) {
            (SpaceDescriptor::QpVector { dim, .. }, SpacePoint::Qp(coords)) => {
                if *dim != 1 {
                    return Err(Error::DomainMismatch(
                        "scalar maps act on one-dimensional Q_p spaces".into(),
                    ));
                }
                Ok(SpacePoint::Qp(vec![self.apply_padic(&coords[0])?]))
            }
            (SpaceDescriptor::TrivialLine, SpacePoint::Trivial(q)) => match self {
                MapSpec::Q2Inversion => Err(Error::DomainMismatch(
                    "the inversion map lives on p = 2 spaces".into(),
                )),
                MapSpec::HenselPerturb { .. } => Err(Error::DomainMismatch(
                    "the perturbation needs an integer-ball domain".into(),
                )),
                MapSpec::Compose(parts) => {
                    let mut acc = x.clone();
                    for part in parts {
                        acc = part.apply(space, &acc)?;
                    }
                    Ok(acc)
                }
                _ => Ok(SpacePoint::Trivial(self.apply_rational(q)?)),
            },
            (SpaceDescriptor::FiniteModel { .. }, SpacePoint::Residue(r)) => {
                Ok(SpacePoint::Residue(self.apply_residue(space, *r)?))
            }
            _ => unreachable!("validated"),
        }
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapSpec::Affine { a, b } => write!(f, "affine:a={a},b={b}"),
            MapSpec::Cube => write!(f, "cube"),
            MapSpec::Q2Inversion => write!(f, "q2inv"),
            MapSpec::HenselPerturb { p, coeffs } => {
                let cs: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
                write!(f, "hensel:p={p},s={}", cs.join(","))
            }
            MapSpec::Translation { b } => write!(f, "translate:b={b}"),
            MapSpec::Compose(parts) => {
                let ps: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "compose:[{}]", ps.join(";"))
            }
        }
    }
}

impl FromStr for MapSpec {
    type Err = Error;

    /// Mini-language: `affine:a=1/3,b=2`, `cube`, `q2inv`,
    /// `hensel:p=3,s=0,0,1` (coefficients of s, constant first),
    /// `translate:b=5`, `compose:[spec;spec;...]`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let parse_err = |m: &str| Error::ParseMap(s.to_string(), m.to_string());
        let spec = match t {
            "cube" => MapSpec::Cube,
            "q2inv" => MapSpec::Q2Inversion,
            _ => {
                let (kind, rest) =
                    t.split_once(':').ok_or_else(|| parse_err("expected kind:params"))?;
                match kind {
                    "affine" => {
                        let mut a = None;
                        let mut b = None;
                        for item in rest.split(',') {
                            let (k, v) =
                                item.split_once('=').ok_or_else(|| parse_err("expected key=value"))?;
                            match k.trim() {
                                "a" => a = Some(v.trim().parse()?),
                                "b" => b = Some(v.trim().parse()?),
                                other => return Err(parse_err(&format!("unknown key `{other}`"))),
                            }
                        }
                        MapSpec::Affine {
                            a: a.ok_or_else(|| parse_err("missing a"))?,
                            b: b.ok_or_else(|| parse_err("missing b"))?,
                        }
                    }
                    "translate" => {
                        let (k, v) =
                            rest.split_once('=').ok_or_else(|| parse_err("expected b=value"))?;
                        if k.trim() != "b" {
                            return Err(parse_err("expected b=value"));
                        }
                        MapSpec::Translation { b: v.trim().parse()? }
                    }
                    "hensel" => {
                        let (p_part, s_part) =
                            rest.split_once(",s=").ok_or_else(|| parse_err("expected p=..,s=.."))?;
                        let p = p_part
                            .trim()
                            .strip_prefix("p=")
                            .ok_or_else(|| parse_err("expected p=.."))?
                            .parse::<u64>()
                            .map_err(|_| parse_err("bad p"))?;
                        let coeffs = s_part
                            .split(',')
                            .map(|c| c.trim().parse::<i64>().map_err(|_| parse_err("bad coefficient")))
                            .collect::<Result<Vec<i64>>>()?;
                        MapSpec::HenselPerturb { p, coeffs }
                    }
                    "compose" => {
                        let inner = rest
                            .strip_prefix('[')
                            .and_then(|r| r.strip_suffix(']'))
                            .ok_or_else(|| parse_err("expected compose:[...]"))?;
                        let mut parts = Vec::new();
                        let mut depth = 0usize;
                        let mut start = 0usize;
                        for (i, ch) in inner.char_indices() {
                            match ch {
                                '[' => depth += 1,
                                ']' => depth = depth.saturating_sub(1),
                                ';' if depth == 0 => {
                                    parts.push(inner[start..i].parse()?);
                                    start = i + 1;
                                }
                                _ => {}
                            }
                        }
                        if start < inner.len() {
                            parts.push(inner[start..].parse()?);
                        }
                        MapSpec::Compose(parts)
                    }
                    other => return Err(parse_err(&format!("unknown map kind `{other}`"))),
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::NormValue;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    #[test]
    fn inversion_branches() {
        let f = MapSpec::Q2Inversion;
        assert_eq!(f.apply_rational(&q("3")).unwrap(), q("1/3"));
        assert_eq!(f.apply_rational(&q("4")).unwrap(), q("4"));
        assert_eq!(f.apply_rational(&q("0")).unwrap(), q("0"));
        assert_eq!(f.apply_rational(&q("1/5")).unwrap(), q("5"));
    }

    #[test]
    fn cube_fixes_one_on_the_line() {
        let line = SpaceDescriptor::TrivialLine;
        let one = SpacePoint::Trivial(q("1"));
        assert_eq!(MapSpec::Cube.apply(&line, &one).unwrap(), one);
    }

    #[test]
    fn domain_mismatches_are_errors() {
        let qp3 = SpaceDescriptor::qp_vector(3, 8, 1).unwrap();
        let x = qp3.point_from_rationals(&[q("1")]).unwrap();
        assert!(matches!(MapSpec::Cube.apply(&qp3, &x), Err(Error::DomainMismatch(_))));
        assert!(matches!(MapSpec::Q2Inversion.apply(&qp3, &x), Err(Error::DomainMismatch(_))));

        let line = SpaceDescriptor::TrivialLine;
        let y = SpacePoint::Trivial(q("1"));
        assert!(matches!(MapSpec::Q2Inversion.apply(&line, &y), Err(Error::DomainMismatch(_))));
        let hensel = MapSpec::HenselPerturb { p: 3, coeffs: vec![0, 0, 1] };
        assert!(matches!(hensel.apply(&line, &y), Err(Error::DomainMismatch(_))));
        assert!(matches!(hensel.apply_rational(&q("1/3")), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn inversion_on_truncated_q2() {
        let f = MapSpec::Q2Inversion;
        let three = PAdicNumber::from_rational(&q("3"), 2, 8).unwrap();
        let inv = f.apply_padic(&three).unwrap();
        let third = PAdicNumber::from_rational(&q("1/3"), 2, 8).unwrap();
        assert!(inv.equal_to_precision(&third, 8).unwrap());

        let four = PAdicNumber::from_rational(&q("4"), 2, 8).unwrap();
        assert_eq!(f.apply_padic(&four).unwrap(), four);
        assert_eq!(f.apply_padic(&four).unwrap().norm(), NormValue::padic(2, -2));
    }

    #[test]
    fn hensel_perturbation_examples() {
        let f = MapSpec::HenselPerturb { p: 3, coeffs: vec![0, 0, 1] };
        assert_eq!(f.apply_rational(&q("2")).unwrap(), q("14"));

        let model = SpaceDescriptor::finite_model(3, 4).unwrap();
        assert_eq!(f.apply_residue(&model, 2).unwrap(), 14);

        let x = PAdicNumber::from_rational(&q("2"), 3, 8).unwrap();
        let y = f.apply_padic(&x).unwrap();
        let expected = PAdicNumber::from_rational(&q("14"), 3, 8).unwrap();
        assert!(y.equal_to_precision(&expected, 8).unwrap());
    }

    #[test]
    fn affine_normal_forms_compose() {
        let f = MapSpec::Compose(vec![
            MapSpec::Affine { a: q("2"), b: q("1") },
            MapSpec::Translation { b: q("-3") },
            MapSpec::Affine { a: q("1/2"), b: q("0") },
        ]);
        let (a, b) = f.as_affine().unwrap();
        // x -> 2x+1 -> 2x-2 -> x-1
        assert_eq!(a, q("1"));
        assert_eq!(b, q("-1"));
        assert_eq!(f.apply_rational(&q("5")).unwrap(), q("4"));
        assert!(MapSpec::Cube.as_affine().is_none());
    }

    #[test]
    fn map_syntax_round_trips() {
        for s in [
            "affine:a=1/3,b=2",
            "cube",
            "q2inv",
            "hensel:p=3,s=0,0,1",
            "translate:b=5",
            "compose:[affine:a=2,b=0;cube]",
        ] {
            let m: MapSpec = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert!("affine:a=0,b=1".parse::<MapSpec>().is_err());
        assert!("hensel:p=4,s=1".parse::<MapSpec>().is_err());
        assert!("squared".parse::<MapSpec>().is_err());
    }
}
