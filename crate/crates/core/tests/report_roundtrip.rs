//! Every report type must survive a JSON round trip unchanged: parse the
//! serialized form back and re-serialize to the identical string.

use nonarch::fixed_point::{iterate_contraction, Ball};
use nonarch::gallery::run_gallery;
use nonarch::isometry::{check_additivity, check_isometry, unordered_pairs};
use nonarch::space::{check_norm_axioms, strict_convexity_witness, value_set_report, SearchSet};
use nonarch::valuation::{check_field_axioms, NormValue, Valuation};
use nonarch::{ExactRational, MapSpec, PAdicNumber, Scalar, SpaceDescriptor, SpacePoint};

fn assert_roundtrip<T>(value: &T)
where
    T: serde::Serialize + serde::de::DeserializeOwned,
{
    let first = serde_json::to_string(value).unwrap();
    let back: T = serde_json::from_str(&first).unwrap();
    let second = serde_json::to_string(&back).unwrap();
    assert_eq!(first, second);
}

fn q(s: &str) -> ExactRational {
    s.parse().unwrap()
}

#[test]
fn scalar_types_round_trip() {
    assert_roundtrip(&q("-3/8"));
    assert_roundtrip(&NormValue::padic(3, -2));
    assert_roundtrip(&NormValue::Zero);
    assert_roundtrip(&NormValue::trivial_one());
    assert_roundtrip(&PAdicNumber::from_rational(&q("1/3"), 2, 6).unwrap());
    assert_roundtrip(&PAdicNumber::exact_zero(5).unwrap());
    let fuzzy = {
        let x = PAdicNumber::from_rational(&q("7"), 3, 6).unwrap();
        x.sub(&x).unwrap()
    };
    assert_roundtrip(&fuzzy);
}

#[test]
fn reports_round_trip() {
    let sample: Vec<ExactRational> = ["0", "1", "2", "1/2"].iter().map(|s| q(s)).collect();
    assert_roundtrip(&check_field_axioms(&Valuation::padic(2).unwrap(), &sample));

    let model = SpaceDescriptor::finite_model(3, 2).unwrap();
    let scalars: Vec<Scalar> = (0..9).map(Scalar::Residue).collect();
    assert_roundtrip(&check_norm_axioms(&model, &SearchSet::Exhaustive, &scalars).unwrap());
    assert_roundtrip(&strict_convexity_witness(&model, &SearchSet::Exhaustive).unwrap());
    assert_roundtrip(&value_set_report(&model, &SearchSet::Exhaustive).unwrap());

    let pairs = unordered_pairs(&model.enumerate_points().unwrap());
    assert_roundtrip(&check_isometry(&MapSpec::Cube, &model, &pairs).unwrap());
    assert_roundtrip(&check_additivity(&MapSpec::Cube, &model, &pairs).unwrap());

    assert_roundtrip(&run_gallery(0).unwrap());

    let space = SpaceDescriptor::qp_vector(3, 12, 1).unwrap();
    let x0 = space.point_from_rationals(&[q("1")]).unwrap();
    let contraction = MapSpec::Affine { a: q("3"), b: q("1") };
    assert_roundtrip(&iterate_contraction(&contraction, &space, &x0, 8, 40).unwrap());

    assert_roundtrip(&Ball { center: SpacePoint::Residue(4), radius: NormValue::padic(3, -1) });
}
