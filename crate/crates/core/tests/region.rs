use cartograph::affine::{CutShear, PiecewiseShear, PlanarPoint, TauElement};
use cartograph::region::{
    classify_region, construct_region, find_equivalence, region_from_json, region_to_json, regions_equivalent,
    slice_length, BoundaryDescriptor, CartographicRegion, ExtendedReal, Inclusion, Interval, RegionCandidate,
    Semicontinuity, TypeTag,
};
use proptest::prelude::*;

fn pl(v: &[(f64, f64)]) -> BoundaryDescriptor {
    BoundaryDescriptor::piecewise_linear(v.iter().map(|&(x, y)| PlanarPoint::new(x, y)).collect()).unwrap()
}

fn polygon(lower: &[(f64, f64)], upper: &[(f64, f64)]) -> CartographicRegion {
    let a = lower[0].0;
    let b = lower[lower.len() - 1].0;
    let strip = construct_region(
        Interval::closed(a, b),
        TypeTag::I,
        pl(lower),
        pl(upper),
        Inclusion::Closed,
        Inclusion::Closed,
    )
    .unwrap();
    CartographicRegion::new("polygon", vec![strip])
}

fn square() -> CartographicRegion {
    polygon(&[(0.0, 0.0), (1.0, 0.0)], &[(0.0, 1.0), (1.0, 1.0)])
}

fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
}

#[test]
fn pendulum_left_strip_is_type_ii() {
    let xs = grid(-3.0, 0.0, 6);
    let interval = Interval::new(ExtendedReal::NEG_INF, ExtendedReal::ZERO, false, false).unwrap();
    let strip = construct_region(
        interval,
        TypeTag::II,
        BoundaryDescriptor::constant(0.0, &xs).unwrap(),
        BoundaryDescriptor::infinite(ExtendedReal::POS_INF, &xs).unwrap(),
        Inclusion::Closed,
        Inclusion::Open,
    )
    .unwrap();
    assert_eq!(strip.slice_length(-1.0), ExtendedReal::POS_INF);
    assert!(strip.contains_point(PlanarPoint::new(-1.0, 0.0)));
    assert!(!strip.contains_point(PlanarPoint::new(-1.0, -0.1)));
}

#[test]
fn classification_prefers_the_strongest_tag() {
    let sq = square();
    assert_eq!(classify_region(&sq.strips[0].candidate()).unwrap(), TypeTag::I);

    let xs = grid(0.0, 1.0, 10);
    let ys: Vec<ExtendedReal> = xs.iter().map(|&x| ExtendedReal::from_f64(2.0 + x * x)).collect();
    let type_ii = RegionCandidate {
        interval: Interval::closed(0.0, 1.0),
        lower: BoundaryDescriptor::constant(0.0, &xs).unwrap(),
        upper: BoundaryDescriptor::sampled(xs.clone(), ys, Semicontinuity::Lower).unwrap(),
        lower_inclusion: Inclusion::Closed,
        upper_inclusion: Inclusion::Open,
    };
    assert_eq!(classify_region(&type_ii).unwrap(), TypeTag::II);

    let open = RegionCandidate {
        interval: Interval::open(0.0, 1.0),
        lower: BoundaryDescriptor::infinite(ExtendedReal::NEG_INF, &xs).unwrap(),
        upper: BoundaryDescriptor::infinite(ExtendedReal::POS_INF, &xs).unwrap(),
        lower_inclusion: Inclusion::Open,
        upper_inclusion: Inclusion::Open,
    };
    assert_eq!(classify_region(&open).unwrap(), TypeTag::IV);
}

#[test]
fn non_convex_lower_is_rejected() {
    let err = construct_region(
        Interval::closed(0.0, 2.0),
        TypeTag::I,
        pl(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]),
        pl(&[(0.0, 3.0), (2.0, 3.0)]),
        Inclusion::Closed,
        Inclusion::Closed,
    )
    .unwrap_err();
    assert!(err.to_string().contains("not convex"), "{err}");
}

#[test]
fn equivalence_examples() {
    let sq = square();
    let sheared = sq.transformed_by_tau(&TauElement::new(1, 0.0));
    let lifted = sq.transformed_by_tau(&TauElement::translation(3.0));
    let triangle = polygon(&[(0.0, 0.0), (1.0, 0.0)], &[(0.0, 1.0), (1.0, 0.0)]);
    assert!(regions_equivalent(&sq, &sheared));
    assert!(regions_equivalent(&sq, &lifted));
    assert!(!regions_equivalent(&sq, &triangle));
    let w = find_equivalence(&sq, &sheared).unwrap();
    assert!(!w.is_identity());
}

#[test]
fn equivalence_is_an_equivalence_relation() {
    let catalog = [
        square(),
        square().transformed_by_tau(&TauElement::new(-2, 1.5)),
        polygon(&[(0.0, 0.0), (1.0, 0.0)], &[(0.0, 1.0), (1.0, 0.0)]),
        polygon(&[(0.0, 0.0), (2.0, 0.0)], &[(0.0, 1.0), (2.0, 1.0)]),
    ];
    for a in &catalog {
        assert!(regions_equivalent(a, a));
        for b in &catalog {
            assert_eq!(regions_equivalent(a, b), regions_equivalent(b, a));
            for c in &catalog {
                if regions_equivalent(a, b) && regions_equivalent(b, c) {
                    assert!(regions_equivalent(a, c));
                }
            }
        }
    }
}

#[test]
fn slice_length_outside_every_strip_is_an_error() {
    let sq = square();
    assert_eq!(slice_length(&sq, 0.5).unwrap(), ExtendedReal::from_f64(1.0));
    assert!(slice_length(&sq, 1.5).is_err());
}

#[test]
fn schema_uses_infinity_sentinels() {
    let xs = grid(0.0, 1.0, 4);
    let strip = construct_region(
        Interval::open(0.0, 1.0),
        TypeTag::IV,
        BoundaryDescriptor::infinite(ExtendedReal::NEG_INF, &xs).unwrap(),
        BoundaryDescriptor::infinite(ExtendedReal::POS_INF, &xs).unwrap(),
        Inclusion::Open,
        Inclusion::Open,
    )
    .unwrap();
    let r = CartographicRegion::new("open", vec![strip]);
    let doc = region_to_json(&r);
    let v: serde_json::Value = serde_json::from_str(&doc).unwrap();
    let strip = &v["strips"][0];
    assert_eq!(strip["type"], "IV");
    assert_eq!(strip["upper"]["kind"], "sampled");
    assert_eq!(strip["upper"]["ys"][0], "inf");
    assert_eq!(strip["lower"]["ys"][0], "-inf");
    assert_eq!(region_from_json(&doc).unwrap(), r);
}

#[test]
fn schema_rejects_malformed_documents() {
    assert!(region_from_json("{}").is_err());
    let doc = region_to_json(&square()).replace("\"I\"", "\"V\"");
    assert!(region_from_json(&doc).is_err());
}

type Polygon = (Vec<(f64, f64)>, Vec<(f64, f64)>);

fn concave_polygon() -> impl Strategy<Value = Polygon> {
    (1i32..5, 0i32..4, 0i32..4, 4i32..8, 0i32..4).prop_map(|(a, b, c, h, d)| {
        let lower = vec![(0.0, a as f64), (1.0, 0.0), (2.0, b as f64 + c as f64)];
        let upper = vec![
            (0.0, h as f64 + a as f64),
            (1.0, h as f64 + 4.0 + a as f64 + d as f64),
            (2.0, h as f64 + 8.0),
        ];
        (lower, upper)
    })
}

proptest! {
    #[test]
    fn round_trip_preserves_regions((lower, upper) in concave_polygon(), k in -3i64..4) {
        let r = polygon(&lower, &upper).transformed_by_tau(&TauElement::new(k, 0.25));
        let back = region_from_json(&region_to_json(&r)).unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn shears_preserve_slice_lengths((lower, upper) in concave_polygon(), u in -3i64..4, line in 0i32..9, x in 0i32..21) {
        let r = polygon(&lower, &upper);
        let shear = PiecewiseShear::from_cuts(vec![CutShear::new(u, line as f64 / 4.0)]);
        let moved = r.apply_shear(&shear);
        let x = x as f64 / 10.0;
        let a = r.slice_length(x).unwrap().value();
        let b = moved.slice_length(x).unwrap().value();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn avoiding_shears_keep_the_type((lower, upper) in concave_polygon(), u in -3i64..4, left in prop::bool::ANY) {
        let r = polygon(&lower, &upper);
        let line = if left { -0.5 } else { 2.5 };
        let moved = r.apply_shear(&PiecewiseShear::from_cuts(vec![CutShear::new(u, line)]));
        prop_assert_eq!(classify_region(&moved.strips[0].candidate()).unwrap(), TypeTag::I);
    }

    #[test]
    fn type_i_slices_are_concave((lower, upper) in concave_polygon(), i in 1i32..19) {
        let r = polygon(&lower, &upper);
        let (x0, x1, x2) = ((i - 1) as f64 / 10.0, i as f64 / 10.0, (i + 1) as f64 / 10.0);
        let l = |x| r.slice_length(x).unwrap().value();
        prop_assert!(l(x1) >= 0.5 * (l(x0) + l(x2)) - 1e-12);
    }

    #[test]
    fn construction_then_classification_returns_the_tag((lower, upper) in concave_polygon()) {
        let r = polygon(&lower, &upper);
        prop_assert_eq!(classify_region(&r.strips[0].candidate()).unwrap(), r.strips[0].type_tag);
    }
}
