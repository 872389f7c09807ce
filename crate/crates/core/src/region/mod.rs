//! Typed planar strips and the cartographic regions assembled from them.
//!
//! A strip lives over an interval of the first coordinate and is bounded by
//! a lower and an upper [`BoundaryDescriptor`]. Its type tag records which
//! of the four admissible shapes it has:
//!
//! | tag | lower                         | upper                          |
//! |-----|-------------------------------|--------------------------------|
//! | I   | closed, PL convex             | closed, PL concave             |
//! | II  | closed, PL convex             | open, lower semicontinuous     |
//! | III | open, upper semicontinuous    | closed, PL concave             |
//! | IV  | open, upper semicontinuous    | open, lower semicontinuous     |
//!
//! Zero-width strips (a single abscissa) are allowed; they carry the fibre
//! over a cut line or a slit.

mod boundary;
mod equivalence;
mod schema;

pub use boundary::{BoundaryData, BoundaryDescriptor, Convexity, ExtendedReal, Semicontinuity};
pub use equivalence::{find_equivalence, regions_equivalent, EquivalenceWitness, REGION_TOL};
pub use schema::{region_from_json, region_to_json, RegionDocument};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::affine::{FocusFocusDatum, PiecewiseShear, PlanarPoint, TauElement};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegionError {
    #[error("invalid boundary descriptor: {0}")]
    Descriptor(String),
    #[error("invalid interval: {0}")]
    Interval(String),
    #[error("type {tag} invariant violated: {clause}")]
    Invariant { tag: TypeTag, clause: String },
    #[error("no region type matches the candidate ({0})")]
    Unclassifiable(String),
    #[error("abscissa {0} lies outside every strip")]
    OutsideStrips(f64),
    #[error("malformed region document: {0}")]
    Schema(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TypeTag {
    I,
    II,
    III,
    IV,
}

impl std::fmt::Display for TypeTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TypeTag::I => "I",
            TypeTag::II => "II",
            TypeTag::III => "III",
            TypeTag::IV => "IV",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Inclusion {
    Closed,
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub a: ExtendedReal,
    pub b: ExtendedReal,
    pub include_a: bool,
    pub include_b: bool,
}

impl Interval {
    pub fn new(a: ExtendedReal, b: ExtendedReal, include_a: bool, include_b: bool) -> Result<Self, RegionError> {
        if a > b {
            return Err(RegionError::Interval(format!("left end {a} exceeds right end {b}")));
        }
        if a == b && !(include_a && include_b) {
            return Err(RegionError::Interval(format!(
                "degenerate interval at {a} must be closed"
            )));
        }
        if (a == ExtendedReal::NEG_INF && include_a) || (b == ExtendedReal::POS_INF && include_b) {
            return Err(RegionError::Interval("infinite ends cannot be included".into()));
        }
        if a == ExtendedReal::POS_INF || b == ExtendedReal::NEG_INF {
            return Err(RegionError::Interval("interval is empty".into()));
        }
        Ok(Self {
            a,
            b,
            include_a,
            include_b,
        })
    }

    pub fn closed(a: f64, b: f64) -> Self {
        Self::new(a.into(), b.into(), true, true).expect("closed interval")
    }

    pub fn open(a: f64, b: f64) -> Self {
        Self::new(a.into(), b.into(), false, false).expect("open interval")
    }

    pub fn point(x: f64) -> Self {
        Self::closed(x, x)
    }

    pub fn is_point(&self) -> bool {
        self.a == self.b
    }

    pub fn contains(&self, x: f64) -> bool {
        let x = ExtendedReal::from_f64(x);
        let left = if self.include_a { x >= self.a } else { x > self.a };
        let right = if self.include_b { x <= self.b } else { x < self.b };
        left && right
    }

    pub fn contains_interior(&self, x: f64) -> bool {
        let x = ExtendedReal::from_f64(x);
        x > self.a && x < self.b
    }

    pub fn approx_eq(&self, other: &Interval, tol: f64) -> bool {
        self.a.approx_eq(other.a, tol)
            && self.b.approx_eq(other.b, tol)
            && self.include_a == other.include_a
            && self.include_b == other.include_b
    }
}

/// Boundary data and inclusion flags without a type tag.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionCandidate {
    pub interval: Interval,
    pub lower: BoundaryDescriptor,
    pub upper: BoundaryDescriptor,
    pub lower_inclusion: Inclusion,
    pub upper_inclusion: Inclusion,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypedRegion {
    pub interval: Interval,
    pub type_tag: TypeTag,
    pub lower: BoundaryDescriptor,
    pub upper: BoundaryDescriptor,
    pub lower_inclusion: Inclusion,
    pub upper_inclusion: Inclusion,
}

const ORDER_TOL: f64 = 1e-9;

fn check_tag(c: &RegionCandidate, tag: TypeTag) -> Result<(), RegionError> {
    let fail = |clause: &str| {
        Err(RegionError::Invariant {
            tag,
            clause: clause.to_string(),
        })
    };
    let (lo, up) = (&c.lower, &c.upper);
    match tag {
        TypeTag::I => {
            if !lo.is_piecewise_linear() {
                return fail("type I lower not piecewise linear");
            }
            if !up.is_piecewise_linear() {
                return fail("type I upper not piecewise linear");
            }
            if !lo.convexity.is_convex() {
                return fail("type I lower not convex");
            }
            if !up.convexity.is_concave() {
                return fail("type I upper not concave");
            }
            if c.lower_inclusion != Inclusion::Closed || c.upper_inclusion != Inclusion::Closed {
                return fail("type I boundaries must both be closed");
            }
        }
        TypeTag::II => {
            if !lo.is_piecewise_linear() {
                return fail("type II lower not piecewise linear");
            }
            if !lo.convexity.is_convex() {
                return fail("type II lower not convex");
            }
            if c.lower_inclusion != Inclusion::Closed {
                return fail("type II lower must be closed");
            }
            if !up.semicontinuity.satisfies_lower() {
                return fail("type II upper not lower semicontinuous");
            }
            if c.upper_inclusion != Inclusion::Open {
                return fail("type II upper must be open");
            }
        }
        TypeTag::III => {
            if !up.is_piecewise_linear() {
                return fail("type III upper not piecewise linear");
            }
            if !up.convexity.is_concave() {
                return fail("type III upper not concave");
            }
            if c.upper_inclusion != Inclusion::Closed {
                return fail("type III upper must be closed");
            }
            if !lo.semicontinuity.satisfies_upper() {
                return fail("type III lower not upper semicontinuous");
            }
            if c.lower_inclusion != Inclusion::Open {
                return fail("type III lower must be open");
            }
        }
        TypeTag::IV => {
            if c.lower_inclusion != Inclusion::Open || c.upper_inclusion != Inclusion::Open {
                return fail("type IV boundaries must both be open");
            }
            if !lo.semicontinuity.satisfies_upper() {
                return fail("type IV lower not upper semicontinuous");
            }
            if !up.semicontinuity.satisfies_lower() {
                return fail("type IV upper not lower semicontinuous");
            }
        }
    }
    if lo.infinite_sign() == Some(ExtendedReal::POS_INF) || up.infinite_sign() == Some(ExtendedReal::NEG_INF) {
        return fail("boundaries are infinite on the wrong side");
    }
    for x in probe_points(&c.interval, lo, up) {
        let (l, u) = (lo.eval(x), up.eval(x));
        let bad = if l.is_finite() && u.is_finite() {
            l.value() > u.value() + ORDER_TOL * (1.0 + u.value().abs())
        } else {
            l > u
        };
        if bad {
            return fail(&format!("lower exceeds upper at x={x}"));
        }
    }
    Ok(())
}

fn probe_points(iv: &Interval, lo: &BoundaryDescriptor, up: &BoundaryDescriptor) -> Vec<f64> {
    let mut xs: Vec<f64> = lo
        .knots()
        .into_iter()
        .chain(up.knots())
        .filter(|&x| iv.contains(x))
        .collect();
    if iv.a.is_finite() && iv.include_a {
        xs.push(iv.a.value());
    }
    if iv.b.is_finite() && iv.include_b {
        xs.push(iv.b.value());
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mids: Vec<f64> = xs.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    xs.extend(mids);
    xs
}

/// Validates the descriptors against the invariants of `type_tag`.
pub fn construct_region(
    interval: Interval,
    type_tag: TypeTag,
    lower: BoundaryDescriptor,
    upper: BoundaryDescriptor,
    lower_inclusion: Inclusion,
    upper_inclusion: Inclusion,
) -> Result<TypedRegion, RegionError> {
    let candidate = RegionCandidate {
        interval,
        lower,
        upper,
        lower_inclusion,
        upper_inclusion,
    };
    check_tag(&candidate, type_tag)?;
    Ok(TypedRegion {
        interval: candidate.interval,
        type_tag,
        lower: candidate.lower,
        upper: candidate.upper,
        lower_inclusion,
        upper_inclusion,
    })
}

/// First matching tag in the order I, II, III, IV.
pub fn classify_region(candidate: &RegionCandidate) -> Result<TypeTag, RegionError> {
    let mut reasons = Vec::new();
    for tag in [TypeTag::I, TypeTag::II, TypeTag::III, TypeTag::IV] {
        match check_tag(candidate, tag) {
            Ok(()) => return Ok(tag),
            Err(e) => reasons.push(e.to_string()),
        }
    }
    Err(RegionError::Unclassifiable(reasons.join("; ")))
}

impl TypedRegion {
    pub fn candidate(&self) -> RegionCandidate {
        RegionCandidate {
            interval: self.interval,
            lower: self.lower.clone(),
            upper: self.upper.clone(),
            lower_inclusion: self.lower_inclusion,
            upper_inclusion: self.upper_inclusion,
        }
    }

    /// Vertical length of the slice at `x`; zero for empty slices.
    pub fn slice_length(&self, x: f64) -> ExtendedReal {
        let (l, u) = (self.lower.eval(x), self.upper.eval(x));
        match u.checked_sub(l) {
            Some(d) if d.value() > 0.0 => d,
            _ => ExtendedReal::ZERO,
        }
    }

    pub fn contains_point(&self, p: PlanarPoint) -> bool {
        if !self.interval.contains(p.x) {
            return false;
        }
        let y = ExtendedReal::from_f64(p.y);
        let (l, u) = (self.lower.eval(p.x), self.upper.eval(p.x));
        let above = match self.lower_inclusion {
            Inclusion::Closed => y >= l,
            Inclusion::Open => y > l,
        };
        let below = match self.upper_inclusion {
            Inclusion::Closed => y <= u,
            Inclusion::Open => y < u,
        };
        above && below
    }

    pub fn apply_shear(&self, shear: &PiecewiseShear) -> TypedRegion {
        let bps = shear.breakpoints();
        let off = |x: f64| shear.offset(x);
        let (lo, hi) = (self.interval.a.value(), self.interval.b.value());
        TypedRegion {
            interval: self.interval,
            type_tag: self.type_tag,
            lower: self.lower.shifted_by(off, &bps, lo, hi),
            upper: self.upper.shifted_by(off, &bps, lo, hi),
            lower_inclusion: self.lower_inclusion,
            upper_inclusion: self.upper_inclusion,
        }
    }
}

/// A union of typed strips with disjoint interval interiors, the focus data
/// (as image points) and the group element applied by normalization so far.
#[derive(Debug, Clone, PartialEq)]
pub struct CartographicRegion {
    pub system: String,
    pub epsilon: Vec<i8>,
    pub focus: Vec<FocusFocusDatum>,
    pub strips: Vec<TypedRegion>,
    pub anchor: TauElement,
}

impl CartographicRegion {
    pub fn new(system: impl Into<String>, strips: Vec<TypedRegion>) -> Self {
        Self {
            system: system.into(),
            epsilon: Vec::new(),
            focus: Vec::new(),
            strips,
            anchor: TauElement::IDENTITY,
        }
    }

    pub fn with_focus(mut self, focus: Vec<FocusFocusDatum>) -> Self {
        self.epsilon = focus.iter().map(|f| f.sign).collect();
        self.focus = focus;
        self
    }

    /// First vertex and first-segment slope of the leftmost piecewise-linear
    /// lower boundary.
    pub fn normalization_anchor(&self) -> Option<(PlanarPoint, f64)> {
        let mut single = None;
        for s in &self.strips {
            if let Some(v) = s.lower.vertices() {
                if v.len() >= 2 {
                    let slope = (v[1].y - v[0].y) / (v[1].x - v[0].x);
                    return Some((v[0], slope));
                }
                if single.is_none() {
                    single = Some((v[0], 0.0));
                }
            }
        }
        single
    }

    pub fn apply_shear(&self, shear: &PiecewiseShear) -> CartographicRegion {
        CartographicRegion {
            system: self.system.clone(),
            epsilon: self.epsilon.clone(),
            focus: self
                .focus
                .iter()
                .map(|f| {
                    let q = shear.apply(PlanarPoint::new(f.x, f.y));
                    FocusFocusDatum { y: q.y, ..*f }
                })
                .collect(),
            strips: self.strips.iter().map(|s| s.apply_shear(shear)).collect(),
            anchor: shear.global.compose(&self.anchor),
        }
    }

    pub fn transformed_by_tau(&self, tau: &TauElement) -> CartographicRegion {
        self.apply_shear(&PiecewiseShear::identity().with_global(*tau))
    }

    /// Strip owning `x`; a zero-width strip at `x` wins over its neighbours.
    pub fn strip_at(&self, x: f64) -> Option<&TypedRegion> {
        self.strips
            .iter()
            .find(|s| s.interval.is_point() && s.interval.contains(x))
            .or_else(|| self.strips.iter().find(|s| s.interval.contains(x)))
    }

    pub fn slice_length(&self, x: f64) -> Result<ExtendedReal, RegionError> {
        self.strip_at(x)
            .map(|s| s.slice_length(x))
            .ok_or(RegionError::OutsideStrips(x))
    }

    pub fn contains_point(&self, p: PlanarPoint) -> bool {
        self.strips.iter().any(|s| s.contains_point(p))
    }

    pub fn type_tags(&self) -> Vec<TypeTag> {
        self.strips.iter().map(|s| s.type_tag).collect()
    }

    /// Maximal segments `(x_start, x_end, slope)` of the piecewise-linear
    /// lower boundary, merging adjacent strips whose slopes agree within `tol`.
    pub fn lower_boundary_segments(&self, tol: f64) -> Vec<(f64, f64, f64)> {
        let mut segs: Vec<(f64, f64, f64)> = Vec::new();
        for s in self.strips.iter().filter(|s| !s.interval.is_point()) {
            let Some(v) = s.lower.vertices() else { continue };
            for w in v.windows(2) {
                let slope = (w[1].y - w[0].y) / (w[1].x - w[0].x);
                match segs.last_mut() {
                    Some(last) if (last.2 - slope).abs() <= tol => last.1 = w[1].x,
                    _ => segs.push((w[0].x, w[1].x, slope)),
                }
            }
        }
        segs
    }
}

/// Slice length of a whole region at `x`.
pub fn slice_length(region: &CartographicRegion, x: f64) -> Result<ExtendedReal, RegionError> {
    region.slice_length(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> TypedRegion {
        construct_region(
            Interval::closed(0.0, 1.0),
            TypeTag::I,
            BoundaryDescriptor::constant(0.0, &[0.0, 1.0]).unwrap(),
            BoundaryDescriptor::constant(1.0, &[0.0, 1.0]).unwrap(),
            Inclusion::Closed,
            Inclusion::Closed,
        )
        .unwrap()
    }

    fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn construct_examples() {
        let sq = unit_square();
        assert_eq!(sq.slice_length(0.5).value(), 1.0);

        let left = construct_region(
            Interval::new(ExtendedReal::NEG_INF, 0.0.into(), false, false).unwrap(),
            TypeTag::II,
            BoundaryDescriptor::constant(0.0, &[-5.0, 0.0]).unwrap(),
            BoundaryDescriptor::infinite(ExtendedReal::POS_INF, &grid(-5.0, 0.0, 11)).unwrap(),
            Inclusion::Closed,
            Inclusion::Open,
        )
        .unwrap();
        assert_eq!(left.slice_length(-2.0), ExtendedReal::POS_INF);

        let open = construct_region(
            Interval::open(0.0, 1.0),
            TypeTag::IV,
            BoundaryDescriptor::infinite(ExtendedReal::NEG_INF, &[0.0, 1.0]).unwrap(),
            BoundaryDescriptor::infinite(ExtendedReal::POS_INF, &[0.0, 1.0]).unwrap(),
            Inclusion::Open,
            Inclusion::Open,
        )
        .unwrap();
        assert_eq!(open.slice_length(0.5), ExtendedReal::POS_INF);
    }

    #[test]
    fn invariant_violations_name_the_clause() {
        let concave_lower = BoundaryDescriptor::piecewise_linear(vec![
            PlanarPoint::new(0.0, 0.0),
            PlanarPoint::new(0.5, 0.5),
            PlanarPoint::new(1.0, 0.0),
        ])
        .unwrap();
        let err = construct_region(
            Interval::closed(0.0, 1.0),
            TypeTag::II,
            concave_lower,
            BoundaryDescriptor::constant(2.0, &[0.0, 1.0]).unwrap(),
            Inclusion::Closed,
            Inclusion::Open,
        )
        .unwrap_err();
        assert!(err.to_string().contains("type II lower not convex"), "{err}");

        let err = construct_region(
            Interval::closed(0.0, 1.0),
            TypeTag::I,
            BoundaryDescriptor::constant(1.0, &[0.0, 1.0]).unwrap(),
            BoundaryDescriptor::constant(0.0, &[0.0, 1.0]).unwrap(),
            Inclusion::Closed,
            Inclusion::Closed,
        )
        .unwrap_err();
        assert!(err.to_string().contains("lower exceeds upper"), "{err}");
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_region(&unit_square().candidate()).unwrap(), TypeTag::I);

        let xs = grid(0.0, 1.0, 21);
        let upper: Vec<ExtendedReal> = xs.iter().map(|&x| (2.0 + x * x).into()).collect();
        let c = RegionCandidate {
            interval: Interval::closed(0.0, 1.0),
            lower: BoundaryDescriptor::constant(0.0, &[0.0, 1.0]).unwrap(),
            upper: BoundaryDescriptor::sampled(xs, upper, Semicontinuity::Lower).unwrap(),
            lower_inclusion: Inclusion::Closed,
            upper_inclusion: Inclusion::Open,
        };
        assert_eq!(classify_region(&c).unwrap(), TypeTag::II);

        let c = RegionCandidate {
            interval: Interval::open(0.0, 1.0),
            lower: BoundaryDescriptor::infinite(ExtendedReal::NEG_INF, &[0.0, 1.0]).unwrap(),
            upper: BoundaryDescriptor::infinite(ExtendedReal::POS_INF, &[0.0, 1.0]).unwrap(),
            lower_inclusion: Inclusion::Open,
            upper_inclusion: Inclusion::Open,
        };
        assert_eq!(classify_region(&c).unwrap(), TypeTag::IV);
    }

    #[test]
    fn slice_length_outside_and_empty() {
        let point_strip = construct_region(
            Interval::point(2.0),
            TypeTag::II,
            BoundaryDescriptor::constant(1.0, &[2.0]).unwrap(),
            BoundaryDescriptor::constant(1.0, &[2.0]).unwrap(),
            Inclusion::Closed,
            Inclusion::Open,
        )
        .unwrap();
        let r = CartographicRegion::new("t", vec![unit_square(), point_strip]);
        assert_eq!(r.slice_length(2.0).unwrap(), ExtendedReal::ZERO);
        assert_eq!(r.slice_length(3.0), Err(RegionError::OutsideStrips(3.0)));
    }

    #[test]
    fn shear_preserves_slices() {
        let r = CartographicRegion::new("sq", vec![unit_square()]);
        let s = r.apply_shear(&PiecewiseShear::from_cuts(vec![crate::affine::CutShear::new(3, 0.0)]));
        for x in [0.1, 0.4, 0.7, 1.0] {
            assert!((s.slice_length(x).unwrap().value() - 1.0).abs() < 1e-12);
        }
        assert_eq!(classify_region(&s.strips[0].candidate()).unwrap(), TypeTag::I);
    }
}
