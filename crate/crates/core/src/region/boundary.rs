use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::RegionError;
use crate::affine::PlanarPoint;

/// A real number or ±∞. NaN is not representable.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub struct ExtendedReal(f64);

impl ExtendedReal {
    pub const POS_INF: ExtendedReal = ExtendedReal(f64::INFINITY);
    pub const NEG_INF: ExtendedReal = ExtendedReal(f64::NEG_INFINITY);
    pub const ZERO: ExtendedReal = ExtendedReal(0.0);

    pub fn new(v: f64) -> Option<Self> {
        (!v.is_nan()).then_some(Self(v))
    }

    /// Panics on NaN.
    pub fn from_f64(v: f64) -> Self {
        Self::new(v).expect("NaN is not an extended real")
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// Difference in extended arithmetic; `None` for `∞ − ∞` with equal signs.
    pub fn checked_sub(self, rhs: ExtendedReal) -> Option<ExtendedReal> {
        Self::new(self.0 - rhs.0)
    }

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }

    pub fn approx_eq(self, other: ExtendedReal, tol: f64) -> bool {
        if self.is_finite() && other.is_finite() {
            (self.0 - other.0).abs() <= tol
        } else {
            self.0 == other.0
        }
    }

    /// Adds a finite displacement; infinities are unchanged.
    pub fn shifted(self, dy: f64) -> ExtendedReal {
        if self.is_finite() {
            ExtendedReal(self.0 + dy)
        } else {
            self
        }
    }
}

impl From<f64> for ExtendedReal {
    fn from(v: f64) -> Self {
        Self::from_f64(v)
    }
}

impl fmt::Debug for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == f64::INFINITY {
            write!(f, "inf")
        } else if self.0 == f64::NEG_INFINITY {
            write!(f, "-inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            s.serialize_str("inf")
        } else if self.0 == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(ExtendedReal(v)),
            Raw::Str(s) => match s.as_str() {
                "inf" | "+inf" => Ok(Self::POS_INF),
                "-inf" => Ok(Self::NEG_INF),
                other => Err(serde::de::Error::custom(format!(
                    "expected a number, \"inf\" or \"-inf\", got {other:?}"
                ))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semicontinuity {
    Lower,
    Upper,
    Continuous,
}

impl Semicontinuity {
    pub fn satisfies_lower(self) -> bool {
        matches!(self, Semicontinuity::Lower | Semicontinuity::Continuous)
    }

    pub fn satisfies_upper(self) -> bool {
        matches!(self, Semicontinuity::Upper | Semicontinuity::Continuous)
    }
}

/// Convexity of a boundary. `Linear` means affine, which is both convex and concave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convexity {
    Linear,
    Convex,
    Concave,
    None,
}

impl Convexity {
    pub fn is_convex(self) -> bool {
        matches!(self, Convexity::Linear | Convexity::Convex)
    }

    pub fn is_concave(self) -> bool {
        matches!(self, Convexity::Linear | Convexity::Concave)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryData {
    /// Vertices with strictly increasing abscissae, extended linearly past both ends.
    PiecewiseLinear(Vec<PlanarPoint>),
    /// Values on a strictly increasing grid, held constant past both ends.
    Sampled { xs: Vec<f64>, ys: Vec<ExtendedReal> },
}

/// Slope changes smaller than this are treated as zero when classifying convexity.
const KINK_TOL: f64 = 1e-9;
/// Base tolerance of the grid semicontinuity probe.
const SEMICONT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryDescriptor {
    pub data: BoundaryData,
    pub semicontinuity: Semicontinuity,
    pub convexity: Convexity,
}

impl BoundaryDescriptor {
    pub fn piecewise_linear(vertices: Vec<PlanarPoint>) -> Result<Self, RegionError> {
        if vertices.is_empty() {
            return Err(RegionError::Descriptor(
                "piecewise-linear boundary needs a vertex".into(),
            ));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(RegionError::Descriptor(
                "piecewise-linear vertices must be finite".into(),
            ));
        }
        if vertices.windows(2).any(|w| w[1].x <= w[0].x) {
            return Err(RegionError::Descriptor(
                "piecewise-linear vertices must have strictly increasing x".into(),
            ));
        }
        let convexity = pl_convexity(&vertices);
        Ok(Self {
            data: BoundaryData::PiecewiseLinear(vertices),
            semicontinuity: Semicontinuity::Continuous,
            convexity,
        })
    }

    /// Horizontal line through the given abscissae.
    pub fn constant(value: f64, xs: &[f64]) -> Result<Self, RegionError> {
        Self::piecewise_linear(xs.iter().map(|&x| PlanarPoint::new(x, value)).collect())
    }

    /// A sampled boundary declared with `semicontinuity`; the declaration is
    /// probed at every grid point.
    pub fn sampled(xs: Vec<f64>, ys: Vec<ExtendedReal>, semicontinuity: Semicontinuity) -> Result<Self, RegionError> {
        if xs.is_empty() || xs.len() != ys.len() {
            return Err(RegionError::Descriptor(format!(
                "sampled boundary needs equal non-empty grids (xs={}, ys={})",
                xs.len(),
                ys.len()
            )));
        }
        if xs.iter().any(|x| !x.is_finite()) || xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(RegionError::Descriptor(
                "sampled grid must be finite and strictly increasing".into(),
            ));
        }
        let ok = match semicontinuity {
            Semicontinuity::Lower => probe_semicontinuity(&ys, Side::Lower),
            Semicontinuity::Upper => probe_semicontinuity(&ys, Side::Upper),
            Semicontinuity::Continuous => {
                probe_semicontinuity(&ys, Side::Lower) && probe_semicontinuity(&ys, Side::Upper)
            }
        };
        if !ok {
            return Err(RegionError::Descriptor(format!(
                "sampled boundary is not {semicontinuity:?}-semicontinuous at the grid"
            )));
        }
        Ok(Self {
            data: BoundaryData::Sampled { xs, ys },
            semicontinuity,
            convexity: Convexity::None,
        })
    }

    /// Picks the weakest admissible declaration: continuous if the data allow
    /// it, else the requested one-sided variant.
    pub fn sampled_inferred(
        xs: Vec<f64>,
        ys: Vec<ExtendedReal>,
        fallback: Semicontinuity,
    ) -> Result<Self, RegionError> {
        Self::sampled(xs.clone(), ys.clone(), Semicontinuity::Continuous).or_else(|_| Self::sampled(xs, ys, fallback))
    }

    pub fn infinite(value: ExtendedReal, xs: &[f64]) -> Result<Self, RegionError> {
        Self::sampled(xs.to_vec(), vec![value; xs.len()], Semicontinuity::Continuous)
    }

    pub fn is_piecewise_linear(&self) -> bool {
        matches!(self.data, BoundaryData::PiecewiseLinear(_))
    }

    pub fn vertices(&self) -> Option<&[PlanarPoint]> {
        match &self.data {
            BoundaryData::PiecewiseLinear(v) => Some(v),
            BoundaryData::Sampled { .. } => None,
        }
    }

    /// Abscissae at which the descriptor stores data.
    pub fn knots(&self) -> Vec<f64> {
        match &self.data {
            BoundaryData::PiecewiseLinear(v) => v.iter().map(|p| p.x).collect(),
            BoundaryData::Sampled { xs, .. } => xs.clone(),
        }
    }

    pub fn eval(&self, x: f64) -> ExtendedReal {
        match &self.data {
            BoundaryData::PiecewiseLinear(v) => ExtendedReal::from_f64(eval_pl(v, x)),
            BoundaryData::Sampled { xs, ys } => eval_sampled(xs, ys, x),
        }
    }

    /// Whether the boundary is `±∞` everywhere.
    pub fn infinite_sign(&self) -> Option<ExtendedReal> {
        match &self.data {
            BoundaryData::Sampled { ys, .. } if ys.iter().all(|y| *y == ExtendedReal::POS_INF) => {
                Some(ExtendedReal::POS_INF)
            }
            BoundaryData::Sampled { ys, .. } if ys.iter().all(|y| *y == ExtendedReal::NEG_INF) => {
                Some(ExtendedReal::NEG_INF)
            }
            _ => None,
        }
    }

    /// Adds `offset(x)` to the boundary. Piecewise-linear data get extra
    /// vertices at the offset's breakpoints inside `(lo, hi)`.
    pub fn shifted_by(&self, offset: impl Fn(f64) -> f64, breakpoints: &[f64], lo: f64, hi: f64) -> BoundaryDescriptor {
        match &self.data {
            BoundaryData::PiecewiseLinear(v) => {
                let mut verts = v.clone();
                for &b in breakpoints {
                    if b <= lo || b >= hi {
                        continue;
                    }
                    insert_breakpoint(&mut verts, b);
                }
                let verts: Vec<PlanarPoint> = verts
                    .into_iter()
                    .map(|p| PlanarPoint::new(p.x, p.y + offset(p.x)))
                    .collect();
                let convexity = pl_convexity(&verts);
                BoundaryDescriptor {
                    data: BoundaryData::PiecewiseLinear(verts),
                    semicontinuity: Semicontinuity::Continuous,
                    convexity,
                }
            }
            BoundaryData::Sampled { xs, ys } => BoundaryDescriptor {
                data: BoundaryData::Sampled {
                    xs: xs.clone(),
                    ys: xs.iter().zip(ys).map(|(&x, y)| y.shifted(offset(x))).collect(),
                },
                semicontinuity: self.semicontinuity,
                convexity: Convexity::None,
            },
        }
    }
}

fn insert_breakpoint(verts: &mut Vec<PlanarPoint>, b: f64) {
    let tol = 1e-12;
    if verts.iter().any(|p| (p.x - b).abs() <= tol) {
        return;
    }
    let first = verts[0].x;
    let last = verts[verts.len() - 1].x;
    if b < first {
        let y = eval_pl(verts, b);
        let y_left = eval_pl(verts, b - 1.0);
        verts.insert(0, PlanarPoint::new(b, y));
        verts.insert(0, PlanarPoint::new(b - 1.0, y_left));
    } else if b > last {
        let y = eval_pl(verts, b);
        let y_right = eval_pl(verts, b + 1.0);
        verts.push(PlanarPoint::new(b, y));
        verts.push(PlanarPoint::new(b + 1.0, y_right));
    } else {
        let y = eval_pl(verts, b);
        let idx = verts.partition_point(|p| p.x < b);
        verts.insert(idx, PlanarPoint::new(b, y));
    }
}

pub(crate) fn eval_pl(v: &[PlanarPoint], x: f64) -> f64 {
    if v.len() == 1 {
        return v[0].y;
    }
    let i = v.partition_point(|p| p.x <= x).clamp(1, v.len() - 1);
    let (a, b) = (v[i - 1], v[i]);
    a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x)
}

fn eval_sampled(xs: &[f64], ys: &[ExtendedReal], x: f64) -> ExtendedReal {
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[xs.len() - 1] {
        return ys[ys.len() - 1];
    }
    let i = xs.partition_point(|&t| t <= x);
    let (x0, x1) = (xs[i - 1], xs[i]);
    let (y0, y1) = (ys[i - 1], ys[i]);
    if x == x0 {
        return y0;
    }
    match (y0.is_finite(), y1.is_finite()) {
        (true, true) => {
            let t = (x - x0) / (x1 - x0);
            ExtendedReal::from_f64(y0.value() + t * (y1.value() - y0.value()))
        }
        (true, false) => y1,
        (false, true) => y0,
        (false, false) => {
            if y0 == y1 {
                y0
            } else {
                // ±∞ on either side; the point value is not determined by the grid.
                if (x - x0) <= (x1 - x) {
                    y0
                } else {
                    y1
                }
            }
        }
    }
}

pub(crate) fn pl_slopes(v: &[PlanarPoint]) -> Vec<f64> {
    v.windows(2).map(|w| (w[1].y - w[0].y) / (w[1].x - w[0].x)).collect()
}

fn pl_convexity(v: &[PlanarPoint]) -> Convexity {
    let slopes = pl_slopes(v);
    let mut up = false;
    let mut down = false;
    for w in slopes.windows(2) {
        let d = w[1] - w[0];
        let scale = 1.0 + w[0].abs().max(w[1].abs());
        if d > KINK_TOL * scale {
            up = true;
        } else if d < -KINK_TOL * scale {
            down = true;
        }
    }
    match (up, down) {
        (false, false) => Convexity::Linear,
        (true, false) => Convexity::Convex,
        (false, true) => Convexity::Concave,
        (true, true) => Convexity::None,
    }
}

#[derive(Clone, Copy)]
enum Side {
    Lower,
    Upper,
}

/// One-sided limit at index `i` estimated by linear extrapolation from the
/// two preceding (or following) samples, with a slack for the curvature of
/// the samples it was extrapolated from.
fn one_sided_limit(ys: &[ExtendedReal], i: usize, left: bool) -> Option<(ExtendedReal, f64)> {
    let idx = |k: usize| -> Option<ExtendedReal> {
        if left {
            i.checked_sub(k).map(|j| ys[j])
        } else {
            ys.get(i + k).copied()
        }
    };
    let y1 = idx(1)?;
    let y2 = idx(2)?;
    if !y1.is_finite() || !y2.is_finite() {
        return Some((y1, 0.0));
    }
    match idx(3) {
        Some(y3) if y3.is_finite() => Some((
            ExtendedReal::from_f64(2.0 * y1.value() - y2.value()),
            2.0 * (y1.value() - 2.0 * y2.value() + y3.value()).abs(),
        )),
        // Too few finite neighbours for a curvature estimate on this side.
        _ => None,
    }
}

fn probe_semicontinuity(ys: &[ExtendedReal], side: Side) -> bool {
    (0..ys.len()).all(|i| {
        let yi = ys[i];
        [true, false].into_iter().all(|left| {
            let Some((lim, slack)) = one_sided_limit(ys, i, left) else {
                return true;
            };
            let tol = SEMICONT_TOL * (1.0 + if yi.is_finite() { yi.value().abs() } else { 0.0 }) + slack;
            match side {
                // f(x) ≤ liminf
                Side::Lower => {
                    if yi == ExtendedReal::NEG_INF || lim == ExtendedReal::POS_INF {
                        true
                    } else if !yi.is_finite() || !lim.is_finite() {
                        yi <= lim
                    } else {
                        yi.value() <= lim.value() + tol
                    }
                }
                // f(x) ≥ limsup
                Side::Upper => {
                    if yi == ExtendedReal::POS_INF || lim == ExtendedReal::NEG_INF {
                        true
                    } else if !yi.is_finite() || !lim.is_finite() {
                        yi >= lim
                    } else {
                        yi.value() >= lim.value() - tol
                    }
                }
            }
        })
    })
}
