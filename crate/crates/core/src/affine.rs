//! Vertical shears of the plane: the group generated by `T = [[1,0],[1,1]]`
//! and vertical translations, the one-sided cut maps anchored on vertical
//! lines, and the signed jump index of a family of focus-focus half-lines.
//!
//! Everything here acts only on the second coordinate: a point `(x, y)` is
//! sent to `(x, y + φ(x))` with `φ` continuous and piecewise linear. Maps of
//! that form commute, which is why a product of cuts is well defined
//! regardless of the order of its factors.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::region::CartographicRegion;

/// Tolerance used when deciding whether a point lies on a vertical line.
pub const LINE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AffineError {
    #[error("sign vector has {signs} entries but multiplicity vector has {mults}")]
    LengthMismatch { signs: usize, mults: usize },
    #[error("sign must be +1 or -1, got {0}")]
    BadSign(i32),
    #[error("region has no finite piecewise-linear lower boundary to anchor the normalization")]
    NoAnchor,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlanarPoint {
    pub x: f64,
    pub y: f64,
}

impl PlanarPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<(f64, f64)> for PlanarPoint {
    fn from((x, y): (f64, f64)) -> Self {
        Self { x, y }
    }
}

/// `(x, y) ↦ (x, k·x + y + c)`: a power of `T` followed by a vertical translation.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TauElement {
    pub k: i64,
    pub c: f64,
}

impl TauElement {
    pub const IDENTITY: TauElement = TauElement { k: 0, c: 0.0 };

    pub const fn new(k: i64, c: f64) -> Self {
        Self { k, c }
    }

    pub fn translation(c: f64) -> Self {
        Self { k: 0, c }
    }

    pub fn apply(&self, p: PlanarPoint) -> PlanarPoint {
        PlanarPoint::new(p.x, self.offset(p.x) + p.y)
    }

    /// Vertical displacement at abscissa `x`.
    pub fn offset(&self, x: f64) -> f64 {
        self.k as f64 * x + self.c
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &TauElement) -> TauElement {
        TauElement {
            k: self.k + other.k,
            c: self.c + other.c,
        }
    }

    pub fn inverse(&self) -> TauElement {
        TauElement { k: -self.k, c: -self.c }
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.k == 0 && self.c.abs() <= tol
    }
}

/// Applies `T^k`.
pub fn shear_power(k: i64, p: PlanarPoint) -> PlanarPoint {
    PlanarPoint::new(p.x, k as f64 * p.x + p.y)
}

/// The map that is the identity left of the vertical line `x = x_line` and
/// `T^u` (with origin at `(x_line, 0)`) to its right.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutShear {
    pub u: i64,
    pub x_line: f64,
}

impl CutShear {
    pub const fn new(u: i64, x_line: f64) -> Self {
        Self { u, x_line }
    }

    pub fn offset(&self, x: f64) -> f64 {
        if x <= self.x_line {
            0.0
        } else {
            self.u as f64 * (x - self.x_line)
        }
    }

    pub fn apply(&self, p: PlanarPoint) -> PlanarPoint {
        PlanarPoint::new(p.x, p.y + self.offset(p.x))
    }

    pub fn inverse(&self) -> CutShear {
        CutShear::new(-self.u, self.x_line)
    }
}

pub fn cut_shear(c: CutShear, p: PlanarPoint) -> PlanarPoint {
    c.apply(p)
}

/// A finite product of cut maps followed by an element of the group.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PiecewiseShear {
    pub cuts: Vec<CutShear>,
    pub global: TauElement,
}

impl PiecewiseShear {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_cuts(cuts: Vec<CutShear>) -> Self {
        Self {
            cuts,
            global: TauElement::IDENTITY,
        }
    }

    /// Product of cuts `t^{u_i}` on the lines `x = xs[i]`, skipping zero powers.
    pub fn from_powers(xs: &[f64], powers: &[i64]) -> Self {
        let cuts = xs
            .iter()
            .zip(powers)
            .filter(|(_, &u)| u != 0)
            .map(|(&x, &u)| CutShear::new(u, x))
            .collect();
        Self::from_cuts(cuts)
    }

    pub fn with_global(mut self, global: TauElement) -> Self {
        self.global = global;
        self
    }

    pub fn offset(&self, x: f64) -> f64 {
        self.cuts.iter().map(|c| c.offset(x)).sum::<f64>() + self.global.offset(x)
    }

    pub fn apply(&self, p: PlanarPoint) -> PlanarPoint {
        PlanarPoint::new(p.x, p.y + self.offset(p.x))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PiecewiseShear) -> PiecewiseShear {
        let mut cuts = other.cuts.clone();
        cuts.extend_from_slice(&self.cuts);
        PiecewiseShear {
            cuts,
            global: self.global.compose(&other.global),
        }
    }

    pub fn inverse(&self) -> PiecewiseShear {
        PiecewiseShear {
            cuts: self.cuts.iter().map(CutShear::inverse).collect(),
            global: self.global.inverse(),
        }
    }

    /// Abscissae where the offset may fail to be affine.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut xs: Vec<f64> = self.cuts.iter().map(|c| c.x_line).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup_by(|a, b| (*a - *b).abs() <= LINE_TOL);
        xs
    }
}

/// A focus-focus critical value together with its multiplicity and the
/// direction `sign` of its cut half-line (`+1` up, `-1` down).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FocusFocusDatum {
    pub x: f64,
    pub y: f64,
    pub multiplicity: u32,
    pub sign: i8,
}

impl FocusFocusDatum {
    pub fn new(x: f64, y: f64, multiplicity: u32, sign: i8) -> Self {
        assert!(multiplicity >= 1, "focus-focus multiplicity must be positive");
        assert!(sign == 1 || sign == -1, "cut sign must be +1 or -1");
        Self {
            x,
            y,
            multiplicity,
            sign,
        }
    }

    /// Whether `c` lies on the closed half-line `{(x, y') : sign·y' ≥ sign·y}`.
    pub fn half_line_contains(&self, c: PlanarPoint) -> bool {
        (c.x - self.x).abs() <= LINE_TOL && f64::from(self.sign) * (c.y - self.y) >= -LINE_TOL
    }

    pub fn with_sign(mut self, sign: i8) -> Self {
        self.sign = sign;
        self
    }
}

/// `k(c) = Σ ε_i k_i` over the half-lines through `c`; zero when there are none.
pub fn jump_index(c: PlanarPoint, data: &[FocusFocusDatum]) -> i64 {
    data.iter()
        .filter(|d| d.half_line_contains(c))
        .map(|d| i64::from(d.sign) * i64::from(d.multiplicity))
        .sum()
}

/// Cut powers `(1 − ε_i)/2 · k_i` induced by a sign vector.
pub fn epsilon_to_cuts(signs: &[i32], mults: &[u32]) -> Result<Vec<i64>, AffineError> {
    if signs.len() != mults.len() {
        return Err(AffineError::LengthMismatch {
            signs: signs.len(),
            mults: mults.len(),
        });
    }
    signs
        .iter()
        .zip(mults)
        .map(|(&e, &k)| match e {
            1 => Ok(0),
            -1 => Ok(i64::from(k)),
            other => Err(AffineError::BadSign(other)),
        })
        .collect()
}

/// Tolerance under which a fitted slope is treated as an integer.
const INTEGER_SLOPE_TOL: f64 = 1e-6;

/// The element of the group that brings `region` to its canonical form:
/// the first segment of the leftmost piecewise-linear lower boundary gets
/// slope zero (slope in `[0, 1)` if it is not an integer) and value zero at
/// its left vertex.
pub fn canonical_tau(region: &CartographicRegion) -> Result<TauElement, AffineError> {
    let (anchor, slope) = region.normalization_anchor().ok_or(AffineError::NoAnchor)?;
    let nearest = slope.round();
    let k = if (slope - nearest).abs() <= INTEGER_SLOPE_TOL {
        -(nearest as i64)
    } else {
        -(slope.floor() as i64)
    };
    let c = -(anchor.y + k as f64 * anchor.x);
    Ok(TauElement::new(k, c))
}

/// Canonical representative of the orbit of `region` under the group.
pub fn normalize_mod_tau(region: &CartographicRegion) -> Result<CartographicRegion, AffineError> {
    let tau = canonical_tau(region)?;
    Ok(region.transformed_by_tau(&tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: f64, y: f64) -> PlanarPoint {
        PlanarPoint::new(x, y)
    }

    /// 2×2 integer matrix power, used as an independent route to `T^k`.
    fn t_matrix_power(k: i64) -> [[i64; 2]; 2] {
        let (step, n) = if k >= 0 {
            ([[1, 0], [1, 1]], k)
        } else {
            ([[1, 0], [-1, 1]], -k)
        };
        let mut acc = [[1, 0], [0, 1]];
        for _ in 0..n {
            let mut next = [[0; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    next[i][j] = (0..2).map(|l| acc[i][l] * step[l][j]).sum();
                }
            }
            acc = next;
        }
        acc
    }

    #[test]
    fn shear_power_examples() {
        assert_eq!(shear_power(1, p(1.0, 0.0)), p(1.0, 1.0));
        assert_eq!(shear_power(5, p(0.0, 3.5)), p(0.0, 3.5));
        let m = t_matrix_power(-2);
        let expected = p((m[0][0] * 3 + m[0][1]) as f64, (m[1][0] * 3 + m[1][1]) as f64);
        assert_eq!(expected, p(3.0, -5.0));
        assert_eq!(shear_power(-2, p(3.0, 1.0)), expected);
    }

    #[test]
    fn cut_shear_examples() {
        let c = CutShear::new(1, 2.0);
        assert_eq!(cut_shear(c, p(1.0, 5.0)), p(1.0, 5.0));
        assert_eq!(cut_shear(c, p(2.0, -4.0)), p(2.0, -4.0));
        assert_eq!(cut_shear(CutShear::new(2, 0.0), p(3.0, 1.0)), p(3.0, 7.0));
    }

    #[test]
    fn jump_index_examples() {
        let d = FocusFocusDatum::new(0.0, 1.0, 2, 1);
        assert_eq!(jump_index(p(0.0, 3.0), &[d]), 2);
        assert_eq!(jump_index(p(0.0, 1.0), &[d]), 2);
        assert_eq!(jump_index(p(0.0, 0.5), &[d]), 0);
        assert_eq!(jump_index(p(0.3, 3.0), &[d]), 0);

        let up = FocusFocusDatum::new(1.0, 0.0, 2, 1);
        let down = FocusFocusDatum::new(1.0, 5.0, 3, -1);
        let c = p(1.0, 4.0);
        assert_eq!(jump_index(c, &[up, down]), 2 - 3);
        assert_eq!(jump_index(p(1.0, 6.0), &[up, down]), 2);
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_to_cuts(&[1], &[3]).unwrap(), vec![0]);
        assert_eq!(epsilon_to_cuts(&[-1], &[3]).unwrap(), vec![3]);
        assert_eq!(epsilon_to_cuts(&[1, -1, -1], &[2, 3, 1]).unwrap(), vec![0, 3, 1]);
        assert_eq!(
            epsilon_to_cuts(&[1, -1], &[2]),
            Err(AffineError::LengthMismatch { signs: 2, mults: 1 })
        );
        assert_eq!(epsilon_to_cuts(&[0], &[2]), Err(AffineError::BadSign(0)));
    }

    #[test]
    fn tau_inverse_and_identity() {
        let t = TauElement::new(3, -1.25);
        let id = t.compose(&t.inverse());
        assert!(id.is_identity(0.0));
        let q = t.apply(p(2.0, 1.0));
        assert_eq!(q, p(2.0, 1.0 + 6.0 - 1.25));
    }

    proptest! {
        #[test]
        fn shear_group_law(a in -20i64..20, b in -20i64..20, x in -50i32..50, y in -50i32..50) {
            let q = p(f64::from(x), f64::from(y));
            prop_assert_eq!(shear_power(a, shear_power(b, q)), shear_power(a + b, q));
            prop_assert_eq!(shear_power(0, q), q);
        }

        #[test]
        fn cuts_commute(
            us in proptest::collection::vec(-4i64..5, 1..6),
            xs in proptest::collection::vec(-3i32..4, 1..6),
            px in -10.0f64..10.0, py in -10.0f64..10.0,
        ) {
            let n = us.len().min(xs.len());
            let cuts: Vec<CutShear> = (0..n).map(|i| CutShear::new(us[i], f64::from(xs[i]) * 0.5)).collect();
            let forward = cuts.iter().fold(p(px, py), |acc, c| c.apply(acc));
            let backward = cuts.iter().rev().fold(p(px, py), |acc, c| c.apply(acc));
            prop_assert!((forward.y - backward.y).abs() < 1e-9);
            prop_assert_eq!(forward.x, px);
        }

        #[test]
        fn cut_is_continuous_homeomorphism(u in -5i64..6, line in -3.0f64..3.0, y in -5.0f64..5.0) {
            let c = CutShear::new(u, line);
            let eps = 1e-9;
            let left = c.apply(p(line - eps, y));
            let right = c.apply(p(line + eps, y));
            prop_assert!((left.y - right.y).abs() < 1e-7);
            let back = c.inverse().apply(c.apply(p(line + 1.5, y)));
            prop_assert!((back.y - y).abs() < 1e-12);
        }
    }
}
