use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::{CartographicMap, CartographyError};
use crate::affine::PlanarPoint;
use crate::numerics::QuadratureSpec;
use crate::systems::SemitoricSystem;

/// Largest admissible distance of the estimated jump from an integer.
pub const JUMP_RESIDUAL_TOL: f64 = 1e-2;

/// Slope after a vertex with isotropy weights `(a, b)` and monodromy `k`.
pub fn slope_jump_formula(weights: (i64, i64), monodromy_k: i64) -> Result<Rational64, CartographyError> {
    let (a, b) = weights;
    if a == 0 || b == 0 {
        return Err(CartographyError::ZeroWeight(a, b));
    }
    Ok(Rational64::new(-1, a * b) + Rational64::from_integer(monodromy_k))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpEstimate {
    pub left: f64,
    pub right: f64,
    pub jump: f64,
    pub k: i64,
    pub residual: f64,
}

/// One-sided `x`-derivatives of `f2` at the line through `c`, from central
/// differences at distances `2h` and `4h` extrapolated linearly to the
/// line, and the rounded difference `left − right`.
pub fn jump_from_map(
    f2: impl Fn(f64, f64) -> Result<f64, CartographyError>,
    c: PlanarPoint,
    h: f64,
) -> Result<JumpEstimate, CartographyError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(CartographyError::Resolution(format!("step {h} must be positive")));
    }
    let d = |x0: f64| -> Result<f64, CartographyError> { Ok((f2(x0 + h, c.y)? - f2(x0 - h, c.y)?) / (2.0 * h)) };
    let left = 2.0 * d(c.x - 2.0 * h)? - d(c.x - 4.0 * h)?;
    let right = 2.0 * d(c.x + 2.0 * h)? - d(c.x + 4.0 * h)?;
    let jump = left - right;
    let k = jump.round();
    let residual = (jump - k).abs();
    if residual > JUMP_RESIDUAL_TOL {
        return Err(CartographyError::JumpResidual { left, right, residual });
    }
    Ok(JumpEstimate {
        left,
        right,
        jump,
        k: k as i64,
        residual,
    })
}

/// Jump of `∂ₓf²` across the cut through `c`, in domain coordinates.
pub fn monodromy_jump_estimate(
    s: &SemitoricSystem,
    eps: &[i8],
    c: PlanarPoint,
    h_step: f64,
) -> Result<JumpEstimate, CartographyError> {
    let map = CartographicMap::with_default_base(s, eps, QuadratureSpec::default())?;
    for f in &s.metadata.focus {
        let dist = (f.x - c.x).hypot(f.y - c.y);
        if dist < 10.0 * h_step {
            return Err(CartographyError::NearFocus { x: c.x, y: c.y, dist });
        }
    }
    jump_from_map(|x, y| map.f2(x, y), c, h_step)
}

pub fn monodromy_jump_check(
    s: &SemitoricSystem,
    eps: &[i8],
    c: PlanarPoint,
    h_step: f64,
) -> Result<i64, CartographyError> {
    Ok(monodromy_jump_estimate(s, eps, c, h_step)?.k)
}
