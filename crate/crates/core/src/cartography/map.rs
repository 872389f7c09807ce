use std::f64::consts::PI;

use super::CartographyError;
use crate::affine::{FocusFocusDatum, PlanarPoint};
use crate::numerics::{adaptive_quad, pendulum_action, potential_minimum, EndpointSingularity, QuadratureSpec};
use crate::systems::{SemitoricSystem, SystemError};

/// Horizontal step used to read off the matching integer at the cut.
const MATCH_STEP: f64 = 1e-4;

/// Tolerance on `H⁻(x) ≤ y`.
const DOMAIN_TOL: f64 = 1e-12;

/// The numerical cartographic map `f_ε(x, y) = (x, f²(x, y))` of one system,
/// in properized image coordinates.
#[derive(Debug, Clone)]
pub struct CartographicMap<'a> {
    system: &'a SemitoricSystem,
    epsilon: Vec<i8>,
    base: PlanarPoint,
    spec: QuadratureSpec,
    matching: i64,
}

fn validate_epsilon(s: &SemitoricSystem, eps: &[i8]) -> Result<(), CartographyError> {
    if eps.len() != s.metadata.focus.len() {
        return Err(CartographyError::Epsilon(format!(
            "{} has {} focus-focus values but {} signs were given",
            s.name,
            s.metadata.focus.len(),
            eps.len()
        )));
    }
    if let Some(e) = eps.iter().find(|e| e.abs() != 1) {
        return Err(CartographyError::Epsilon(format!("sign {e} is not +1 or -1")));
    }
    Ok(())
}

/// `∂A/∂ℓ` just left and right of `ℓ = 0` at energy `e`.
fn one_sided_slopes(e: f64, spec: &QuadratureSpec) -> Result<(f64, f64), SystemError> {
    let a0 = pendulum_action(0.0, e, spec)?;
    let left = (a0 - pendulum_action(-MATCH_STEP, e, spec)?) / MATCH_STEP;
    let right = (pendulum_action(MATCH_STEP, e, spec)? - a0) / MATCH_STEP;
    Ok((left, right))
}

/// `A(0, 1) = (1/π) ∫₀^π 2 sin(θ/2) dθ`, the limit of the action at the focus.
fn focus_action(spec: &QuadratureSpec) -> Result<f64, SystemError> {
    Ok(adaptive_quad(|t| 2.0 * (0.5 * t).sin(), 0.0, PI, spec)? / PI)
}

impl<'a> CartographicMap<'a> {
    /// `base` fixes the reference sheet of the continuation; it must lie in
    /// the strip left of every cut.
    pub fn new(
        system: &'a SemitoricSystem,
        eps: &[i8],
        base: PlanarPoint,
        spec: QuadratureSpec,
    ) -> Result<Self, CartographyError> {
        validate_epsilon(system, eps)?;
        let mut map = Self {
            system,
            epsilon: eps.to_vec(),
            base,
            spec,
            matching: 0,
        };
        if system.is_pendulum() {
            let pspec = map.pendulum_spec();
            let focus = system.metadata.focus[0];
            // A regular level on the side of the focus the continuation runs through.
            let level = if eps[0] > 0 { focus.y - 1.0 } else { focus.y + 1.0 };
            let (left, right) = one_sided_slopes(level, &pspec)?;
            map.matching = (left - right).round() as i64;
        }
        Ok(map)
    }

    /// Default base point: a regular value in the leftmost strip.
    pub fn with_default_base(
        system: &'a SemitoricSystem,
        eps: &[i8],
        spec: QuadratureSpec,
    ) -> Result<Self, CartographyError> {
        let iv = system.j_image(true);
        let x = if iv.a.is_finite() { iv.a.value() + 0.25 } else { -1.0 };
        let b = system.fiber_boundaries(x, true)?;
        let y = if b.upper.is_finite() {
            0.5 * (b.lower.value() + b.upper.value())
        } else {
            b.lower.value() + 1.0
        };
        Self::new(system, eps, PlanarPoint::new(x, y), spec)
    }

    pub fn system(&self) -> &SemitoricSystem {
        self.system
    }

    pub fn epsilon(&self) -> &[i8] {
        &self.epsilon
    }

    /// Integer added to the slope of `f²` right of the cut (pendulum only).
    pub fn matching_integer(&self) -> i64 {
        self.matching
    }

    fn pendulum_spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            endpoint_singularity: EndpointSingularity::InverseSqrt,
            ..self.spec
        }
    }

    /// Focus-focus data in image coordinates, with the chosen signs.
    pub fn focus_images(&self) -> Result<Vec<FocusFocusDatum>, CartographyError> {
        self.system
            .metadata
            .focus
            .iter()
            .zip(&self.epsilon)
            .map(|(f, &e)| {
                let y = if self.system.is_pendulum() {
                    focus_action(&self.spec)?
                } else {
                    self.f2(f.x, f.y)?
                };
                Ok(FocusFocusDatum::new(f.x, y, f.multiplicity, e))
            })
            .collect()
    }

    fn check_domain(&self, x: f64, y: f64) -> Result<(), CartographyError> {
        let out = || CartographyError::OutsideDomain { x, y };
        let b = self.system.fiber_boundaries(x, true).map_err(|_| out())?;
        let lower_ok = y >= b.lower.value() - DOMAIN_TOL * (1.0 + y.abs());
        let upper_ok = if b.upper_attained {
            y <= b.upper.value() + DOMAIN_TOL * (1.0 + y.abs())
        } else {
            y < b.upper.value()
        };
        if lower_ok && upper_ok {
            Ok(())
        } else {
            Err(out())
        }
    }

    /// Second component of `f_ε` at a domain point `(x, y)`.
    pub fn f2(&self, x: f64, y: f64) -> Result<f64, CartographyError> {
        self.check_domain(x, y)?;
        if self.system.is_pendulum() {
            return self.level_value(x, y);
        }
        let z2 = self.system.unproperize(x, y)?;
        self.level_value(x, z2)
    }

    /// `f²` at a raw `(J, H)` value.
    pub fn f2_raw(&self, x: f64, h: f64) -> Result<f64, CartographyError> {
        let y = if self.system.has_properization() {
            self.system.properize(x, h)
        } else {
            h
        };
        self.check_domain(x, y)?;
        self.level_value(x, h)
    }

    /// `f²` over `x` at the raw level `h`, without the domain check; used
    /// for one-sided limits at non-attained boundary levels.
    pub(crate) fn level_value(&self, x: f64, h: f64) -> Result<f64, CartographyError> {
        let s = self.system;
        if !s.is_pendulum() {
            return Ok(s.cumulative_volume(x, h, &self.spec)?);
        }
        let focus = s.metadata.focus[0];
        let a = if (x - focus.x).abs() <= f64::EPSILON && (h - focus.y).abs() <= f64::EPSILON {
            focus_action(&self.spec)?
        } else {
            // Roundoff below the minimum is clamped to the circular orbit.
            let (_, umin) = potential_minimum(x);
            pendulum_action(x, h.max(umin), &self.pendulum_spec())?
        };
        let right = |t: f64| if t > focus.x { 1.0 } else { 0.0 };
        let sheet = right(x) - right(self.base.x);
        Ok(a + self.matching as f64 * (x - focus.x) * sheet)
    }

    pub fn apply(&self, p: PlanarPoint) -> Result<PlanarPoint, CartographyError> {
        Ok(PlanarPoint::new(p.x, self.f2(p.x, p.y)?))
    }
}

/// `f_ε(p)` with continuation sheet fixed by `base`.
pub fn action_map(
    s: &SemitoricSystem,
    eps: &[i8],
    p: PlanarPoint,
    base: PlanarPoint,
) -> Result<PlanarPoint, CartographyError> {
    CartographicMap::new(s, eps, base, QuadratureSpec::default())?.apply(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{make_system, SystemParams};

    fn sys(name: &str) -> SemitoricSystem {
        make_system(name, &SystemParams::default()).unwrap()
    }

    #[test]
    fn matching_integers() {
        let s = sys("spherical_pendulum");
        let up = CartographicMap::with_default_base(&s, &[1], QuadratureSpec::default()).unwrap();
        let down = CartographicMap::with_default_base(&s, &[-1], QuadratureSpec::default()).unwrap();
        assert_eq!(up.matching_integer(), 1);
        assert_eq!(down.matching_integer(), 2);
    }

    #[test]
    fn pendulum_lower_boundary_kink() {
        let s = sys("spherical_pendulum");
        let m = CartographicMap::with_default_base(&s, &[1], QuadratureSpec::default()).unwrap();
        for x in [-1.5, -0.3, 0.0, 0.4, 1.2] {
            let (_, u) = potential_minimum(x);
            let v = m.f2(x, u).unwrap();
            assert!((v - x.max(0.0)).abs() < 1e-8, "x={x}: {v}");
        }
        let f = m.focus_images().unwrap();
        assert!((f[0].y - 4.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn continuous_below_focus_for_upward_cut() {
        let s = sys("spherical_pendulum");
        let m = CartographicMap::with_default_base(&s, &[1], QuadratureSpec::default()).unwrap();
        let d = 1e-7;
        let (l, r) = (m.f2(-d, 0.0).unwrap(), m.f2(d, 0.0).unwrap());
        assert!((l - r).abs() < 1e-5);
        let (l, r) = (m.f2(-1e-3, 2.0).unwrap(), m.f2(1e-3, 2.0).unwrap());
        assert!((l - r).abs() < 1e-2);
    }

    #[test]
    fn coupled_raw_values() {
        let s = sys("coupled_m");
        let m = CartographicMap::with_default_base(&s, &[], QuadratureSpec::default()).unwrap();
        for y in [-0.9, -0.2, 0.4, 0.95] {
            assert!((m.f2_raw(-0.5, y).unwrap() - (y + 1.0)).abs() < 1e-9);
        }
        assert!(m.f2_raw(0.0, 0.5).is_err());
        assert!(CartographicMap::with_default_base(&s, &[1], QuadratureSpec::default()).is_err());
    }

    #[test]
    fn toric_is_translation() {
        let s = sys("toric_s2s2");
        let m = CartographicMap::with_default_base(&s, &[], QuadratureSpec::default()).unwrap();
        let p = m.apply(PlanarPoint::new(0.3, 0.2)).unwrap();
        assert_eq!(p.x, 0.3);
        assert!((p.y - 1.2).abs() < 1e-12);
    }
}
