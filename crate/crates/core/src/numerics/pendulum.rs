//! One-degree-of-freedom reduction of the spherical pendulum at fixed
//! angular momentum `ell`, in the polar angle `θ` measured from the north
//! pole (`z = cos θ`).

use std::f64::consts::PI;

use super::{adaptive_quad, bisect, EndpointSingularity, NumericsError, QuadratureSpec};

const ROOT_TOL: f64 = 1e-13;

/// Energies this close to the effective minimum give a point orbit.
const DEGENERATE_TOL: f64 = 1e-14;

/// `U_ell(θ) = ell² / (2 sin² θ) + cos θ`.
pub fn effective_potential(ell: f64, theta: f64) -> f64 {
    let s = theta.sin();
    if ell == 0.0 {
        theta.cos()
    } else {
        ell * ell / (2.0 * s * s) + theta.cos()
    }
}

/// Location and value of the minimum of `U_ell` on `(0, π)`.
pub fn potential_minimum(ell: f64) -> (f64, f64) {
    if ell == 0.0 {
        return (PI, -1.0);
    }
    // U' = −(ell² cos θ + sin⁴ θ) / sin³ θ; the bracket is strictly decreasing on (π/2, π).
    let g = |t: f64| ell * ell * t.cos() + t.sin().powi(4);
    let theta = bisect(g, 0.5 * PI, PI, 1e-15).expect("sign change on (π/2, π)");
    (theta, effective_potential(ell, theta))
}

/// A reduced orbit `{½ p_θ² + U_ell(θ) = energy}` and its polar-angle range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedOrbit {
    pub ell: f64,
    pub energy: f64,
    pub turning_lo: f64,
    pub turning_hi: f64,
}

impl ReducedOrbit {
    pub fn is_degenerate(&self) -> bool {
        self.turning_lo == self.turning_hi
    }
}

/// The two roots of `U_ell(θ) = energy` bracketing the minimum. For
/// `ell = 0` the orbit passes through the poles and the range is closed off
/// at `π` (and at `0` once `energy > 1`).
pub fn turning_points(ell: f64, energy: f64) -> Result<ReducedOrbit, NumericsError> {
    let (theta_min, u_min) = potential_minimum(ell);
    let orbit = |lo, hi| ReducedOrbit {
        ell,
        energy,
        turning_lo: lo,
        turning_hi: hi,
    };
    if energy < u_min - DEGENERATE_TOL * (1.0 + u_min.abs()) || energy.is_nan() {
        return Err(NumericsError::BelowMinimum {
            ell,
            energy,
            minimum: u_min,
        });
    }
    if energy <= u_min + DEGENERATE_TOL * (1.0 + u_min.abs()) {
        return Ok(orbit(theta_min, theta_min));
    }
    if ell == 0.0 {
        return Ok(if energy < 1.0 {
            orbit(energy.acos(), PI)
        } else {
            orbit(0.0, PI)
        });
    }
    let h = |t: f64| effective_potential(ell, t) - energy;
    let mut lo = 0.5 * theta_min;
    while h(lo) <= 0.0 {
        lo *= 0.5;
    }
    let mut gap = 0.5 * (PI - theta_min);
    while h(PI - gap) <= 0.0 {
        gap *= 0.5;
    }
    let a = bisect(h, lo, theta_min, ROOT_TOL)?;
    let b = bisect(h, theta_min, PI - gap, ROOT_TOL)?;
    Ok(orbit(a, b))
}

/// Libration action `A₂ = (1/π) ∫ sqrt(2(energy − U_ell(θ))) dθ` over the
/// half-oscillation between the turning points.
pub fn pendulum_action(ell: f64, energy: f64, spec: &QuadratureSpec) -> Result<f64, NumericsError> {
    if ell == 0.0 && (energy - 1.0).abs() < 1e-12 {
        return Err(NumericsError::FocusValue { ell, energy });
    }
    let orbit = turning_points(ell, energy)?;
    if orbit.is_degenerate() {
        return Ok(0.0);
    }
    let spec = QuadratureSpec {
        endpoint_singularity: EndpointSingularity::InverseSqrt,
        ..*spec
    };
    let integrand = |t: f64| (2.0 * (energy - effective_potential(ell, t)).max(0.0)).sqrt();
    let v = adaptive_quad(integrand, orbit.turning_lo, orbit.turning_hi, &spec)?;
    Ok(v / PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Midpoint rule on `n` cells after the same sin² change of variable.
    fn fixed_rule_action(ell: f64, energy: f64, n: usize) -> f64 {
        let o = turning_points(ell, energy).unwrap();
        let (a, w) = (o.turning_lo, o.turning_hi - o.turning_lo);
        let h = 0.5 * PI / n as f64;
        let mut s = 0.0;
        for i in 0..n {
            let x = (i as f64 + 0.5) * h;
            let t = a + w * x.sin().powi(2);
            s += (2.0 * (energy - effective_potential(ell, t)).max(0.0)).sqrt() * w * (2.0 * x).sin();
        }
        s * h / PI
    }

    #[test]
    fn minimum_satisfies_stationarity() {
        for ell in [0.1, 0.5, 1.0, 3.0] {
            let (t, u) = potential_minimum(ell);
            let d = (effective_potential(ell, t + 1e-6) - effective_potential(ell, t - 1e-6)) / 2e-6;
            assert!(d.abs() < 1e-6, "ell={ell} derivative {d}");
            assert!(u < effective_potential(ell, t + 0.01) && u < effective_potential(ell, t - 0.01));
        }
    }

    #[test]
    fn turning_point_cases() {
        let (tmin, umin) = potential_minimum(0.5);
        let o = turning_points(0.5, umin).unwrap();
        assert_eq!((o.turning_lo, o.turning_hi), (tmin, tmin));
        let o = turning_points(0.5, 1.5).unwrap();
        assert!(o.turning_lo < tmin && tmin < o.turning_hi);
        for t in [o.turning_lo, o.turning_hi] {
            assert!((effective_potential(0.5, t) - 1.5).abs() < 1e-10);
        }
        assert!(matches!(
            turning_points(0.5, umin - 0.1),
            Err(NumericsError::BelowMinimum { .. })
        ));
    }

    #[test]
    fn action_matches_fixed_rule_oracle() {
        let spec = QuadratureSpec::default();
        let v = pendulum_action(0.3, 0.5, &spec).unwrap();
        let oracle = fixed_rule_action(0.3, 0.5, 1_000_000);
        assert!((v - oracle).abs() < 1e-8, "{v} vs {oracle}");
    }

    #[test]
    fn action_zero_at_minimum_and_increasing() {
        let spec = QuadratureSpec::default();
        let (_, umin) = potential_minimum(0.7);
        assert_eq!(pendulum_action(0.7, umin, &spec).unwrap(), 0.0);
        let mut prev = 0.0;
        for i in 1..=20 {
            let e = umin + 0.2 * i as f64;
            let a = pendulum_action(0.7, e, &spec).unwrap();
            assert!(a > prev);
            prev = a;
        }
    }

    #[test]
    fn harmonic_limit_near_south_pole() {
        // Near the bottom the radial action of the isotropic oscillator is (E + 1 − |ell|) / 2.
        let spec = QuadratureSpec::default();
        let (_, umin) = potential_minimum(1e-3);
        let a = pendulum_action(1e-3, umin + 1e-3, &spec).unwrap();
        assert!((a - 0.5e-3).abs() < 1e-5, "{a}");
    }

    #[test]
    fn focus_value_rejected() {
        assert!(matches!(
            pendulum_action(0.0, 1.0, &QuadratureSpec::default()),
            Err(NumericsError::FocusValue { .. })
        ));
    }
}
