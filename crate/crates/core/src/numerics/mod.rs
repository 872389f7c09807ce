//! Quadrature, bracketing root finders, pendulum action integrals and Monte
//! Carlo volume oracles.

mod mc;
mod pendulum;
mod quad;
mod roots;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use mc::{mc_fiber_volume, McEstimate, MC_BLOCK};
pub use pendulum::{effective_potential, pendulum_action, potential_minimum, turning_points, ReducedOrbit};
pub use quad::{adaptive_quad, gauss_kronrod_15};
pub use roots::bisect;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("quadrature did not converge on [{a}, {b}] at depth {depth} (error estimate {error:e})")]
    MaxDepth { a: f64, b: f64, depth: u32, error: f64 },
    #[error("integrand is not finite on [{a}, {b}]")]
    NonFinite { a: f64, b: f64 },
    #[error("invalid integration interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),
    #[error("no sign change on [{a}, {b}]")]
    NoBracket { a: f64, b: f64 },
    #[error("energy {energy} is below the effective minimum {minimum} for ell={ell}")]
    BelowMinimum { ell: f64, energy: f64, minimum: f64 },
    #[error("the action is not defined at the focus-focus value ({ell}, {energy})")]
    FocusValue { ell: f64, energy: f64 },
    #[error("sampler unavailable: {0}")]
    Sampler(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum EndpointSingularity {
    #[default]
    None,
    InverseSqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    pub endpoint_singularity: EndpointSingularity,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_depth: 60,
            endpoint_singularity: EndpointSingularity::None,
        }
    }
}

impl QuadratureSpec {
    pub fn with_singularity(endpoint_singularity: EndpointSingularity) -> Self {
        Self {
            endpoint_singularity,
            ..Self::default()
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self.rel_tol = tol;
        self
    }

    pub fn validate(&self) -> Result<(), NumericsError> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(NumericsError::InvalidSpec(format!(
                "tolerances must be positive (abs_tol={}, rel_tol={})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_depth == 0 {
            return Err(NumericsError::InvalidSpec("max_depth must be at least 1".into()));
        }
        Ok(())
    }
}
