//! Strip partition, the numerical cartographic map and the assembled
//! cartographic region, with checks of the monodromy jump and the vertex
//! slope rule.

mod build;
mod checks;
mod fit;
mod map;
mod strips;

use thiserror::Error;

pub use build::{build_cartographic_region, sample_map, CartographicSample, Resolution, SampleColumn, FOCUS_EXCLUSION};
pub use checks::{
    jump_from_map, monodromy_jump_check, monodromy_jump_estimate, slope_jump_formula, JumpEstimate, JUMP_RESIDUAL_TOL,
};
pub use fit::{affine_fit, fit_piecewise_linear, rational_slope, PlFit, VERTEX_SLOPE_TOL};
pub use map::{action_map, CartographicMap};
pub use strips::{fiber_case, finite_x_window, partition_strips, StripCase, StripPlan};

use crate::affine::AffineError;
use crate::numerics::NumericsError;
use crate::region::RegionError;
use crate::systems::SystemError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CartographyError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Affine(#[from] AffineError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("invalid sign vector: {0}")]
    Epsilon(String),
    #[error("invalid resolution: {0}")]
    Resolution(String),
    #[error("({x}, {y}) is outside the domain of the cartographic map")]
    OutsideDomain { x: f64, y: f64 },
    #[error("f2 is not strictly increasing in y at ({x}, {y})")]
    NonMonotone { x: f64, y: f64 },
    #[error("{0}")]
    Fit(String),
    #[error("piecewise-linear fit of the {boundary} boundary has residual {residual:e} above {tol:e}")]
    FitResidual { boundary: String, residual: f64, tol: f64 },
    #[error("jump estimate is {residual} away from an integer (left {left}, right {right})")]
    JumpResidual { left: f64, right: f64, residual: f64 },
    #[error("({x}, {y}) is {dist} from a focus-focus value")]
    NearFocus { x: f64, y: f64, dist: f64 },
    #[error("isotropy weights ({0}, {1}) must be non-zero")]
    ZeroWeight(i64, i64),
}
