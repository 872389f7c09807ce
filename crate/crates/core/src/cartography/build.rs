#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::fit_piecewise_linear;
use super::strips::{finite_window, partition_strips, StripCase};
use super::{CartographicMap, CartographyError};
use crate::affine::{normalize_mod_tau, PlanarPoint};
use crate::numerics::QuadratureSpec;
use crate::region::{
    construct_region, BoundaryDescriptor, CartographicRegion, ExtendedReal, Inclusion, Interval, Semicontinuity,
    TypedRegion,
};
use crate::systems::SemitoricSystem;

/// Samples within this distance of a focus value are skipped.
pub const FOCUS_EXCLUSION: f64 = 1e-3;

/// Height of the sampled columns above `H⁻` when `H⁺ = +∞`.
const OPEN_COLUMN_SPAN: f64 = 3.0;

/// Sampling density of the map and tolerance of the boundary fits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Resolution {
    pub nx: usize,
    pub ny: usize,
    /// Half-width of the sampled window along unbounded directions of `J`.
    pub x_window: f64,
    pub fit_tol: f64,
}

impl Default for Resolution {
    fn default() -> Self {
        Self {
            nx: 200,
            ny: 200,
            x_window: 2.0,
            fit_tol: 1e-6,
        }
    }
}

impl Resolution {
    pub fn grid(nx: usize, ny: usize) -> Self {
        Self {
            nx,
            ny,
            ..Self::default()
        }
    }
}

/// One column `x = const` of domain points and their `f²` values.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleColumn {
    pub x: f64,
    pub ys: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CartographicSample {
    pub columns: Vec<SampleColumn>,
}

impl CartographicSample {
    /// First column and row where `f²` fails to increase strictly in `y`.
    pub fn first_non_monotone(&self) -> Option<PlanarPoint> {
        self.columns.iter().find_map(|c| {
            c.values
                .windows(2)
                .position(|w| w[1] <= w[0])
                .map(|j| PlanarPoint::new(c.x, c.ys[j + 1]))
        })
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn inward_step(e: f64) -> f64 {
    1e-9 * (1.0 + e.abs())
}

/// Stored abscissae of a strip and the abscissae where they are evaluated;
/// open finite endpoints are evaluated slightly inside.
fn strip_abscissae(iv: &Interval, grid: &[f64]) -> (Vec<f64>, Vec<f64>) {
    if iv.is_point() {
        let x = iv.a.value();
        return (vec![x], vec![x]);
    }
    let (mut stored, mut eval) = (Vec::new(), Vec::new());
    if iv.a.is_finite() {
        let a = iv.a.value();
        stored.push(a);
        eval.push(if iv.include_a { a } else { a + inward_step(a) });
    }
    for &x in grid {
        let margin_a = !iv.a.is_finite() || x > iv.a.value() + 1e3 * inward_step(x);
        let margin_b = !iv.b.is_finite() || x < iv.b.value() - 1e3 * inward_step(x);
        if margin_a && margin_b {
            stored.push(x);
            eval.push(x);
        }
    }
    if iv.b.is_finite() {
        let b = iv.b.value();
        stored.push(b);
        eval.push(if iv.include_b { b } else { b - inward_step(b) });
    }
    (stored, eval)
}

fn near_focus(s: &SemitoricSystem, x: f64, y: f64) -> bool {
    s.metadata
        .focus
        .iter()
        .any(|f| (f.x - x).hypot(f.y - y) < FOCUS_EXCLUSION)
}

/// Values of `f²` on `ny` levels per column, spaced uniformly in the raw
/// second component; non-attained upper levels are left out.
pub fn sample_map(map: &CartographicMap<'_>, xs: &[f64], ny: usize) -> Result<CartographicSample, CartographyError> {
    let s = map.system();
    let column = |&x: &f64| -> Result<SampleColumn, CartographyError> {
        let b = s.fiber_boundaries(x, false)?;
        let lo = b.lower.value();
        let (hi, closed) = if b.upper.is_finite() {
            (b.upper.value(), b.upper_attained)
        } else {
            (lo + OPEN_COLUMN_SPAN, true)
        };
        let top = if closed { 1.0 } else { 1.0 - 1.0 / ny as f64 };
        let (mut ys, mut values) = (Vec::new(), Vec::new());
        for t in linspace(0.0, top, ny) {
            let h = lo + (hi - lo) * t;
            let y = if s.has_properization() { s.properize(x, h) } else { h };
            if near_focus(s, x, h) {
                continue;
            }
            ys.push(y);
            values.push(map.level_value(x, h)?);
        }
        Ok(SampleColumn { x, ys, values })
    };
    #[cfg(feature = "parallel")]
    let columns: Result<Vec<_>, _> = xs.par_iter().map(column).collect();
    #[cfg(not(feature = "parallel"))]
    let columns: Result<Vec<_>, _> = xs.iter().map(column).collect();
    Ok(CartographicSample { columns: columns? })
}

fn boundary(
    xs: &[f64],
    values: &[ExtendedReal],
    piecewise_linear: bool,
    fallback: Semicontinuity,
    fit_tol: f64,
    label: &str,
) -> Result<BoundaryDescriptor, CartographyError> {
    if let Some(sign) = values
        .first()
        .filter(|v| !v.is_finite() && values.iter().all(|w| w == *v))
    {
        return Ok(BoundaryDescriptor::infinite(*sign, xs)?);
    }
    if piecewise_linear {
        let ys: Vec<f64> = values.iter().map(|v| v.value()).collect();
        if ys.iter().any(|y| !y.is_finite()) {
            return Err(CartographyError::Fit(format!("{label} boundary is not finite")));
        }
        let fit = fit_piecewise_linear(xs, &ys);
        if fit.residual > fit_tol {
            return Err(CartographyError::FitResidual {
                boundary: label.to_string(),
                residual: fit.residual,
                tol: fit_tol,
            });
        }
        return Ok(BoundaryDescriptor::piecewise_linear(fit.vertices)?);
    }
    Ok(BoundaryDescriptor::sampled_inferred(
        xs.to_vec(),
        values.to_vec(),
        fallback,
    )?)
}

fn build_strip(
    map: &CartographicMap<'_>,
    iv: &Interval,
    case: StripCase,
    grid: &[f64],
    res: &Resolution,
) -> Result<TypedRegion, CartographyError> {
    let s = map.system();
    let (stored, eval) = strip_abscissae(iv, grid);
    let (mut lower, mut upper) = (Vec::new(), Vec::new());
    let (mut lower_attained, mut upper_attained) = (true, true);
    for &x in &eval {
        let b = s.fiber_boundaries(x, false)?;
        let image = |h: ExtendedReal| -> Result<ExtendedReal, CartographyError> {
            Ok(if h.is_finite() {
                map.level_value(x, h.value())?.into()
            } else {
                h
            })
        };
        lower.push(image(b.lower)?);
        upper.push(image(b.upper)?);
        lower_attained &= b.lower_attained;
        upper_attained &= b.upper_attained;
    }
    let pl_lower = matches!(case, StripCase::Both | StripCase::MinusOnly);
    let pl_upper = matches!(case, StripCase::Both | StripCase::PlusOnly);
    let lo = boundary(&stored, &lower, pl_lower, Semicontinuity::Upper, res.fit_tol, "lower")?;
    let up = boundary(&stored, &upper, pl_upper, Semicontinuity::Lower, res.fit_tol, "upper")?;
    let inclusion = |attained: bool| if attained { Inclusion::Closed } else { Inclusion::Open };
    Ok(construct_region(
        *iv,
        case.type_tag(),
        lo,
        up,
        inclusion(lower_attained),
        inclusion(upper_attained),
    )?)
}

/// The cartographic region `f_ε(B)` as typed strips, brought to canonical
/// form modulo the group.
pub fn build_cartographic_region(
    s: &SemitoricSystem,
    eps: &[i8],
    res: &Resolution,
    spec: &QuadratureSpec,
) -> Result<CartographicRegion, CartographyError> {
    if res.nx < 2 || res.ny < 2 {
        return Err(CartographyError::Resolution(format!(
            "grid {}x{} is too coarse",
            res.nx, res.ny
        )));
    }
    let plan = partition_strips(s)?;
    let map = CartographicMap::with_default_base(s, eps, *spec)?;
    let (lo, hi) = finite_window(s.j_image(true), res.x_window);
    let step = inward_step(lo.abs().max(hi.abs()));
    let grid = linspace(lo + step, hi - step, res.nx);

    let mut columns = grid.clone();
    columns.extend(
        plan.intervals
            .iter()
            .filter(|(iv, _)| iv.is_point())
            .map(|(iv, _)| iv.a.value()),
    );
    let sample = sample_map(&map, &columns, res.ny)?;
    if let Some(p) = sample.first_non_monotone() {
        return Err(CartographyError::NonMonotone { x: p.x, y: p.y });
    }

    let strips = plan
        .intervals
        .iter()
        .map(|(iv, case)| build_strip(&map, iv, *case, &grid, res))
        .collect::<Result<Vec<_>, _>>()?;
    let region = CartographicRegion::new(s.name.clone(), strips).with_focus(map.focus_images()?);
    Ok(normalize_mod_tau(&region)?)
}
