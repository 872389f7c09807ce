//! Browser bindings for three interactive views: the pendulum region under
//! either cut sign, the coupled-spheres volumes as the coupling profile
//! varies, and a cut-shear explorer on a catalog region.
//!
//! The `render_*` functions are plain Rust and return JSON documents; the
//! `#[wasm_bindgen]` wrappers only convert errors.

use cartograph::affine::{CutShear, PiecewiseShear};
use cartograph::cartography::{build_cartographic_region, rational_slope, Resolution};
use cartograph::cli::region_svg;
use cartograph::numerics::QuadratureSpec;
use cartograph::region::{regions_equivalent, CartographicRegion, ExtendedReal};
use cartograph::systems::{make_system, FnSpec, SemitoricSystem, SystemParams};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Grid used by every view.
pub const DEMO_GRID: usize = 48;

#[derive(Debug, Clone, Serialize)]
pub struct SegmentView {
    pub x0: f64,
    pub x1: f64,
    pub slope: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegionView {
    pub system: String,
    pub epsilon: Vec<i8>,
    pub types: Vec<String>,
    pub lower_segments: Vec<SegmentView>,
    pub svg: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VolumeRowView {
    pub x: f64,
    pub volume: f64,
    pub slice_length: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VolumeView {
    pub system: String,
    pub c: f64,
    pub alpha: f64,
    pub rows: Vec<VolumeRowView>,
    pub svg: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShearView {
    pub system: String,
    pub u: i64,
    pub x_line: f64,
    pub equivalent: bool,
    pub max_slice_change: f64,
    pub svg: String,
}

fn region_of(s: &SemitoricSystem, eps: &[i8]) -> Result<CartographicRegion, String> {
    build_cartographic_region(
        s,
        eps,
        &Resolution::grid(DEMO_GRID, DEMO_GRID),
        &QuadratureSpec::default(),
    )
    .map_err(|e| e.to_string())
}

fn view(region: &CartographicRegion, system: &str, eps: Vec<i8>) -> RegionView {
    RegionView {
        system: system.to_string(),
        epsilon: eps,
        types: region.type_tags().iter().map(|t| format!("{t:?}")).collect(),
        lower_segments: region
            .lower_boundary_segments(1e-6)
            .into_iter()
            .map(|(x0, x1, slope)| SegmentView {
                x0,
                x1,
                slope: rational_slope(slope).map_or_else(|| format!("{slope:.4}"), |r| r.to_string()),
            })
            .collect(),
        svg: region_svg(region),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("view serializes")
}

/// Pendulum region with the cut pointing up (`epsilon > 0`) or down.
pub fn render_pendulum(epsilon: i32) -> Result<RegionView, String> {
    let eps = if epsilon >= 0 { 1 } else { -1 };
    let s = make_system("spherical_pendulum", &SystemParams::default()).map_err(|e| e.to_string())?;
    let region = region_of(&s, &[eps])?;
    Ok(view(&region, &s.name, vec![eps]))
}

/// Volume table of `coupled_m` or `coupled_n` with `χ(t) = 1/(1 + c t)` on `t > 0`.
pub fn render_coupled(system: &str, c: f64, samples: usize) -> Result<VolumeView, String> {
    if system != "coupled_m" && system != "coupled_n" {
        return Err(format!("'{system}' is not a coupled system"));
    }
    let params = SystemParams {
        chi: Some(FnSpec::from(format!("chi_rational:{c}").as_str())),
        ..Default::default()
    };
    let s = make_system(system, &params).map_err(|e| e.to_string())?;
    let spec = QuadratureSpec::default();
    let alpha = s.alpha(&spec).map_err(|e| e.to_string())?;
    let region = region_of(&s, &vec![1; s.metadata.focus.len()])?;
    let n = samples.max(2);
    let mut rows = Vec::new();
    for i in 0..n {
        let x = -1.0 + 2.0 * (i as f64 + 0.5) / n as f64;
        if !s.is_regular_abscissa(x) {
            continue;
        }
        let v = s.reduced_volume_with(x, &spec).map_err(|e| e.to_string())?;
        let l = region.slice_length(x).map_err(|e| e.to_string())?;
        rows.push(VolumeRowView {
            x,
            volume: v.value(),
            slice_length: l.value(),
        });
    }
    Ok(VolumeView {
        system: s.name.clone(),
        c,
        alpha,
        rows,
        svg: region_svg(&region),
    })
}

/// Applies the cut shear `t^u` along `x = x_line` to a catalog region.
pub fn render_shear(system: &str, u: i64, x_line: f64) -> Result<ShearView, String> {
    let s = make_system(system, &SystemParams::default()).map_err(|e| e.to_string())?;
    let region = region_of(&s, &vec![1; s.metadata.focus.len()])?;
    let moved = region.apply_shear(&PiecewiseShear::from_cuts(vec![CutShear::new(u, x_line)]));
    let mut max_slice_change: f64 = 0.0;
    for strip in &region.strips {
        let iv = &strip.interval;
        let (a, b) = (iv.a.value().max(-2.0), iv.b.value().min(2.0));
        for i in 0..=16 {
            let x = a + (b - a) * i as f64 / 16.0;
            if !iv.contains(x) {
                continue;
            }
            let (l0, l1) = (
                strip.slice_length(x),
                moved.slice_length(x).unwrap_or(ExtendedReal::NEG_INF),
            );
            if l0.is_finite() && l1.is_finite() {
                max_slice_change = max_slice_change.max((l0.value() - l1.value()).abs());
            } else if l0 != l1 {
                max_slice_change = f64::INFINITY;
            }
        }
    }
    Ok(ShearView {
        system: s.name.clone(),
        u,
        x_line,
        equivalent: regions_equivalent(&region, &moved),
        max_slice_change,
        svg: region_svg(&moved),
    })
}

#[wasm_bindgen]
pub fn pendulum_region(epsilon: i32) -> Result<String, JsValue> {
    render_pendulum(epsilon)
        .map(|v| to_json(&v))
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn coupled_volumes(system: &str, c: f64, samples: usize) -> Result<String, JsValue> {
    render_coupled(system, c, samples)
        .map(|v| to_json(&v))
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn shear_region(system: &str, u: i32, x_line: f64) -> Result<String, JsValue> {
    render_shear(system, u as i64, x_line)
        .map(|v| to_json(&v))
        .map_err(|e| JsValue::from_str(&e))
}
