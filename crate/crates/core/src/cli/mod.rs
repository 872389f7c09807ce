//! Config-driven front end: builds a region, writes the region document,
//! the volume table and a schematic drawing, and compares region files.

mod config;
mod svg;

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

pub use config::{parse_epsilon, parse_grid, GridConfig, McConfig, OutputConfig, Overrides, RunConfig, MIN_GRID};
pub use svg::region_svg;

use crate::affine::{CutShear, TauElement};
use crate::cartography::{build_cartographic_region, finite_x_window, rational_slope, CartographyError};
use crate::numerics::mc_fiber_volume;
use crate::region::{
    find_equivalence, region_from_json, region_to_json, CartographicRegion, ExtendedReal, RegionError,
};
use crate::systems::{make_system, SemitoricSystem, SystemError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::Numerical(_) => "numerical",
            CliError::Io(_) => "io",
        }
    }

    /// One-line JSON record for stderr.
    pub fn record(&self) -> String {
        json!({ "error": { "kind": self.kind(), "code": self.exit_code(), "message": self.to_string() } }).to_string()
    }
}

impl From<SystemError> for CliError {
    fn from(e: SystemError) -> Self {
        match e {
            SystemError::Numerics(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<CartographyError> for CliError {
    fn from(e: CartographyError) -> Self {
        match e {
            CartographyError::System(s) => s.into(),
            CartographyError::Epsilon(_) | CartographyError::Resolution(_) | CartographyError::ZeroWeight(..) => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<RegionError> for CliError {
    fn from(e: RegionError) -> Self {
        CliError::Validation(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumeRow {
    pub x: f64,
    pub volume: ExtendedReal,
    pub slice_length: ExtendedReal,
    pub difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McCheck {
    pub x: f64,
    pub estimate: f64,
    pub std_err: f64,
    pub volume: f64,
    pub within_3_sigma: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    pub x0: f64,
    pub x1: f64,
    pub slope: f64,
    pub rational: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub system: String,
    pub epsilon: Vec<i8>,
    pub types: Vec<String>,
    pub lower_segments: Vec<Segment>,
    pub max_difference: f64,
    pub monte_carlo: Vec<McCheck>,
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Regular abscissae of the volume table.
fn table_abscissae(s: &SemitoricSystem, n: usize, half_width: f64) -> Vec<f64> {
    let (lo, hi) = finite_x_window(s, half_width);
    (0..n)
        .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64)
        .filter(|&x| s.is_regular_abscissa(x) && s.metadata.j_image.contains(x))
        .collect()
}

pub fn volume_table(
    s: &SemitoricSystem,
    region: &CartographicRegion,
    xs: &[f64],
    spec: &crate::numerics::QuadratureSpec,
) -> Result<Vec<VolumeRow>, CliError> {
    xs.iter()
        .map(|&x| {
            let volume = s.reduced_volume_with(x, spec)?;
            let slice_length = region.slice_length(x)?;
            let difference = if volume.is_finite() && slice_length.is_finite() {
                (volume.value() - slice_length.value()).abs()
            } else if volume == slice_length {
                0.0
            } else {
                f64::INFINITY
            };
            Ok(VolumeRow {
                x,
                volume,
                slice_length,
                difference,
            })
        })
        .collect()
}

fn ext(v: ExtendedReal) -> String {
    if v.is_finite() {
        format!("{}", v.value())
    } else if v.value() > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn volume_csv(rows: &[VolumeRow]) -> String {
    let mut out = String::from("x,V(x),slice_length,|difference|\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.x,
            ext(r.volume),
            ext(r.slice_length),
            r.difference
        );
    }
    out
}

/// Builds the region of `config` and writes the three outputs.
pub fn run(config: &RunConfig) -> Result<RunReport, CliError> {
    config.validate()?;
    let s = make_system(&config.system, &config.params)?;
    let eps = if config.epsilon.is_empty() {
        vec![1; s.metadata.focus.len()]
    } else {
        config.epsilon.clone()
    };
    let region = build_cartographic_region(&s, &eps, &config.resolution(), &config.quadrature)?;
    let xs = table_abscissae(&s, config.grid.nx, config.grid.x_window);
    let rows = volume_table(&s, &region, &xs, &config.quadrature)?;
    let max_difference = rows.iter().map(|r| r.difference).fold(0.0, f64::max);

    let mut monte_carlo = Vec::new();
    if config.mc.n_samples > 0 && s.metadata.finite_volumes && !s.is_pendulum() {
        let picks = [xs.len() / 4, xs.len() / 2, 3 * xs.len() / 4];
        for (i, &j) in picks.iter().enumerate() {
            let Some(&x) = xs.get(j) else { continue };
            let e = mc_fiber_volume(
                &s,
                x,
                ExtendedReal::POS_INF,
                config.mc.n_samples,
                config.mc.seed + i as u64,
            )?;
            let v = rows[j].volume.value();
            monte_carlo.push(McCheck {
                x,
                estimate: e.value,
                std_err: e.std_err,
                volume: v,
                within_3_sigma: e.agrees_with(v, 3.0),
            });
        }
    }

    let doc = region_to_json(&region);
    write_file(&config.outputs.region_path, &doc)?;
    write_file(&config.outputs.csv_path, &volume_csv(&rows))?;
    write_file(&config.outputs.svg_path, &region_svg(&region))?;

    let lower_segments = region
        .lower_boundary_segments(1e-6)
        .into_iter()
        .map(|(x0, x1, slope)| Segment {
            x0,
            x1,
            slope,
            rational: rational_slope(slope).map(|r| r.to_string()),
        })
        .collect();
    Ok(RunReport {
        system: s.name.clone(),
        epsilon: eps,
        types: region.type_tags().iter().map(|t| format!("{t:?}")).collect(),
        lower_segments,
        max_difference,
        monte_carlo,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub equivalent: bool,
    pub tau: Option<TauElement>,
    pub cuts: Vec<CutShear>,
    pub signs: Vec<i8>,
    pub identity: bool,
}

pub fn load_region(path: &Path) -> Result<CartographicRegion, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    region_from_json(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn compare_regions(a: &CartographicRegion, b: &CartographicRegion) -> Comparison {
    match find_equivalence(a, b) {
        Some(w) => Comparison {
            equivalent: true,
            identity: w.is_identity(),
            tau: Some(w.tau),
            cuts: w.cuts,
            signs: w.signs,
        },
        None => Comparison {
            equivalent: false,
            tau: None,
            cuts: Vec::new(),
            signs: Vec::new(),
            identity: false,
        },
    }
}

pub fn compare(a: &Path, b: &Path) -> Result<Comparison, CliError> {
    Ok(compare_regions(&load_region(a)?, &load_region(b)?))
}
