use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::cartography::Resolution;
use crate::numerics::QuadratureSpec;
use crate::systems::SystemParams;

/// Smallest accepted grid along either axis.
pub const MIN_GRID: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub nx: usize,
    pub ny: usize,
    pub x_window: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        let r = Resolution::default();
        Self {
            nx: r.nx,
            ny: r.ny,
            x_window: r.x_window,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McConfig {
    /// Zero skips the Monte Carlo cross-check.
    pub n_samples: usize,
    pub seed: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            n_samples: 100_000,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub region_path: PathBuf,
    pub csv_path: PathBuf,
    pub svg_path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: String,
    /// Cut directions, one per focus-focus value; empty means all `+1`.
    #[serde(default)]
    pub epsilon: Vec<i8>,
    #[serde(default)]
    pub params: SystemParams,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub mc: McConfig,
    pub outputs: OutputConfig,
}

/// Command-line values that replace config keys.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub grid: Option<(usize, usize)>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub epsilon: Option<Vec<i8>>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Validation(format!("config: {}", e.message())))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some((nx, ny)) = o.grid {
            self.grid.nx = nx;
            self.grid.ny = ny;
        }
        if let Some(t) = o.tol {
            self.quadrature = self.quadrature.with_tol(t);
        }
        if let Some(s) = o.seed {
            self.mc.seed = s;
        }
        if let Some(e) = &o.epsilon {
            self.epsilon = e.clone();
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.grid.nx < MIN_GRID || self.grid.ny < MIN_GRID {
            return Err(CliError::Validation(format!(
                "grid {}x{} is below the minimum {MIN_GRID}x{MIN_GRID}",
                self.grid.nx, self.grid.ny
            )));
        }
        if !(self.grid.x_window > 0.0 && self.grid.x_window.is_finite()) {
            return Err(CliError::Validation(format!(
                "x_window {} must be positive",
                self.grid.x_window
            )));
        }
        self.quadrature
            .validate()
            .map_err(|e| CliError::Validation(e.to_string()))?;
        Ok(())
    }

    pub fn resolution(&self) -> Resolution {
        Resolution {
            nx: self.grid.nx,
            ny: self.grid.ny,
            x_window: self.grid.x_window,
            ..Resolution::default()
        }
    }
}

/// `"200x100"` or `"200"` (square).
pub fn parse_grid(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Validation(format!("grid {s:?} is not NX or NXxNY"));
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    match s.split_once(['x', 'X']) {
        Some((a, b)) => Ok((parse(a)?, parse(b)?)),
        None => {
            let n = parse(s)?;
            Ok((n, n))
        }
    }
}

/// `"+,-,+1,-1"`.
pub fn parse_epsilon(s: &str) -> Result<Vec<i8>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| match t.trim() {
            "+" | "+1" | "1" => Ok(1),
            "-" | "-1" => Ok(-1),
            other => Err(CliError::Validation(format!("sign {other:?} is not + or -"))),
        })
        .collect()
}
