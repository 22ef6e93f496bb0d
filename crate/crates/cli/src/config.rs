use std::path::PathBuf;

use nilrigid::solver::SolverOptions;
use nilrigid::specfile::SolverSection;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Kv,
}

/// Command-line overrides; unset fields fall back to the `[solver]` section, then to defaults.
#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    pub specs: Vec<PathBuf>,
    pub resolution: Option<Vec<usize>>,
    pub modes: Option<usize>,
    pub tol: Option<f64>,
    pub fiber_tol: Option<f64>,
    pub threads: Option<usize>,
    pub precision: Option<u32>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub check_identity: bool,
}

/// The settings a solve actually ran with.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub resolution: Vec<usize>,
    pub modes: usize,
    pub tol: f64,
    pub fiber_tol: f64,
    pub interp_order: usize,
    pub threads: Option<usize>,
    pub precision: Option<u32>,
}

pub const DEFAULT_MODES: usize = 32;

pub fn default_resolution(dim: usize) -> Vec<usize> {
    (0..dim).map(|i| if i == 0 { 64 } else { 32 }).collect()
}

impl RunConfig {
    /// Merges flags over the `[solver]` section. `fixed` is the resolution dictated by
    /// raw grid input, if any.
    pub fn resolve(&self, section: Option<&SolverSection>, dim: usize, fixed: Option<&[usize]>) -> Result<ResolvedConfig, CliError> {
        let empty = SolverSection::default();
        let s = section.unwrap_or(&empty);
        let requested = self.resolution.clone().or_else(|| s.resolution.clone());
        let resolution = match (fixed, requested) {
            (Some(f), Some(r)) if f != r.as_slice() => {
                return Err(CliError::Config(format!("resolution {r:?} does not match the grid data {f:?}")))
            }
            (Some(f), _) => f.to_vec(),
            (None, Some(r)) => r,
            (None, None) => default_resolution(dim),
        };
        let defaults = SolverOptions::default();
        let min_res = resolution.iter().copied().min().unwrap_or(0);
        let resolved = ResolvedConfig {
            modes: self.modes.or(s.modes).unwrap_or_else(|| DEFAULT_MODES.min(min_res / 2).max(1)),
            tol: self.tol.or(s.tol).unwrap_or(defaults.tol),
            fiber_tol: self.fiber_tol.or(s.fiber_tol).unwrap_or(defaults.fiber_tol),
            interp_order: s.interp_order.unwrap_or(defaults.interp_order),
            threads: self.threads.or(s.threads),
            precision: self.precision,
            resolution,
        };
        resolved.validate(dim)?;
        Ok(resolved)
    }
}

impl ResolvedConfig {
    pub fn validate(&self, dim: usize) -> Result<(), CliError> {
        if self.resolution.len() != dim {
            return Err(CliError::Config(format!("resolution has {} entries for a {dim}-dimensional algebra", self.resolution.len())));
        }
        if let Some(&m) = self.resolution.iter().find(|&&m| m < 8 || !m.is_power_of_two()) {
            return Err(CliError::Config(format!("resolution {m} is not a power of two >= 8")));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(CliError::Config(format!("tol {} outside (0, 1)", self.tol)));
        }
        if !(self.fiber_tol > 0.0 && self.fiber_tol < 1.0) {
            return Err(CliError::Config(format!("fiber_tol {} outside (0, 1)", self.fiber_tol)));
        }
        let min_res = self.resolution.iter().copied().min().unwrap_or(0);
        if self.modes == 0 || self.modes > min_res / 2 {
            return Err(CliError::Config(format!("K = {} must lie in 1..={} (half the smallest resolution)", self.modes, min_res / 2)));
        }
        if self.threads == Some(0) {
            return Err(CliError::Config("threads must be positive".into()));
        }
        Ok(())
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions { modes: self.modes, tol: self.tol, fiber_tol: self.fiber_tol, interp_order: self.interp_order, ..SolverOptions::default() }
    }
}
