//! The experiment configuration file (TOML) and its validation.
//!
//! Schema (all sections except `seed`, `params`, and `experiment` are
//! optional; unknown keys anywhere are rejected):
//!
//! ```toml
//! seed = 20240817
//!
//! [params]            # either alpha/beta or field_dim/k
//! alpha = 2.5
//! beta  = 0.5
//!
//! [nu]                # step distribution
//! kind = "atoms"      # atoms | uniform | truncated_exponential
//! points = [[1.0, 1.0]]
//!
//! [experiment]
//! operation = "clt_rayleigh"
//! compression_exponent = 1.0
//! n_grid = [250, 500, 1000]
//! replicas = 100000
//! ks_threshold = 0.02
//!
//! [output]
//! dir = "out"
//! samples_csv = false
//!
//! [quadrature]
//! order_r = 96
//! order_phi = 96
//! ```
//!
//! Operation-specific fields (grids, λ, c, d_shift, schedule, ...) live in
//! `[experiment]`; each operation validates that the fields it needs are
//! present.

use jacobi::clt::GrowthSchedule;
use jacobi::hypergroup::QuadratureSpec;
use jacobi::walk::{hyperbolic_params, HyperbolicSpaceSpec, StepDistribution};
use jacobi::JacobiParams;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfigFile {
    pub seed: u64,
    pub params: ParamsSection,
    pub nu: Option<StepDistribution>,
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub quadrature: QuadSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub field_dim: Option<u32>,
    pub k: Option<u32>,
}

impl ParamsSection {
    pub fn resolve(&self) -> Result<JacobiParams, CliError> {
        match (self.alpha, self.beta, self.field_dim, self.k) {
            (Some(a), Some(b), None, None) => Ok(JacobiParams::new(a, b)?),
            (None, None, Some(d), Some(k)) => {
                Ok(hyperbolic_params(&HyperbolicSpaceSpec::new(d, k)?))
            }
            _ => Err(CliError::usage(
                "params section needs either alpha+beta or field_dim+k (not both)",
            )),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub operation: String,
    pub replicas: Option<usize>,
    pub steps: Option<usize>,
    pub n_grid: Option<Vec<usize>>,
    pub compression_exponent: Option<f64>,
    pub ks_threshold: Option<f64>,
    /// Pass requirement on the fitted log-log exponent, where one applies.
    pub slope_threshold: Option<f64>,
    pub lambda: Option<f64>,
    pub lambda_grid: Option<Vec<f64>>,
    pub t: Option<f64>,
    pub t_grid: Option<Vec<f64>>,
    pub t_max: Option<f64>,
    pub alpha_grid: Option<Vec<f64>>,
    pub beta_grid: Option<Vec<f64>>,
    pub c: Option<f64>,
    pub d_shift: Option<f64>,
    pub c_grid: Option<Vec<f64>>,
    pub schedule: Option<GrowthSchedule>,
    pub a_exponent: Option<f64>,
    pub r_exponent: Option<f64>,
}

macro_rules! require {
    ($self:ident, $field:ident) => {
        $self.$field.clone().ok_or_else(|| {
            CliError::usage(&format!(
                "operation '{}' needs experiment.{}",
                $self.operation,
                stringify!($field)
            ))
        })
    };
}

impl ExperimentSection {
    pub fn replicas(&self) -> Result<usize, CliError> {
        require!(self, replicas)
    }
    pub fn n_grid(&self) -> Result<Vec<usize>, CliError> {
        require!(self, n_grid)
    }
    pub fn compression_exponent(&self) -> Result<f64, CliError> {
        require!(self, compression_exponent)
    }
    pub fn lambda(&self) -> Result<f64, CliError> {
        require!(self, lambda)
    }
    pub fn lambda_grid(&self) -> Result<Vec<f64>, CliError> {
        require!(self, lambda_grid)
    }
    pub fn t_grid(&self) -> Result<Vec<f64>, CliError> {
        require!(self, t_grid)
    }
    pub fn t_max(&self) -> Result<f64, CliError> {
        require!(self, t_max)
    }
    pub fn alpha_grid(&self) -> Result<Vec<f64>, CliError> {
        require!(self, alpha_grid)
    }
    pub fn beta_grid(&self) -> Result<Vec<f64>, CliError> {
        require!(self, beta_grid)
    }
    pub fn c(&self) -> Result<f64, CliError> {
        require!(self, c)
    }
    pub fn d_shift(&self) -> Result<f64, CliError> {
        require!(self, d_shift)
    }
    pub fn c_grid(&self) -> Result<Vec<f64>, CliError> {
        require!(self, c_grid)
    }
    pub fn schedule(&self) -> Result<GrowthSchedule, CliError> {
        require!(self, schedule)
    }
    pub fn steps(&self) -> Result<usize, CliError> {
        require!(self, steps)
    }
    pub fn t(&self) -> Result<f64, CliError> {
        require!(self, t)
    }
    pub fn a_exponent(&self) -> Result<f64, CliError> {
        require!(self, a_exponent)
    }
    pub fn r_exponent(&self) -> Result<f64, CliError> {
        require!(self, r_exponent)
    }
    pub fn ks_threshold_or(&self, default: f64) -> f64 {
        self.ks_threshold.unwrap_or(default)
    }
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: Option<String>,
    pub samples_csv: bool,
    pub paths_csv: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadSection {
    pub order_r: usize,
    pub order_phi: usize,
}

impl Default for QuadSection {
    fn default() -> Self {
        QuadSection {
            order_r: 96,
            order_phi: 96,
        }
    }
}

impl QuadSection {
    pub fn spec(&self) -> Result<QuadratureSpec, CliError> {
        Ok(QuadratureSpec::new(self.order_r, self.order_phi)?)
    }
}

pub fn load(path: &std::path::Path) -> Result<ExperimentConfigFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(&format!("cannot read config {}: {e}", path.display())))?;
    let cfg: ExperimentConfigFile = toml::from_str(&text)
        .map_err(|e| CliError::usage(&format!("config {}: {e}", path.display())))?;
    if let Some(nu) = &cfg.nu {
        nu.validate()?;
    }
    Ok(cfg)
}

pub fn required_nu(cfg: &ExperimentConfigFile) -> Result<StepDistribution, CliError> {
    cfg.nu
        .clone()
        .ok_or_else(|| CliError::usage("this operation needs a [nu] section"))
}
