//! Flat TOML run configuration. Unknown keys are rejected.

use std::fs;
use std::path::{Path, PathBuf};

use nssp_core::{
    make_initial, random_divfree, Dealias, GridSpec, InitialKind, NonlinearForm, SolverConfig,
    SpectralField,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const CONFIG_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DealiasRule {
    TwoThirds,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    Rotational,
    Convective,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Initial {
    #[serde(rename = "taylor_green_2d")]
    TaylorGreen2d,
    #[serde(rename = "taylor_green_3d")]
    TaylorGreen3d,
    Abc,
    RandomDivfree,
}

impl From<Initial> for InitialKind {
    fn from(i: Initial) -> Self {
        match i {
            Initial::TaylorGreen2d => InitialKind::TaylorGreen2d,
            Initial::TaylorGreen3d => InitialKind::TaylorGreen3d,
            Initial::Abc => InitialKind::Abc,
            Initial::RandomDivfree => InitialKind::RandomDivfree,
        }
    }
}

fn default_sample_every() -> usize {
    1
}
fn default_oversample() -> usize {
    2
}
fn default_slope() -> f64 {
    -5.0 / 3.0
}
fn default_sigma_list() -> Vec<f64> {
    vec![-1.0]
}
fn default_s_max() -> u32 {
    64
}
fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}
fn default_one() -> usize {
    1
}
fn default_dealias() -> DealiasRule {
    DealiasRule::TwoThirds
}
fn default_form() -> Form {
    Form::Rotational
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,

    pub dim: usize,
    pub n: usize,
    pub nu: f64,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_dealias")]
    pub dealias: DealiasRule,
    #[serde(default = "default_form")]
    pub nonlinear_form: Form,
    #[serde(default)]
    pub inviscid: bool,
    #[serde(default = "default_sample_every")]
    pub sample_every: usize,
    #[serde(default = "default_oversample")]
    pub oversample: usize,

    pub initial: Initial,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_slope")]
    pub slope: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_cut: Option<f64>,

    #[serde(default)]
    pub k_ladder: Vec<f64>,
    #[serde(default = "default_sigma_list")]
    pub sigma_list: Vec<f64>,

    #[serde(default = "default_s_max")]
    pub s_max: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l1: Option<u64>,
    /// Highest ladder rung written out; all rungs are still evaluated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i_max: Option<u32>,

    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    /// Write a checkpoint at every this-many samples.
    #[serde(default = "default_one")]
    pub checkpoint_every: usize,
    /// Number of consecutive seeds examined by `check`.
    #[serde(default = "default_one")]
    pub check_ensemble: usize,
}

impl RunConfig {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        cfg.validate().map_err(|message| CliError::Config {
            path: path.to_path_buf(),
            message,
        })?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(CliError::io(path))?;
        Self::parse(&text, path)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("flat config always serializes")
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if self.schema != CONFIG_SCHEMA {
            return Err(format!(
                "field `schema`: expected {CONFIG_SCHEMA}, found {}",
                self.schema
            ));
        }
        if self.k_ladder.windows(2).any(|w| !(w[0] < w[1]))
            || self.k_ladder.iter().any(|k| !(*k >= 1.0 && k.is_finite()))
        {
            return Err("field `k_ladder`: must be strictly increasing with entries >= 1".into());
        }
        if self.sigma_list.iter().any(|s| !(-1.0..=0.0).contains(s)) {
            return Err("field `sigma_list`: entries must lie in [-1, 0]".into());
        }
        if self.checkpoint_every == 0 {
            return Err("field `checkpoint_every`: must be >= 1".into());
        }
        if self.check_ensemble == 0 {
            return Err("field `check_ensemble`: must be >= 1".into());
        }
        if self.s_max == 0 || self.s == Some(0) || self.l1 == Some(0) {
            return Err("fields `s_max`, `s`, `l1`: must be >= 1".into());
        }
        if let (Some(i), Some(s)) = (self.i_max, self.s) {
            if i > 2 * s - 1 {
                return Err(format!("field `i_max`: must be <= 2s - 1 = {}", 2 * s - 1));
            }
        }
        if let Some(d) = InitialKind::from(self.initial).dim() {
            if d != self.dim {
                return Err(format!("field `initial`: {:?} needs dim = {d}", self.initial));
            }
        }
        self.solver().map_err(|e| e.to_string())?.validate().map_err(|e| e.to_string())
    }

    pub fn grid(&self) -> nssp_core::Result<GridSpec> {
        GridSpec::new(self.dim, self.n, self.nu)
    }

    pub fn solver(&self) -> nssp_core::Result<SolverConfig> {
        let mut cfg = SolverConfig::new(self.grid()?, self.dt, self.t_end);
        cfg.dealias = match self.dealias {
            DealiasRule::TwoThirds => Dealias::TwoThirds,
            DealiasRule::None => Dealias::None,
        };
        cfg.nonlinear_form = match self.nonlinear_form {
            Form::Rotational => NonlinearForm::Rotational,
            Form::Convective => NonlinearForm::Convective,
        };
        cfg.inviscid = self.inviscid;
        cfg.sample_every = self.sample_every;
        cfg.oversample = self.oversample;
        cfg.k_ladder = self.k_ladder.clone();
        Ok(cfg)
    }

    /// Initial field for `seed` (the random kind honours `k_cut`).
    pub fn initial_field(&self, seed: u64) -> nssp_core::Result<SpectralField> {
        let grid = self.grid()?;
        match self.initial {
            Initial::RandomDivfree => random_divfree(&grid, seed, self.slope, self.k_cut),
            kind => make_initial(kind.into(), &grid, seed, self.slope),
        }
    }
}
