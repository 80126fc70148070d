//! Batch augmentation over a manifest of image files.

mod batch;
mod grid;
mod imageio;
mod manifest;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{check_unit, MixError};
use crate::freq::PhaseSource;
use crate::params::{ALPHA_TRACK1, DEFAULT_BETA_SHAPE};

pub use batch::{apply_mode, pair_items, run_batch, ItemFailure, MixOutcome, RunReport};
pub use grid::{render_grid, GridOptions, GRID_SEPARATOR, GRID_SEPARATOR_VALUE};
pub use imageio::{encode_image, load_image, load_mask, save_image, ImageFormat};
pub use manifest::{
    load_manifest, parse_manifest, Manifest, ManifestEntry, OutputHeader, OutputRecord, MANIFEST_VERSION,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {message}")]
    Validation { line: usize, message: String },
    #[error("{path}: {message}")]
    Image { path: PathBuf, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Mix(#[from] MixError),
}

impl PipelineError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        PipelineError::Io { path: path.to_path_buf(), source }
    }
}

pub type Result<T> = std::result::Result<T, PipelineError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Mixup,
    Cutmix,
    Fd,
    Cd,
    Style,
}

impl Mode {
    pub const ALL: [Mode; 5] = [Mode::Mixup, Mode::Cutmix, Mode::Fd, Mode::Cd, Mode::Style];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Mixup => "mixup",
            Mode::Cutmix => "cutmix",
            Mode::Fd => "fd",
            Mode::Cd => "cd",
            Mode::Style => "style",
        }
    }

    /// Common-pattern weight used when none is given: 1 for context mixing
    /// (background mixed freely), the first track profile otherwise.
    pub fn default_alpha(self) -> f64 {
        match self {
            Mode::Cd => 1.0,
            _ => ALPHA_TRACK1,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| PipelineError::Config(format!("unknown mode '{s}'")))
    }
}

/// Rows (`lambda_v` values) by columns (`alpha` values) of a parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub lambdas: Vec<f64>,
    pub alphas: Vec<f64>,
}

impl FromStr for GridSpec {
    type Err = PipelineError;

    /// Parses `"λ1,λ2,…xα1,α2,…"`.
    fn from_str(s: &str) -> Result<Self> {
        let (rows, cols) = s
            .split_once('x')
            .ok_or_else(|| PipelineError::Config(format!("grid '{s}' must look like 'l1,l2xa1,a2'")))?;
        let list = |part: &str, name: &str| -> Result<Vec<f64>> {
            let values = part
                .split(',')
                .map(str::trim)
                .filter(|p| !p.is_empty())
                .map(|p| {
                    let v: f64 = p
                        .parse()
                        .map_err(|_| PipelineError::Config(format!("grid {name} '{p}' is not a number")))?;
                    check_unit(name, v)?;
                    Ok(v)
                })
                .collect::<Result<Vec<f64>>>()?;
            if values.is_empty() {
                return Err(PipelineError::Config(format!("grid {name} list is empty")));
            }
            Ok(values)
        };
        Ok(GridSpec { lambdas: list(rows, "lambda")?, alphas: list(cols, "alpha")? })
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    pub seed: u64,
    pub beta_shape: f64,
    pub alpha: f64,
    pub fixed_lambda_v: Option<f64>,
    pub fixed_lambda_delta: Option<f64>,
    pub phase_source: PhaseSource,
    pub output_dir: PathBuf,
    pub grid: Option<GridSpec>,
    pub format: ImageFormat,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
}

impl RunConfig {
    pub fn new(mode: Mode, output_dir: impl Into<PathBuf>) -> Self {
        Self {
            mode,
            seed: 0,
            beta_shape: DEFAULT_BETA_SHAPE,
            alpha: mode.default_alpha(),
            fixed_lambda_v: None,
            fixed_lambda_delta: None,
            phase_source: PhaseSource::First,
            output_dir: output_dir.into(),
            grid: None,
            format: ImageFormat::Png,
            jobs: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta_shape.is_finite() && self.beta_shape > 0.0) {
            return Err(PipelineError::Config(format!("beta must be positive, got {}", self.beta_shape)));
        }
        check_unit("alpha", self.alpha)?;
        if let Some(v) = self.fixed_lambda_v {
            check_unit("lambda_v", v)?;
        }
        if let Some(v) = self.fixed_lambda_delta {
            check_unit("lambda_delta", v)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spec_parsing() {
        let g: GridSpec = "0,0.5,1x0.2,0.6".parse().unwrap();
        assert_eq!(g.lambdas, vec![0.0, 0.5, 1.0]);
        assert_eq!(g.alphas, vec![0.2, 0.6]);
        assert!("0.5".parse::<GridSpec>().is_err());
        assert!("x0.2".parse::<GridSpec>().is_err());
        assert!("0.5x1.2".parse::<GridSpec>().is_err());
        assert!("0.5xabc".parse::<GridSpec>().is_err());
    }

    #[test]
    fn mode_names_roundtrip() {
        for m in Mode::ALL {
            assert_eq!(m.as_str().parse::<Mode>().unwrap(), m);
        }
        assert!("blend".parse::<Mode>().is_err());
        assert_eq!(Mode::Cd.default_alpha(), 1.0);
        assert_eq!(Mode::Fd.default_alpha(), 0.2);
    }

    #[test]
    fn config_validation() {
        let mut c = RunConfig::new(Mode::Fd, "/tmp/x");
        assert!(c.validate().is_ok());
        c.beta_shape = 0.0;
        assert!(c.validate().is_err());
        c.beta_shape = 1.0;
        c.fixed_lambda_v = Some(2.0);
        assert!(c.validate().is_err());
    }
}
