//! Experiment configuration: a single TOML file with a default for every
//! field. The fully-resolved config is echoed into `manifest.json` so a
//! finished run can always be reproduced from its output directory.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {detail}")]
    Invalid { detail: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    ConvergenceSweep,
    OosComparison,
    Certify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataSourceKind {
    Synthetic,
    Csv,
}

/// Data-source section. Synthetic: a seeded Gaussian mixture with one
/// component per class, unit covariance, and mean separation 2 along the
/// first coordinate (credit-style schema shape). Csv: header row, one label
/// column with values in {−1,1} (or {0,1}, auto-mapped), all other columns
/// numeric features.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    #[serde(default = "default_source")]
    pub source: DataSourceKind,
    /// Synthetic: feature dimension P.
    #[serde(default = "default_features")]
    pub features: usize,
    /// Strategic feature indices (synthetic) — must exclude any intercept.
    #[serde(default = "default_strategic")]
    pub strategic: Vec<usize>,
    /// Synthetic: fraction of +1 labels.
    #[serde(default = "default_balance")]
    pub class_balance: f64,
    /// Standardize features to zero mean / unit variance (base statistics).
    #[serde(default = "default_true")]
    pub standardize: bool,
    /// Csv: input path.
    #[serde(default)]
    pub path: Option<PathBuf>,
    /// Csv: name of the label column.
    #[serde(default)]
    pub label_column: Option<String>,
    /// Csv: names of the strategic feature columns.
    #[serde(default)]
    pub strategic_columns: Vec<String>,
}

fn default_source() -> DataSourceKind {
    DataSourceKind::Synthetic
}
fn default_features() -> usize {
    4
}
fn default_strategic() -> Vec<usize> {
    vec![1, 2]
}
fn default_balance() -> f64 {
    0.5
}
fn default_true() -> bool {
    true
}

impl Default for DataConfig {
    fn default() -> Self {
        Self {
            source: default_source(),
            features: default_features(),
            strategic: default_strategic(),
            class_balance: default_balance(),
            standardize: true,
            path: None,
            label_column: None,
            strategic_columns: Vec::new(),
        }
    }
}

/// Solver section: the R³M loop controls plus optional overrides for the
/// loss-model constants (the theory's rates are stated in terms of γ and β,
/// so experiments must be able to pin them).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default = "default_outer_tol")]
    pub outer_tolerance: f64,
    #[serde(default = "default_inner_tol")]
    pub inner_tolerance: f64,
    #[serde(default = "default_max_inner")]
    pub max_inner_iterations: usize,
    /// Radius of the ball feasible set Θ centered at the origin.
    #[serde(default = "default_feasible_radius")]
    pub feasible_radius: f64,
    /// Override for the joint smoothness constant β (default: calibrated
    /// from the dataset via the logistic Hessian bound λ_max(Ê[zzᵀ])/4).
    #[serde(default)]
    pub beta: Option<f64>,
    /// Override for the strong convexity constant γ (default 0 — logistic).
    #[serde(default)]
    pub gamma: Option<f64>,
    /// Override for the data Lipschitz constant L_z (default: the feasible
    /// radius, the logistic bound on ‖∇_z ℓ‖).
    #[serde(default)]
    pub l_z: Option<f64>,
}

fn default_outer_tol() -> f64 {
    1e-7
}
fn default_inner_tol() -> f64 {
    1e-8
}
fn default_max_inner() -> usize {
    10_000
}
fn default_feasible_radius() -> f64 {
    10.0
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            outer_tolerance: default_outer_tol(),
            inner_tolerance: default_inner_tol(),
            max_inner_iterations: default_max_inner(),
            feasible_radius: default_feasible_radius(),
            beta: None,
            gamma: None,
            l_z: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_experiment")]
    pub experiment: ExperimentKind,
    /// Sensitivities to sweep. Empty means a geometric grid bracketing the
    /// instance's stability threshold (γ+ρ)/β, so both convergent and
    /// divergent regimes appear.
    #[serde(default)]
    pub epsilon_values: Vec<f64>,
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default = "default_train")]
    pub train_size: usize,
    #[serde(default = "default_test")]
    pub test_size: usize,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub data: DataConfig,
    #[serde(default)]
    pub solver: SolverConfig,
}

fn default_experiment() -> ExperimentKind {
    ExperimentKind::ConvergenceSweep
}
fn default_tau() -> f64 {
    0.1
}
fn default_train() -> usize {
    200
}
fn default_test() -> usize {
    3600
}
fn default_trials() -> usize {
    50
}
fn default_iterations() -> usize {
    50
}
fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty config resolves from defaults")
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let config: Self = toml::from_str(&text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let reject = |detail: &str| -> Result<(), ConfigError> {
            Err(ConfigError::Invalid {
                detail: detail.to_string(),
            })
        };
        if self.train_size == 0 || self.trials == 0 || self.iterations == 0 {
            return reject("train_size, trials, and iterations must be positive");
        }
        if self.experiment == ExperimentKind::OosComparison && self.test_size == 0 {
            return reject("test_size must be positive for oos_comparison");
        }
        if self.tau < 0.0 || !self.tau.is_finite() {
            return reject("tau must be a nonnegative real");
        }
        if self.epsilon_values.iter().any(|e| !e.is_finite() || *e < 0.0) {
            return reject("epsilon_values must be nonnegative reals");
        }
        if !(self.solver.outer_tolerance > 0.0) || !(self.solver.inner_tolerance > 0.0) {
            return reject("solver tolerances must be positive");
        }
        if !(self.solver.feasible_radius > 0.0) {
            return reject("feasible_radius must be positive");
        }
        match self.data.source {
            DataSourceKind::Synthetic => {
                if self.data.features < 2 {
                    return reject("synthetic data needs features ≥ 2");
                }
                if !(0.0..=1.0).contains(&self.data.class_balance) {
                    return reject("class_balance must lie in [0, 1]");
                }
                if self
                    .data
                    .strategic
                    .iter()
                    .any(|&i| i >= self.data.features)
                {
                    return reject("strategic index out of range");
                }
            }
            DataSourceKind::Csv => {
                if self.data.path.is_none() {
                    return reject("csv source needs data.path");
                }
                if self.data.label_column.is_none() {
                    return reject("csv source needs data.label_column");
                }
            }
        }
        Ok(())
    }
}
