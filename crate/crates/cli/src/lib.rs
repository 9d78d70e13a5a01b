//! Experiment runner for distributionally robust performative optimization:
//! configuration, data ingestion and synthesis, experiment orchestration,
//! and plot-ready result emission. The `perfopt` binary is a thin wrapper
//! over these modules.

pub mod certify;
pub mod config;
pub mod data;
pub mod emit;
pub mod experiments;

use config::{ExperimentConfig, ExperimentKind};
use std::path::Path;

/// Process exit codes of the `perfopt` binary.
pub mod exit_codes {
    pub const SUCCESS: i32 = 0;
    pub const CONFIG_ERROR: i32 = 1;
    pub const DATA_ERROR: i32 = 2;
    pub const CERTIFICATION_FAILURE: i32 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] config::ConfigError),
    #[error(transparent)]
    Data(#[from] data::DataError),
    #[error(transparent)]
    Experiment(#[from] experiments::ExperimentError),
    #[error(transparent)]
    Emit(#[from] emit::EmitError),
    #[error(transparent)]
    Analysis(#[from] perfopt_core::analysis::AnalysisError),
    #[error("{failed} of {total} certification bounds unsatisfied")]
    CertificationFailed { failed: usize, total: usize },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => exit_codes::CONFIG_ERROR,
            RunError::Data(_) | RunError::Emit(_) => exit_codes::DATA_ERROR,
            RunError::Experiment(_) | RunError::Analysis(_) => exit_codes::DATA_ERROR,
            RunError::CertificationFailed { .. } => exit_codes::CERTIFICATION_FAILURE,
        }
    }
}

/// Execute the configured experiment end to end and emit the result files.
/// Returns the emitted file set for experiment kinds that produce one.
pub fn execute(config: &ExperimentConfig) -> Result<Option<emit::FileSet>, RunError> {
    match config.experiment {
        ExperimentKind::Certify => {
            run_certify(config)?;
            Ok(None)
        }
        ExperimentKind::ConvergenceSweep => {
            let dataset = data::load_dataset(&config.data, config.seed, config.train_size)?;
            let rows = experiments::run_convergence_sweep(config, &dataset)?;
            let files = emit::emit_results(&rows, &config.output_dir, config, &dataset)?;
            Ok(Some(files))
        }
        ExperimentKind::OosComparison => {
            let dataset = data::load_dataset(&config.data, config.seed, config.train_size)?;
            let rows = experiments::run_oos_comparison(config, &dataset)?;
            let files = emit::emit_results(&rows, &config.output_dir, config, &dataset)?;
            Ok(Some(files))
        }
    }
}

/// Run the certification suite, print one line per bound, and fail with the
/// certification exit code if any bound is unsatisfied.
pub fn run_certify(config: &ExperimentConfig) -> Result<(), RunError> {
    let outcomes = certify::run_certification(config.seed)?;
    let total = outcomes.len();
    let mut failed = 0;
    for outcome in &outcomes {
        println!("{}", certify::format_outcome(outcome));
        if !outcome.report.satisfied {
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(RunError::CertificationFailed { failed, total });
    }
    Ok(())
}

/// Parse and semantically validate a config file (the `validate`
/// subcommand).
pub fn validate_config(path: &Path) -> Result<ExperimentConfig, RunError> {
    Ok(ExperimentConfig::from_file(path)?)
}
