//! Result emission: `results.csv` (RFC-4180), `summary.json` (per-ε,
//! per-method medians and quartiles), and `manifest.json` (the fully
//! resolved config plus instance metadata). Outputs are byte-stable for a
//! fixed row set: floats are written in Rust's shortest round-trip form and
//! JSON field order follows the struct definitions.

use crate::config::ExperimentConfig;
use crate::data::{Dataset, Scaler};
use crate::experiments::{Method, ResultRow};
use serde::Serialize;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("csv write error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json write error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Paths of the emitted files.
#[derive(Debug, Clone)]
pub struct FileSet {
    pub results_csv: PathBuf,
    pub summary_json: PathBuf,
    pub manifest_json: PathBuf,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

/// Write `results.csv`: header plus one line per row, sorted by the caller.
fn write_csv(rows: &[ResultRow], path: &Path) -> Result<(), EmitError> {
    let file = std::fs::File::create(path).map_err(|source| EmitError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut writer = csv::Writer::from_writer(file);
    writer.write_record([
        "experiment",
        "trial",
        "epsilon",
        "method",
        "iteration",
        "terminal",
        "step_distance",
        "oos_loss",
        "oos_accuracy",
    ])?;
    for row in rows {
        writer.write_record([
            row.experiment.to_string(),
            row.trial.to_string(),
            format!("{}", row.epsilon),
            row.method.name().to_string(),
            row.iteration.to_string(),
            if row.terminal { "1" } else { "0" }.to_string(),
            fmt_opt(row.step_distance),
            fmt_opt(row.oos_loss),
            fmt_opt(row.oos_accuracy),
        ])?;
    }
    writer.flush().map_err(|source| EmitError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(())
}

/// Linear-interpolation quantile of pre-sorted values.
fn quantile(sorted: &[f64], q: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    Some(sorted[lo] + (sorted[hi] - sorted[lo]) * frac)
}

#[derive(Debug, Serialize)]
struct QuartileSummary {
    median: f64,
    q1: f64,
    q3: f64,
}

fn quartiles(mut values: Vec<f64>) -> Option<QuartileSummary> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    Some(QuartileSummary {
        median: quantile(&values, 0.5).unwrap(),
        q1: quantile(&values, 0.25).unwrap(),
        q3: quantile(&values, 0.75).unwrap(),
    })
}

#[derive(Debug, Serialize)]
struct GroupSummary {
    epsilon: f64,
    method: &'static str,
    runs: usize,
    converged_runs: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    convergence_iteration: Option<QuartileSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oos_loss: Option<QuartileSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oos_accuracy: Option<QuartileSummary>,
}

#[derive(Debug, Serialize)]
struct Summary {
    experiment: String,
    groups: Vec<GroupSummary>,
}

fn summarize(rows: &[ResultRow]) -> Summary {
    let experiment = rows
        .first()
        .map(|r| r.experiment.to_string())
        .unwrap_or_default();
    let mut keys: Vec<(f64, Method)> = Vec::new();
    for row in rows {
        if !keys
            .iter()
            .any(|(e, m)| e.to_bits() == row.epsilon.to_bits() && *m == row.method)
        {
            keys.push((row.epsilon, row.method));
        }
    }
    keys.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    let groups = keys
        .into_iter()
        .map(|(epsilon, method)| {
            let group: Vec<&ResultRow> = rows
                .iter()
                .filter(|r| r.epsilon.to_bits() == epsilon.to_bits() && r.method == method)
                .collect();
            let terminals: Vec<&&ResultRow> = group.iter().filter(|r| r.terminal).collect();
            let runs = group
                .iter()
                .map(|r| r.trial)
                .collect::<std::collections::BTreeSet<_>>()
                .len();
            GroupSummary {
                epsilon,
                method: method.name(),
                runs,
                converged_runs: terminals.len(),
                convergence_iteration: quartiles(
                    terminals.iter().map(|r| r.iteration as f64).collect(),
                ),
                oos_loss: quartiles(terminals.iter().filter_map(|r| r.oos_loss).collect()),
                oos_accuracy: quartiles(
                    terminals.iter().filter_map(|r| r.oos_accuracy).collect(),
                ),
            }
        })
        .collect();
    Summary { experiment, groups }
}

#[derive(Debug, Serialize)]
struct DatasetManifest<'a> {
    source: &'a str,
    samples: usize,
    positives: usize,
    negatives: usize,
    strategic_features: &'a [usize],
    #[serde(skip_serializing_if = "Option::is_none")]
    label_mapping: Option<&'a str>,
    scaler: &'a Scaler,
}

#[derive(Debug, Serialize)]
struct InstanceManifest {
    beta: f64,
    gamma: f64,
    rho: f64,
    l_z: f64,
    stability_threshold: f64,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    library_version: &'a str,
    seed: u64,
    config: &'a ExperimentConfig,
    dataset: DatasetManifest<'a>,
    instance: InstanceManifest,
}

/// Write the three output files; byte-stable given identical rows.
pub fn emit_results(
    rows: &[ResultRow],
    output_dir: &Path,
    config: &ExperimentConfig,
    dataset: &Dataset,
) -> Result<FileSet, EmitError> {
    std::fs::create_dir_all(output_dir).map_err(|source| EmitError::Io {
        path: output_dir.display().to_string(),
        source,
    })?;
    let files = FileSet {
        results_csv: output_dir.join("results.csv"),
        summary_json: output_dir.join("summary.json"),
        manifest_json: output_dir.join("manifest.json"),
    };
    write_csv(rows, &files.results_csv)?;

    let summary = summarize(rows);
    write_json(&files.summary_json, &summary)?;

    let instance = crate::experiments::build_instance(config, &dataset.base);
    let manifest = Manifest {
        library_version: env!("CARGO_PKG_VERSION"),
        seed: config.seed,
        config,
        dataset: DatasetManifest {
            source: &dataset.source_description,
            samples: dataset.base.len(),
            positives: dataset.positives,
            negatives: dataset.negatives,
            strategic_features: &dataset.strategic,
            label_mapping: dataset.label_mapping.as_deref(),
            scaler: &dataset.scaler,
        },
        instance: InstanceManifest {
            beta: instance.constants.beta,
            gamma: instance.constants.gamma,
            rho: instance.rho,
            l_z: instance.constants.l_z,
            stability_threshold: instance.threshold,
        },
    };
    write_json(&files.manifest_json, &manifest)?;
    Ok(files)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), EmitError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|source| EmitError::Io {
        path: path.display().to_string(),
        source,
    })
}
