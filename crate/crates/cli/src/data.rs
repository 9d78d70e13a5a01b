//! Dataset loading: a seeded credit-style synthetic generator and CSV
//! ingestion, both producing standardized labeled distributions.

use crate::config::{DataConfig, DataSourceKind};
use perfopt_core::performative::LabeledDistribution;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv { path: String, source: csv::Error },
    #[error("{path}: missing or non-numeric header row (expected column names)")]
    MissingHeader { path: String },
    #[error("{path}: no column named `{column}`")]
    MissingColumn { path: String, column: String },
    #[error("{path}: malformed rows at lines {lines:?} (non-numeric fields)")]
    MalformedRows { path: String, lines: Vec<usize> },
    #[error("{path}: labels must be binary (−1/1 or 0/1); found {found:?}")]
    NonBinaryLabels { path: String, found: Vec<f64> },
    #[error("dataset too small: need {need} samples, have {have}")]
    TooSmall { need: usize, have: usize },
    #[error("{0}")]
    Invalid(String),
}

/// Per-feature affine standardization fitted on base statistics.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Scaler {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Scaler {
    pub fn fit(features: &[Vec<f64>]) -> Self {
        let n = features.len().max(1);
        let dim = features.first().map_or(0, Vec::len);
        let mut mean = vec![0.0; dim];
        for x in features {
            for (m, v) in mean.iter_mut().zip(x) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n as f64);
        let mut var = vec![0.0; dim];
        for x in features {
            for ((v, m), xi) in var.iter_mut().zip(&mean).zip(x) {
                *v += (xi - m) * (xi - m);
            }
        }
        let std = var
            .iter()
            .map(|v| {
                let s = (v / n as f64).sqrt();
                // Constant feature: leave it unscaled.
                if s < 1e-12 {
                    1.0
                } else {
                    s
                }
            })
            .collect();
        Self { mean, std }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mean: vec![0.0; dim],
            std: vec![1.0; dim],
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }

    pub fn apply_all(&self, features: &[Vec<f64>]) -> Vec<Vec<f64>> {
        features.iter().map(|x| self.apply(x)).collect()
    }
}

/// A loaded dataset plus the metadata the run manifest records.
#[derive(Debug, Clone)]
pub struct Dataset {
    /// Standardized uniform-probability distribution over (x, y).
    pub base: LabeledDistribution,
    pub scaler: Scaler,
    pub strategic: Vec<usize>,
    pub positives: usize,
    pub negatives: usize,
    /// Set when {0,1} labels were auto-mapped to {−1,+1}.
    pub label_mapping: Option<String>,
    pub source_description: String,
}

/// Raw (unstandardized) labeled samples.
pub struct RawData {
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<f64>,
}

/// Draw a standard normal via Box–Muller (keeps the dependency surface to
/// the plain RNG and is deterministic per stream).
pub fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Credit-style synthetic generator: one Gaussian component per class with
/// unit covariance and mean separation 2 along the first coordinate. Label
/// counts are exact: `round(n · balance)` positives.
pub fn generate_synthetic(rng: &mut ChaCha8Rng, n: usize, p: usize, balance: f64) -> RawData {
    let n_pos = (n as f64 * balance).round() as usize;
    let mut features = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let y = if i < n_pos { 1.0 } else { -1.0 };
        let mut x: Vec<f64> = (0..p).map(|_| standard_normal(rng)).collect();
        x[0] += y; // class means at ±1 along the first coordinate
        features.push(x);
        labels.push(y);
    }
    RawData { features, labels }
}

/// Load a dataset per the config: synthetic generation or CSV ingestion,
/// followed by standardization on the loaded (base) statistics.
pub fn load_dataset(config: &DataConfig, seed: u64, n: usize) -> Result<Dataset, DataError> {
    let (raw, strategic, mapping, description) = match config.source {
        DataSourceKind::Synthetic => {
            let mut rng = perfopt_core::seed::rng(seed, 0xda7a);
            let raw = generate_synthetic(&mut rng, n, config.features, config.class_balance);
            let desc = format!(
                "synthetic(features={}, balance={}, n={})",
                config.features, config.class_balance, n
            );
            (raw, config.strategic.clone(), None, desc)
        }
        DataSourceKind::Csv => {
            let path = config.path.as_deref().expect("validated");
            let label_column = config.label_column.as_deref().expect("validated");
            let (raw, strategic, mapping) =
                read_csv(path, label_column, &config.strategic_columns)?;
            let desc = format!("csv({})", path.display());
            (raw, strategic, mapping, desc)
        }
    };

    let scaler = if config.standardize {
        Scaler::fit(&raw.features)
    } else {
        Scaler::identity(raw.features.first().map_or(0, Vec::len))
    };
    let standardized = scaler.apply_all(&raw.features);
    let positives = raw.labels.iter().filter(|&&y| y > 0.0).count();
    let negatives = raw.labels.len() - positives;
    let base = LabeledDistribution::uniform(standardized, raw.labels)
        .map_err(|e| DataError::Invalid(e.to_string()))?;
    Ok(Dataset {
        base,
        scaler,
        strategic,
        positives,
        negatives,
        label_mapping: mapping,
        source_description: description,
    })
}

type CsvLoad = (RawData, Vec<usize>, Option<String>);

fn read_csv(
    path: &Path,
    label_column: &str,
    strategic_columns: &[String],
) -> Result<CsvLoad, DataError> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| DataError::Io {
        path: display.clone(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map_err(|source| DataError::Csv {
            path: display.clone(),
            source,
        })?
        .iter()
        .map(str::to_string)
        .collect();
    // A header row that parses entirely as numbers is almost surely data:
    // the file has no header.
    if !headers.is_empty() && headers.iter().all(|h| h.trim().parse::<f64>().is_ok()) {
        return Err(DataError::MissingHeader { path: display });
    }
    let label_idx = headers
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| DataError::MissingColumn {
            path: display.clone(),
            column: label_column.to_string(),
        })?;
    let feature_names: Vec<&String> = headers
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != label_idx)
        .map(|(_, h)| h)
        .collect();
    let mut strategic = Vec::with_capacity(strategic_columns.len());
    for name in strategic_columns {
        let idx = feature_names
            .iter()
            .position(|h| *h == name)
            .ok_or_else(|| DataError::MissingColumn {
                path: display.clone(),
                column: name.clone(),
            })?;
        strategic.push(idx);
    }

    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut malformed = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        // Header is line 1; data starts at line 2.
        let line = row_idx + 2;
        let record = record.map_err(|source| DataError::Csv {
            path: display.clone(),
            source,
        })?;
        if record.len() != headers.len() {
            malformed.push(line);
            continue;
        }
        let mut x = Vec::with_capacity(headers.len() - 1);
        let mut label = None;
        let mut ok = true;
        for (i, field) in record.iter().enumerate() {
            match field.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => {
                    if i == label_idx {
                        label = Some(v);
                    } else {
                        x.push(v);
                    }
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            malformed.push(line);
            continue;
        }
        features.push(x);
        labels.push(label.expect("label parsed"));
    }
    if !malformed.is_empty() {
        return Err(DataError::MalformedRows {
            path: display,
            lines: malformed,
        });
    }
    if features.is_empty() {
        return Err(DataError::TooSmall { need: 1, have: 0 });
    }

    let mut distinct: Vec<f64> = labels.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let mapping = if distinct.iter().all(|y| *y == -1.0 || *y == 1.0) {
        None
    } else if distinct.iter().all(|y| *y == 0.0 || *y == 1.0) {
        for y in labels.iter_mut() {
            if *y == 0.0 {
                *y = -1.0;
            }
        }
        Some("labels {0,1} mapped to {-1,+1}".to_string())
    } else {
        return Err(DataError::NonBinaryLabels {
            path: display,
            found: distinct,
        });
    };
    Ok((RawData { features, labels }, strategic, mapping))
}
