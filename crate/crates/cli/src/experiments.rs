//! Experiment drivers: the convergence sweep (step distances per iteration
//! for robust vs non-robust retraining) and the out-of-sample comparison
//! (deploy-then-test over independent trials).
//!
//! Trials run in parallel on independent RNG streams derived from the master
//! seed via the documented splitter in [`perfopt_core::seed`]; result rows
//! are sorted deterministically before emission, so outputs are byte-stable
//! across runs and thread counts.

use crate::config::{DataSourceKind, ExperimentConfig};
use crate::data::{self, Dataset, Scaler};
use perfopt_core::ambiguity::{
    empirical_risk, AmbiguitySpec, NormOrder, Oracle, WassersteinBallSpec,
};
use perfopt_core::linalg;
use perfopt_core::model::{Decision, FeasibleSet, LossModel, RegularityConstants};
use perfopt_core::performative::{DistributionMap, LabeledDistribution};
use perfopt_core::r3m::{run_r3m, R3mConfig, RunStatus, RunTrace};
use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Data(#[from] crate::data::DataError),
    #[error("run failed: {0}")]
    Run(String),
}

impl From<perfopt_core::r3m::R3mError> for ExperimentError {
    fn from(e: perfopt_core::r3m::R3mError) -> Self {
        Self::Run(e.to_string())
    }
}

impl From<perfopt_core::performative::PerformativeError> for ExperimentError {
    fn from(e: perfopt_core::performative::PerformativeError) -> Self {
        Self::Run(e.to_string())
    }
}

impl From<perfopt_core::model::ModelError> for ExperimentError {
    fn from(e: perfopt_core::model::ModelError) -> Self {
        Self::Run(e.to_string())
    }
}

impl From<perfopt_core::ambiguity::AmbiguityError> for ExperimentError {
    fn from(e: perfopt_core::ambiguity::AmbiguityError) -> Self {
        Self::Run(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Robust,
    NonRobust,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Robust => "robust",
            Self::NonRobust => "nonrobust",
        }
    }
}

/// One output row; per-iteration rows carry step distances, terminal rows
/// carry convergence/out-of-sample metrics.
#[derive(Debug, Clone)]
pub struct ResultRow {
    pub experiment: &'static str,
    pub trial: usize,
    pub epsilon: f64,
    pub method: Method,
    pub iteration: usize,
    pub terminal: bool,
    pub step_distance: Option<f64>,
    pub oos_loss: Option<f64>,
    pub oos_accuracy: Option<f64>,
}

/// Deterministic total order used before emission.
pub fn sort_rows(rows: &mut [ResultRow]) {
    rows.sort_by(|a, b| {
        a.epsilon
            .total_cmp(&b.epsilon)
            .then_with(|| a.method.cmp(&b.method))
            .then_with(|| a.trial.cmp(&b.trial))
            .then_with(|| a.terminal.cmp(&b.terminal))
            .then_with(|| a.iteration.cmp(&b.iteration))
    });
}

/// Loss-model constants and problem geometry shared by every run of an
/// experiment.
#[derive(Debug, Clone)]
pub struct Instance {
    pub model: LossModel,
    pub feasible: FeasibleSet,
    pub constants: RegularityConstants,
    pub rho: f64,
    /// Stability threshold (γ+ρ)/β of the robust configuration.
    pub threshold: f64,
}

/// Dataset-calibrated logistic smoothness: the empirical logloss Hessian is
/// E[σ′·zzᵀ] ⪯ E[zzᵀ]/4 and zzᵀ = xxᵀ for z = x·y, so λ_max(Ê[xxᵀ])/4 is a
/// valid (and tight at θ = 0 scale) bound on the gradient's Lipschitz
/// constant in θ for this dataset.
pub fn calibrate_beta(base: &LabeledDistribution) -> f64 {
    let p = base.feature_dim();
    let mut second_moment = vec![vec![0.0; p]; p];
    for (x, w) in base.features().iter().zip(base.probabilities()) {
        for i in 0..p {
            for j in 0..p {
                second_moment[i][j] += w * x[i] * x[j];
            }
        }
    }
    linalg::sym_eig_max(&second_moment) / 4.0
}

/// Assemble the experiment instance from the config and the training data.
/// β defaults to the dataset-calibrated bound, γ to 0 (logistic), and L_z to
/// the feasible radius; all three are overridable in the solver section.
pub fn build_instance(config: &ExperimentConfig, base: &LabeledDistribution) -> Instance {
    let radius = config.solver.feasible_radius;
    let beta = config.solver.beta.unwrap_or_else(|| calibrate_beta(base));
    let gamma = config.solver.gamma.unwrap_or(0.0);
    let l_z = config.solver.l_z.unwrap_or(radius);
    let constants = RegularityConstants {
        gamma,
        beta,
        l_z,
        l_outer: 1.0,
    };
    let data_radius = base
        .features()
        .iter()
        .map(|x| linalg::norm2(x))
        .fold(0.0f64, f64::max);
    let model = LossModel::logistic(data_radius.max(1.0), radius)
        .expect("radii positive")
        .with_constants(constants);
    let p = base.feature_dim();
    let feasible = FeasibleSet::ball(vec![0.0; p], radius).expect("radius positive");
    let rho = 2.0 * config.tau * constants.l_outer;
    let threshold = (gamma + rho) / beta;
    Instance {
        model,
        feasible,
        constants,
        rho,
        threshold,
    }
}

/// The swept sensitivities: the configured list, or a geometric grid
/// bracketing the stability threshold so both regimes appear.
pub fn epsilon_grid(config: &ExperimentConfig, instance: &Instance) -> Vec<f64> {
    if !config.epsilon_values.is_empty() {
        return config.epsilon_values.clone();
    }
    [0.125, 0.25, 0.5, 1.0, 2.0]
        .iter()
        .map(|f| f * instance.threshold)
        .collect()
}

fn ball_spec(tau: f64) -> AmbiguitySpec {
    AmbiguitySpec::Ball(
        WassersteinBallSpec::new(tau, NormOrder::Infinity).expect("nonnegative radius"),
    )
}

/// Per-(ε, method, trial) RNG stream id. Documented splitter: streams are
/// consumed by `seed::derive(master_seed, stream)`.
fn stream_id(eps_idx: usize, method: Method, trial: usize, trials: usize) -> u64 {
    let method_idx = match method {
        Method::Robust => 0,
        Method::NonRobust => 1,
    };
    ((eps_idx * 2 + method_idx) * trials + trial) as u64
}

/// Draw the run's initial decision: standard normal coordinates, projected
/// into the feasible set, with a guard so the strategic block is never the
/// zero vector (its norm is the Fig.-2 normalization constant).
fn draw_initial_theta(
    rng: &mut rand_chacha::ChaCha8Rng,
    p: usize,
    strategic: &[usize],
    feasible: &FeasibleSet,
) -> Decision {
    let mut theta: Vec<f64> = (0..p).map(|_| data::standard_normal(rng)).collect();
    let strategic_norm: f64 = strategic.iter().map(|&i| theta[i] * theta[i]).sum::<f64>().sqrt();
    if strategic_norm < 1e-9 {
        if let Some(&first) = strategic.first() {
            theta[first] = 1.0;
        }
    }
    let projected = feasible.project(&theta).expect("dimension matches");
    Decision::new(projected).expect("finite")
}

fn solver_config(config: &ExperimentConfig, initial_theta: Decision) -> R3mConfig {
    let mut r3m = R3mConfig::new(initial_theta);
    r3m.max_outer_iterations = config.iterations;
    r3m.outer_tolerance = config.solver.outer_tolerance;
    r3m.inner_tolerance = config.solver.inner_tolerance;
    r3m.max_inner_iterations = config.solver.max_inner_iterations;
    r3m.oracle = Oracle::Regularized;
    r3m.seed = config.seed;
    r3m
}

fn run_one(
    config: &ExperimentConfig,
    instance: &Instance,
    base: &LabeledDistribution,
    strategic: &[usize],
    epsilon: f64,
    method: Method,
    theta0: Decision,
) -> Result<RunTrace, ExperimentError> {
    let map = DistributionMap::strategic(base.clone(), strategic.to_vec(), epsilon)?;
    let tau = match method {
        Method::Robust => config.tau,
        Method::NonRobust => 0.0,
    };
    let spec = ball_spec(tau);
    let r3m = solver_config(config, theta0);
    Ok(run_r3m(&instance.model, &map, &spec, &instance.feasible, &r3m)?)
}

/// Normalization constant c = ‖θ_{0,S}‖₂⁻¹ applied to plotted step
/// distances.
fn step_normalizer(theta0: &Decision, strategic: &[usize]) -> f64 {
    let norm: f64 = strategic
        .iter()
        .map(|&i| theta0.coords()[i] * theta0.coords()[i])
        .sum::<f64>()
        .sqrt();
    1.0 / norm.max(1e-12)
}

/// Convergence sweep: for each ε and each method, run R³M and emit one row
/// per outer iteration (normalized step distance) plus a terminal marker row
/// at the first iteration whose step fell below the outer tolerance.
pub fn run_convergence_sweep(
    config: &ExperimentConfig,
    dataset: &Dataset,
) -> Result<Vec<ResultRow>, ExperimentError> {
    let instance = build_instance(config, &dataset.base);
    let epsilons = epsilon_grid(config, &instance);
    let mut tasks = Vec::new();
    for (eps_idx, &epsilon) in epsilons.iter().enumerate() {
        for method in [Method::Robust, Method::NonRobust] {
            for trial in 0..config.trials {
                tasks.push((eps_idx, epsilon, method, trial));
            }
        }
    }
    let rows: Result<Vec<Vec<ResultRow>>, ExperimentError> = tasks
        .par_iter()
        .map(|&(eps_idx, epsilon, method, trial)| {
            let stream = stream_id(eps_idx, method, trial, config.trials);
            let mut rng = perfopt_core::seed::rng(config.seed, stream);
            let theta0 = draw_initial_theta(
                &mut rng,
                dataset.base.feature_dim(),
                &dataset.strategic,
                &instance.feasible,
            );
            let normalizer = step_normalizer(&theta0, &dataset.strategic);
            let trace = run_one(
                config,
                &instance,
                &dataset.base,
                &dataset.strategic,
                epsilon,
                method,
                theta0,
            )?;
            let mut out = Vec::with_capacity(trace.iterations.len() + 1);
            for (t, rec) in trace.iterations.iter().enumerate() {
                out.push(ResultRow {
                    experiment: "convergence_sweep",
                    trial,
                    epsilon,
                    method,
                    iteration: t + 1,
                    terminal: false,
                    step_distance: Some(rec.step * normalizer),
                    oos_loss: None,
                    oos_accuracy: None,
                });
            }
            if trace.status == RunStatus::Converged {
                let last = trace.iterations.len();
                out.push(ResultRow {
                    experiment: "convergence_sweep",
                    trial,
                    epsilon,
                    method,
                    iteration: last,
                    terminal: true,
                    step_distance: Some(trace.iterations[last - 1].step * normalizer),
                    oos_loss: None,
                    oos_accuracy: None,
                });
            }
            Ok(out)
        })
        .collect();
    let mut rows: Vec<ResultRow> = rows?.into_iter().flatten().collect();
    sort_rows(&mut rows);
    Ok(rows)
}

/// Fresh train/test pair for one out-of-sample trial. The synthetic source
/// draws disjoint train and test samples from the trial's stream and
/// standardizes both with the train scaler; the CSV source splits the loaded
/// rows by a seeded permutation.
fn trial_split(
    config: &ExperimentConfig,
    dataset: &Dataset,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<(LabeledDistribution, LabeledDistribution), ExperimentError> {
    match config.data.source {
        DataSourceKind::Synthetic => {
            // Two sequential draws from the trial's stream: independent,
            // disjoint by construction, each with the configured balance.
            let raw_train = data::generate_synthetic(
                rng,
                config.train_size,
                config.data.features,
                config.data.class_balance,
            );
            let raw_test = data::generate_synthetic(
                rng,
                config.test_size,
                config.data.features,
                config.data.class_balance,
            );
            let scaler = if config.data.standardize {
                Scaler::fit(&raw_train.features)
            } else {
                Scaler::identity(config.data.features)
            };
            let train = LabeledDistribution::uniform(
                scaler.apply_all(&raw_train.features),
                raw_train.labels,
            )
            .map_err(|e| ExperimentError::Run(e.to_string()))?;
            let test = LabeledDistribution::uniform(
                scaler.apply_all(&raw_test.features),
                raw_test.labels,
            )
            .map_err(|e| ExperimentError::Run(e.to_string()))?;
            Ok((train, test))
        }
        DataSourceKind::Csv => {
            let n = dataset.base.len();
            let need = config.train_size + config.test_size;
            if need > n {
                return Err(crate::data::DataError::TooSmall { need, have: n }.into());
            }
            // Fisher–Yates over row indices.
            let mut indices: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = rng.gen_range(0..=i);
                indices.swap(i, j);
            }
            let pick = |range: std::ops::Range<usize>| {
                let rows: Vec<usize> = indices[range].to_vec();
                let features: Vec<Vec<f64>> = rows
                    .iter()
                    .map(|&i| dataset.base.features()[i].clone())
                    .collect();
                let labels: Vec<f64> = rows.iter().map(|&i| dataset.base.labels()[i]).collect();
                LabeledDistribution::uniform(features, labels)
                    .map_err(|e| ExperimentError::Run(e.to_string()))
            };
            let train = pick(0..config.train_size)?;
            let test = pick(config.train_size..need)?;
            Ok((train, test))
        }
    }
}

/// Out-of-sample comparison: per trial, train both methods for the
/// configured number of iterations, deploy the final decision, realize the
/// map at that decision on held-out test data, and record performative loss
/// and accuracy. Emits exactly two terminal rows per (ε, trial).
pub fn run_oos_comparison(
    config: &ExperimentConfig,
    dataset: &Dataset,
) -> Result<Vec<ResultRow>, ExperimentError> {
    let instance = build_instance(config, &dataset.base);
    let epsilons = epsilon_grid(config, &instance);
    let mut tasks = Vec::new();
    for (eps_idx, &epsilon) in epsilons.iter().enumerate() {
        for trial in 0..config.trials {
            tasks.push((eps_idx, epsilon, trial));
        }
    }
    let rows: Result<Vec<Vec<ResultRow>>, ExperimentError> = tasks
        .par_iter()
        .map(|&(eps_idx, epsilon, trial)| {
            // Both methods share the trial's data and initial decision; the
            // method index in the stream id is fixed to 0 for that reason.
            let stream = stream_id(eps_idx, Method::Robust, trial, config.trials);
            let mut rng = perfopt_core::seed::rng(config.seed, stream);
            let (train, test) = trial_split(config, dataset, &mut rng)?;
            let trial_instance = build_instance(config, &train);
            let theta0 = draw_initial_theta(
                &mut rng,
                train.feature_dim(),
                &dataset.strategic,
                &trial_instance.feasible,
            );
            let mut out = Vec::with_capacity(2);
            for method in [Method::Robust, Method::NonRobust] {
                let trace = run_one(
                    config,
                    &trial_instance,
                    &train,
                    &dataset.strategic,
                    epsilon,
                    method,
                    theta0.clone(),
                )?;
                let theta = trace.final_theta().clone();
                let (loss, accuracy) = evaluate_deployment(
                    &trial_instance.model,
                    &test,
                    &dataset.strategic,
                    epsilon,
                    &theta,
                )?;
                out.push(ResultRow {
                    experiment: "oos_comparison",
                    trial,
                    epsilon,
                    method,
                    iteration: trace.iterations.len(),
                    terminal: true,
                    step_distance: None,
                    oos_loss: Some(loss),
                    oos_accuracy: Some(accuracy),
                });
            }
            Ok(out)
        })
        .collect();
    let mut rows: Vec<ResultRow> = rows?.into_iter().flatten().collect();
    sort_rows(&mut rows);
    Ok(rows)
}

/// Deploy θ against a held-out population: the agents best-respond, and we
/// record the realized performative logloss and the accuracy of the margin
/// rule (predict +1 iff x′ᵀθ ≥ 0).
pub fn evaluate_deployment(
    model: &LossModel,
    test: &LabeledDistribution,
    strategic: &[usize],
    epsilon: f64,
    theta: &Decision,
) -> Result<(f64, f64), ExperimentError> {
    let map = DistributionMap::strategic(test.clone(), strategic.to_vec(), epsilon)?;
    let realized = map.realize(theta)?;
    let loss = empirical_risk(model, &realized, theta)?;
    let mut correct = 0.0;
    for ((x, &y), w) in test
        .features()
        .iter()
        .zip(test.labels())
        .zip(test.probabilities())
    {
        let mut margin = linalg::dot(x, theta.coords());
        for &i in strategic {
            margin -= epsilon * theta.coords()[i] * theta.coords()[i];
        }
        let prediction = if margin >= 0.0 { 1.0 } else { -1.0 };
        if prediction == y {
            correct += w;
        }
    }
    Ok((loss, correct))
}
