//! The standard certification suite behind `perfopt certify`: contraction,
//! linear rate, and suboptimality bounds checked on synthetic instances with
//! analytically known constants.

use perfopt_core::ambiguity::{AmbiguitySpec, NormOrder, Oracle, WassersteinBallSpec};
use perfopt_core::analysis::{
    certify_contraction, certify_rate, certify_suboptimality, AnalysisError, BoundReport,
    InstanceConstants,
};
use perfopt_core::model::{
    Decision, EmpiricalDistribution, FeasibleSet, LossModel, RegularityConstants, Sample,
};
use perfopt_core::performative::DistributionMap;
use perfopt_core::r3m::R3mConfig;

/// A named bound check.
pub struct CertificationOutcome {
    pub name: String,
    pub report: BoundReport,
}

fn ball(radius: f64) -> AmbiguitySpec {
    AmbiguitySpec::Ball(WassersteinBallSpec::new(radius, NormOrder::Infinity).expect("radius ≥ 0"))
}

fn points(values: &[Vec<f64>]) -> EmpiricalDistribution {
    EmpiricalDistribution::uniform(
        values
            .iter()
            .map(|v| Sample::new(v.clone()).expect("finite"))
            .collect(),
    )
    .expect("nonempty")
}

/// Quadratic loss 0.5(θ−z)ᵀ(θ−z) in `dim` dimensions: γ = β = 1 exactly.
fn unit_quadratic(dim: usize) -> LossModel {
    let a: Vec<Vec<f64>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { 0.5 } else { 0.0 }).collect())
        .collect();
    LossModel::quadratic(a, vec![0.0; dim], 0.0, 5.0, 5.0).expect("valid quadratic")
}

/// Contraction check (theorem a): 2-D quadratic loss with a diagonal linear
/// shift of known spectral norm, τ = 0 so ρ = 0 and the bound is ε exactly.
fn contraction_instance(seed: u64) -> Result<CertificationOutcome, AnalysisError> {
    let model = unit_quadratic(2);
    let base = points(&[vec![0.6, -0.2], vec![-0.1, 0.4], vec![0.3, 0.1]]);
    let map = DistributionMap::linear_shift(base, vec![vec![0.4, 0.0], vec![0.0, 0.1]])
        .map_err(AnalysisError::Performative)?;
    let spec = ball(0.0);
    let constants = InstanceConstants::from_instance(&model, &map, &spec)?;
    let mut config = R3mConfig::new(Decision::new(vec![0.0, 0.0]).expect("finite"));
    config.seed = seed;
    let report = certify_contraction(
        &model,
        &map,
        &spec,
        &FeasibleSet::Unbounded,
        &config,
        100,
        &[-2.0, -2.0],
        &[2.0, 2.0],
        constants,
    )?;
    Ok(CertificationOutcome {
        name: "contraction (2-D linear shift, ε = 0.4)".into(),
        report,
    })
}

/// Rate check (theorem b) across contraction factors: 1-D quadratic loss
/// with shift slope m gives factor exactly m.
fn rate_instances(seed: u64) -> Result<Vec<CertificationOutcome>, AnalysisError> {
    let mut outcomes = Vec::new();
    for &factor in &[0.1, 0.3, 0.5, 0.7, 0.9] {
        let model = unit_quadratic(1);
        let base = points(&[vec![0.4], vec![-0.2]]);
        let map = DistributionMap::linear_shift(base, vec![vec![factor]])
            .map_err(AnalysisError::Performative)?;
        let spec = ball(0.0);
        let constants = InstanceConstants::from_instance(&model, &map, &spec)?;
        let mut config = R3mConfig::new(Decision::new(vec![-2.0]).expect("finite"));
        config.seed = seed;
        config.max_outer_iterations = 5_000;
        let report = certify_rate(
            &model,
            &map,
            &spec,
            &FeasibleSet::Unbounded,
            &config,
            1e-4,
            constants,
        )?;
        outcomes.push(CertificationOutcome {
            name: format!("linear rate (factor {factor})"),
            report,
        });
    }
    Ok(outcomes)
}

/// Suboptimality check: 1-D logistic with Tikhonov τ = 0.5 (ρ = 1), the
/// feasible set restricted to ‖θ‖ ≤ 1 so L_z = 1, against linear shifts of
/// sensitivity ε ∈ {0, 0.05, 0.1}. The bound is 2ε².
fn suboptimality_instances(seed: u64) -> Result<Vec<CertificationOutcome>, AnalysisError> {
    let mut outcomes = Vec::new();
    for &epsilon in &[0.0, 0.05, 0.1] {
        let model = LossModel::logistic(2.0, 1.0)
            .expect("radii positive")
            .with_constants(RegularityConstants {
                gamma: 0.0,
                beta: 1.0,
                l_z: 1.0,
                l_outer: 1.0,
            });
        let base = points(&[vec![1.1], vec![-0.4], vec![0.7]]);
        let map = DistributionMap::linear_shift(base, vec![vec![epsilon]])
            .map_err(AnalysisError::Performative)?;
        let spec = ball(0.5);
        let feasible = FeasibleSet::ball(vec![0.0], 1.0).expect("radius positive");
        let constants = InstanceConstants::from_instance(&model, &map, &spec)?;
        let mut config = R3mConfig::new(Decision::new(vec![0.4]).expect("finite"));
        config.seed = seed;
        let report = certify_suboptimality(
            &model,
            &map,
            &spec,
            &feasible,
            &config,
            &[-1.0],
            &[1.0],
            2001,
            Oracle::Regularized,
            constants,
        )?;
        outcomes.push(CertificationOutcome {
            name: format!("suboptimality (ε = {epsilon})"),
            report,
        });
    }
    Ok(outcomes)
}

/// Run the full suite. Deterministic under a fixed seed.
pub fn run_certification(seed: u64) -> Result<Vec<CertificationOutcome>, AnalysisError> {
    let mut outcomes = vec![contraction_instance(seed)?];
    outcomes.extend(rate_instances(seed)?);
    outcomes.extend(suboptimality_instances(seed)?);
    Ok(outcomes)
}

/// Render one pass/fail line per bound.
pub fn format_outcome(outcome: &CertificationOutcome) -> String {
    let r = &outcome.report;
    let c = &r.instance_constants;
    let verdict = if r.satisfied { "PASS" } else { "FAIL" };
    let mut line = format!(
        "[{verdict}] {:<14} {:<38} empirical {:>12.6e}  bound {:>12.6e}  (ε={} β={} γ={} ρ={} L_z={})",
        r.theorem_id.name(),
        outcome.name,
        r.empirical_value,
        r.theoretical_bound,
        c.epsilon,
        c.beta,
        c.gamma,
        c.rho,
        c.l_z
    );
    for flag in &r.flags {
        line.push_str(&format!("\n       note: {flag}"));
    }
    line
}
