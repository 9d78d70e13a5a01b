//! Repeated robust risk minimization: the fixed-point iteration
//! `θ_{t+1} = G(θ_t) = argmin_{θ∈Θ} sup_{Q∈B(P̂(θ_t))} E_Q[ℓ(z̃,θ)]`.
//!
//! The ambiguity set is rebuilt from the previous iterate at every outer
//! step, which decouples the decision in the set from the decision in the
//! loss — that decoupling is the whole point of the scheme. The inner
//! strongly-convex problem is solved by projected gradient descent with an
//! Armijo backtracking line search, warm-started from the previous iterate.
//!
//! A run is inherently sequential; independent runs (trials, ε sweeps) can
//! execute in parallel with their own configs.

use crate::ambiguity::{
    empirical_risk, regularization_rho, AmbiguityError, AmbiguitySpec, NormOrder, Oracle,
    WassersteinBallSpec,
};
use crate::linalg;
use crate::model::{
    Decision, EmpiricalDistribution, FeasibleSet, LossModel, ModelError,
};
use crate::performative::{DistributionMap, PerformativeError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum R3mError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Ambiguity(#[from] AmbiguityError),
    #[error(transparent)]
    Performative(#[from] PerformativeError),
    #[error("γ+ρ = {total} is not positive (γ = {gamma}, ρ = {rho}); the inner problem has no unique minimizer")]
    ZeroCurvature { gamma: f64, rho: f64, total: f64 },
    #[error("objective not smooth enough for the inner solver: {detail}")]
    UnsupportedObjective { detail: String },
    #[error("invalid config: {detail}")]
    InvalidConfig { detail: String },
}

/// Configuration for [`run_r3m`] and [`solve_inner`].
#[derive(Debug, Clone)]
pub struct R3mConfig {
    pub max_outer_iterations: usize,
    /// Convergence threshold on ‖θ_{t+1} − θ_t‖₂.
    pub outer_tolerance: f64,
    /// Convergence threshold on the projected-gradient-map norm.
    pub inner_tolerance: f64,
    pub max_inner_iterations: usize,
    pub initial_theta: Decision,
    pub oracle: Oracle,
    pub seed: u64,
}

impl R3mConfig {
    pub fn new(initial_theta: Decision) -> Self {
        Self {
            max_outer_iterations: 100,
            outer_tolerance: 1e-7,
            inner_tolerance: 1e-8,
            max_inner_iterations: 10_000,
            initial_theta,
            oracle: Oracle::Regularized,
            seed: 0,
        }
    }

    fn validate(&self) -> Result<(), R3mError> {
        if !(self.outer_tolerance > 0.0) || !(self.inner_tolerance > 0.0) {
            return Err(R3mError::InvalidConfig {
                detail: "tolerances must be positive".into(),
            });
        }
        if self.max_outer_iterations == 0 || self.max_inner_iterations == 0 {
            return Err(R3mError::InvalidConfig {
                detail: "iteration caps must be at least 1".into(),
            });
        }
        Ok(())
    }
}

/// Differentiable representation of `θ ↦ sup_{Q∈B(ref)} E_Q[ℓ(z̃,θ)]` for
/// the smooth oracle paths: radius zero (empirical risk, any smooth loss)
/// and Wasserstein balls over Lipschitz margin losses.
pub struct RobustObjective<'a> {
    model: &'a LossModel,
    reference: &'a EmpiricalDistribution,
    ball: Option<WassersteinBallSpec>,
    rho: f64,
}

impl<'a> RobustObjective<'a> {
    pub fn new(
        model: &'a LossModel,
        reference: &'a EmpiricalDistribution,
        spec: &AmbiguitySpec,
    ) -> Result<Self, R3mError> {
        let ball = match spec {
            AmbiguitySpec::Ball(ball) => *ball,
            AmbiguitySpec::EventWise(_) => {
                return Err(R3mError::UnsupportedObjective {
                    detail: "event-wise worst cases are piecewise and not differentiable in θ"
                        .into(),
                })
            }
        };
        if !model.beta().is_finite() {
            return Err(R3mError::UnsupportedObjective {
                detail: format!("loss kind {} has no finite smoothness constant", model.kind().name()),
            });
        }
        if ball.radius() > 0.0 && !model.is_lipschitz_margin_loss() {
            return Err(R3mError::UnsupportedObjective {
                detail: format!(
                    "positive-radius ball needs a Lipschitz margin loss, got {}",
                    model.kind().name()
                ),
            });
        }
        if ball.radius() > 0.0 && ball.norm_order() == NormOrder::One {
            return Err(R3mError::UnsupportedObjective {
                detail: "the ℓ∞ regularizer of the q=1 ball is not differentiable".into(),
            });
        }
        let rho = regularization_rho(model, &ball)?;
        Ok(Self {
            model,
            reference,
            ball: Some(ball),
            rho,
        })
    }

    /// Strong-convexity modulus contributed by the regularizer.
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Total curvature γ+ρ of the objective.
    pub fn curvature(&self) -> f64 {
        self.model.gamma() + self.rho
    }

    pub fn value(&self, theta: &Decision) -> Result<f64, R3mError> {
        let empirical = empirical_risk(self.model, self.reference, theta)?;
        let ball = self.ball.expect("constructed with a ball");
        if ball.radius() == 0.0 {
            return Ok(empirical);
        }
        let tau_l = ball.radius() * self.model.l_outer();
        Ok(match ball.norm_order() {
            NormOrder::Infinity => {
                empirical + tau_l * (linalg::dot(theta.coords(), theta.coords()) + 1.0)
            }
            NormOrder::Two => empirical + tau_l * linalg::norm2(theta.coords()),
            NormOrder::One => unreachable!("rejected at construction"),
        })
    }

    pub fn gradient(&self, theta: &Decision) -> Result<Vec<f64>, R3mError> {
        let mut grad = vec![0.0; theta.dim()];
        for (s, p) in self
            .reference
            .scenarios()
            .iter()
            .zip(self.reference.probabilities())
        {
            let g = self.model.grad_theta(s, theta)?;
            for (acc, gi) in grad.iter_mut().zip(&g) {
                *acc += p * gi;
            }
        }
        let ball = self.ball.expect("constructed with a ball");
        if ball.radius() > 0.0 {
            let tau_l = ball.radius() * self.model.l_outer();
            match ball.norm_order() {
                NormOrder::Infinity => {
                    for (acc, t) in grad.iter_mut().zip(theta.coords()) {
                        *acc += 2.0 * tau_l * t;
                    }
                }
                NormOrder::Two => {
                    let nrm = linalg::norm2(theta.coords());
                    if nrm > 0.0 {
                        for (acc, t) in grad.iter_mut().zip(theta.coords()) {
                            *acc += tau_l * t / nrm;
                        }
                    }
                }
                NormOrder::One => unreachable!("rejected at construction"),
            }
        }
        Ok(grad)
    }
}

/// Result of one inner strongly-convex solve.
#[derive(Debug, Clone)]
pub struct InnerSolution {
    pub theta: Decision,
    /// Objective value J at the returned iterate.
    pub objective: f64,
    pub inner_iterations: usize,
    /// Projected-gradient-map norm at exit.
    pub gradient_map_norm: f64,
    /// Set when the iteration cap was reached before the tolerance; the
    /// returned iterate is the best found.
    pub hit_iteration_cap: bool,
}

/// Armijo sufficient-decrease constant.
const ARMIJO_C1: f64 = 1e-4;
/// Line-search shrink factor.
const BACKTRACK: f64 = 0.5;
/// Line-search halving cap per iteration.
const MAX_BACKTRACKS: usize = 60;

/// Solve `argmin_{θ∈Θ} sup_{Q∈B(ref)} E_Q[ℓ(z̃,θ)]` for a fixed reference
/// distribution: projected gradient descent with backtracking, initial step
/// `1/(β+ρ)`, stopping when the fixed-step gradient-map norm falls below
/// `config.inner_tolerance`.
///
/// Requires γ+ρ > 0 (unique minimizer); returns the best iterate flagged
/// via [`InnerSolution::hit_iteration_cap`] when the cap binds.
pub fn solve_inner(
    model: &LossModel,
    reference: &EmpiricalDistribution,
    spec: &AmbiguitySpec,
    feasible: &FeasibleSet,
    config: &R3mConfig,
    warm_start: &Decision,
) -> Result<InnerSolution, R3mError> {
    config.validate()?;
    let objective = RobustObjective::new(model, reference, spec)?;
    let curvature = objective.curvature();
    if curvature <= 0.0 {
        return Err(R3mError::ZeroCurvature {
            gamma: model.gamma(),
            rho: objective.rho(),
            total: curvature,
        });
    }
    let step0 = 1.0 / (model.beta() + objective.rho());

    let mut x = Decision::new(feasible.project(warm_start.coords())?)?;
    let mut fx = objective.value(&x)?;
    let mut iterations = 0;
    let mut gradient_map_norm;
    loop {
        let grad = objective.gradient(&x)?;
        let reference_point = feasible.project(&linalg::axpy(x.coords(), -step0, &grad))?;
        gradient_map_norm = linalg::dist2(x.coords(), &reference_point) / step0;
        if gradient_map_norm <= config.inner_tolerance {
            break;
        }
        if iterations >= config.max_inner_iterations {
            return Ok(InnerSolution {
                objective: fx,
                theta: x,
                inner_iterations: iterations,
                gradient_map_norm,
                hit_iteration_cap: true,
            });
        }
        // Backtracking from the fixed initial step; the first candidate
        // reuses the projection just computed.
        let mut step = step0;
        let mut candidate = reference_point;
        let mut accepted = false;
        for _ in 0..MAX_BACKTRACKS {
            let cd = Decision::new(candidate.clone())?;
            let fc = objective.value(&cd)?;
            let decrease = linalg::dot(&grad, &linalg::sub(&candidate, x.coords()));
            if fc <= fx + ARMIJO_C1 * decrease {
                x = cd;
                fx = fc;
                accepted = true;
                break;
            }
            step *= BACKTRACK;
            candidate = feasible.project(&linalg::axpy(x.coords(), -step, &grad))?;
        }
        iterations += 1;
        if !accepted {
            // No decrease at the numerical floor: the iterate is as good as
            // double precision allows.
            break;
        }
    }
    Ok(InnerSolution {
        objective: fx,
        theta: x,
        inner_iterations: iterations,
        gradient_map_norm,
        hit_iteration_cap: false,
    })
}

/// Terminal status of an R³M run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Converged,
    MaxIterations,
    Diverged,
}

/// One outer iteration of the trace.
#[derive(Debug, Clone)]
pub struct IterationRecord {
    pub theta: Decision,
    /// Decoupled objective J_{θ_{t-1}}(θ_t) from the inner solve.
    pub objective: f64,
    /// ‖θ_t − θ_{t-1}‖₂.
    pub step: f64,
    /// step_t / step_{t-1}, when the previous step was positive.
    pub contraction_ratio: Option<f64>,
    pub inner_iterations: usize,
    pub inner_hit_cap: bool,
}

/// Full per-iteration record of an R³M run.
#[derive(Debug, Clone)]
pub struct RunTrace {
    pub initial_theta: Decision,
    pub iterations: Vec<IterationRecord>,
    pub status: RunStatus,
}

impl RunTrace {
    pub fn final_theta(&self) -> &Decision {
        self.iterations
            .last()
            .map(|r| &r.theta)
            .unwrap_or(&self.initial_theta)
    }

    /// First outer iteration (1-based) whose step fell at or below `tol`.
    pub fn first_iteration_below(&self, tol: f64) -> Option<usize> {
        self.iterations
            .iter()
            .position(|r| r.step <= tol)
            .map(|i| i + 1)
    }
}

/// Step blow-up factor that classifies a run as diverged (relative to the
/// first step, so unbounded feasible sets are handled).
const DIVERGENCE_FACTOR: f64 = 1e6;

/// Run repeated robust risk minimization with the ambiguity set rebuilt from
/// the previous iterate at each step.
pub fn run_r3m(
    model: &LossModel,
    map: &DistributionMap,
    spec: &AmbiguitySpec,
    feasible: &FeasibleSet,
    config: &R3mConfig,
) -> Result<RunTrace, R3mError> {
    config.validate()?;
    let initial = Decision::new(feasible.project(config.initial_theta.coords())?)?;
    let mut current = initial.clone();
    let mut iterations = Vec::new();
    let mut prev_step: Option<f64> = None;
    let mut first_step: Option<f64> = None;
    let mut status = RunStatus::MaxIterations;

    for _ in 0..config.max_outer_iterations {
        let reference = map.realize(&current)?;
        let inner = solve_inner(model, &reference, spec, feasible, config, &current)?;
        let step = linalg::dist2(inner.theta.coords(), current.coords());
        let contraction_ratio = prev_step.filter(|&p| p > 0.0).map(|p| step / p);
        iterations.push(IterationRecord {
            theta: inner.theta.clone(),
            objective: inner.objective,
            step,
            contraction_ratio,
            inner_iterations: inner.inner_iterations,
            inner_hit_cap: inner.hit_iteration_cap,
        });
        current = inner.theta;
        if step <= config.outer_tolerance {
            status = RunStatus::Converged;
            break;
        }
        if first_step.is_none() {
            first_step = Some(step);
        }
        if let Some(s0) = first_step {
            if s0 > 0.0 && step > DIVERGENCE_FACTOR * s0 {
                status = RunStatus::Diverged;
                break;
            }
        }
        prev_step = Some(step);
    }
    Ok(RunTrace {
        initial_theta: initial,
        iterations,
        status,
    })
}

/// Stability residual ‖G(candidate) − candidate‖₂: one inner solve with the
/// ambiguity set frozen at the candidate. A residual at or below the outer
/// tolerance certifies robust performative stability numerically.
pub fn check_stability(
    model: &LossModel,
    map: &DistributionMap,
    spec: &AmbiguitySpec,
    feasible: &FeasibleSet,
    candidate: &Decision,
    config: &R3mConfig,
) -> Result<f64, R3mError> {
    let reference = map.realize(candidate)?;
    let inner = solve_inner(model, &reference, spec, feasible, config, candidate)?;
    Ok(linalg::dist2(inner.theta.coords(), candidate.coords()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Sample;
    use rand::Rng;

    fn ball(radius: f64) -> AmbiguitySpec {
        AmbiguitySpec::Ball(WassersteinBallSpec::new(radius, NormOrder::Infinity).unwrap())
    }

    fn point_dist(points: &[Vec<f64>]) -> EmpiricalDistribution {
        EmpiricalDistribution::uniform(
            points.iter().map(|p| Sample::new(p.clone()).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn inner_solver_finds_quadratic_minimum() {
        // E[(θ−z)ᵀ(θ−z)] with z ≡ 0: minimizer is the origin.
        let model = LossModel::quadratic(
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![0.0, 0.0],
            0.0,
            1.0,
            5.0,
        )
        .unwrap();
        let reference = point_dist(&[vec![0.0, 0.0]]);
        let config = R3mConfig::new(Decision::new(vec![3.0, -4.0]).unwrap());
        let sol = solve_inner(
            &model,
            &reference,
            &ball(0.0),
            &FeasibleSet::Unbounded,
            &config,
            &config.initial_theta,
        )
        .unwrap();
        assert!(linalg::norm2(sol.theta.coords()) <= 1e-7);
        assert!(!sol.hit_iteration_cap);
    }

    #[test]
    fn inner_solver_matches_fine_grid_on_ridge_logistic() {
        // Two-point separable data; Tikhonov τ = 0.1. Compare against an
        // independent 501×501 grid search over [−5, 5]².
        let model = LossModel::logistic(3.0, 8.0).unwrap();
        let reference = point_dist(&[vec![1.0, 0.5], vec![0.5, -1.0]]);
        let tau = 0.1;
        let spec = ball(tau);
        let config = R3mConfig::new(Decision::new(vec![0.0, 0.0]).unwrap());
        let sol = solve_inner(
            &model,
            &reference,
            &spec,
            &FeasibleSet::Unbounded,
            &config,
            &config.initial_theta,
        )
        .unwrap();

        let objective = |t: &[f64]| {
            let d = Decision::new(t.to_vec()).unwrap();
            let mut v = 0.0;
            for (s, p) in reference.scenarios().iter().zip(reference.probabilities()) {
                v += p * model.value(s, &d).unwrap();
            }
            v + tau * (linalg::dot(t, t) + 1.0)
        };
        let mut best = (f64::INFINITY, vec![0.0, 0.0]);
        for i in 0..501 {
            for j in 0..501 {
                let t = vec![-5.0 + 0.02 * i as f64, -5.0 + 0.02 * j as f64];
                let v = objective(&t);
                if v < best.0 {
                    best = (v, t);
                }
            }
        }
        assert!(
            (sol.objective - best.0).abs() <= 1e-3,
            "solver {} vs grid {}",
            sol.objective,
            best.0
        );
        assert!(linalg::dist2(sol.theta.coords(), &best.1) <= 0.03);
    }

    #[test]
    fn warm_start_at_optimum_returns_immediately() {
        let model = LossModel::quadratic(vec![vec![1.0]], vec![0.0], 0.0, 1.0, 5.0).unwrap();
        let reference = point_dist(&[vec![2.0]]);
        let config = R3mConfig::new(Decision::new(vec![0.0]).unwrap());
        let optimal = Decision::new(vec![2.0]).unwrap();
        let sol = solve_inner(
            &model,
            &reference,
            &ball(0.0),
            &FeasibleSet::Unbounded,
            &config,
            &optimal,
        )
        .unwrap();
        assert!(sol.inner_iterations <= 2);
        assert_eq!(sol.theta.coords()[0].to_bits(), optimal.coords()[0].to_bits());
    }

    #[test]
    fn zero_curvature_is_rejected() {
        let model = LossModel::logistic(1.0, 1.0).unwrap();
        let reference = point_dist(&[vec![1.0]]);
        let config = R3mConfig::new(Decision::new(vec![0.0]).unwrap());
        let err = solve_inner(
            &model,
            &reference,
            &ball(0.0),
            &FeasibleSet::Unbounded,
            &config,
            &config.initial_theta,
        )
        .unwrap_err();
        assert!(matches!(err, R3mError::ZeroCurvature { .. }));
    }

    #[test]
    fn first_order_optimality_residual_holds() {
        let model = LossModel::logistic(2.0, 3.0).unwrap();
        let reference = point_dist(&[vec![1.0, -0.5], vec![-0.4, 0.8], vec![0.3, 0.3]]);
        let spec = ball(0.15);
        let feasible = FeasibleSet::ball(vec![0.0, 0.0], 2.0).unwrap();
        let config = R3mConfig::new(Decision::new(vec![1.0, 1.0]).unwrap());
        let sol = solve_inner(&model, &reference, &spec, &feasible, &config, &config.initial_theta)
            .unwrap();
        let objective = RobustObjective::new(&model, &reference, &spec).unwrap();
        let grad = objective.gradient(&sol.theta).unwrap();
        let mut rng = crate::seed::rng(0x33, 0);
        for _ in 0..50 {
            let y = feasible
                .project(&[rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)])
                .unwrap();
            let d = linalg::sub(&y, sol.theta.coords());
            assert!(
                linalg::dot(&grad, &d) >= -1e-6,
                "first-order residual violated"
            );
        }
    }

    #[test]
    fn fixed_map_converges_in_one_effective_step() {
        let model = LossModel::logistic(2.0, 5.0).unwrap();
        let base = point_dist(&[vec![1.0, 0.2], vec![-0.3, -1.0]]);
        let map = DistributionMap::fixed(base);
        let config = R3mConfig::new(Decision::new(vec![1.5, -0.5]).unwrap());
        let trace = run_r3m(
            &model,
            &map,
            &ball(0.1),
            &FeasibleSet::Unbounded,
            &config,
        )
        .unwrap();
        assert_eq!(trace.status, RunStatus::Converged);
        assert_eq!(trace.iterations.len(), 2);
        // Warm starting from the fixed point returns it bit-for-bit.
        assert_eq!(trace.iterations[1].step, 0.0);
    }

    #[test]
    fn contraction_ratios_respect_the_bound() {
        // Quadratic loss, linear shift M = m·I with τ = 0:
        // G(θ) = z̄ + Mθ, so the contraction factor is exactly |m| = εβ/γ·(γ/β).
        let m = 0.45;
        let model = LossModel::quadratic(
            vec![vec![0.5, 0.0], vec![0.0, 0.5]],
            vec![0.0, 0.0],
            0.0,
            3.0,
            5.0,
        )
        .unwrap();
        let base = point_dist(&[vec![0.6, -0.2], vec![-0.1, 0.4]]);
        let map = DistributionMap::linear_shift(
            base,
            vec![vec![m, 0.0], vec![0.0, m]],
        )
        .unwrap();
        let config = R3mConfig::new(Decision::new(vec![2.0, -1.5]).unwrap());
        let trace = run_r3m(
            &model,
            &map,
            &ball(0.0),
            &FeasibleSet::Unbounded,
            &config,
        )
        .unwrap();
        assert_eq!(trace.status, RunStatus::Converged);
        let bound = map.epsilon() * model.beta() / model.gamma();
        for rec in trace.iterations.iter().skip(1) {
            if let Some(ratio) = rec.contraction_ratio {
                // Ratios collapse to ~0 at convergence; they must never
                // exceed the theoretical factor by more than tolerance.
                assert!(
                    ratio <= bound + 0.05,
                    "ratio {ratio} exceeded bound {bound}"
                );
            }
        }
    }

    #[test]
    fn expansive_map_is_flagged_as_diverged() {
        let model = LossModel::quadratic(vec![vec![0.5]], vec![0.0], 0.0, 3.0, 5.0).unwrap();
        let base = point_dist(&[vec![0.5]]);
        let map = DistributionMap::linear_shift(base, vec![vec![2.0]]).unwrap();
        let mut config = R3mConfig::new(Decision::new(vec![1.0]).unwrap());
        config.max_outer_iterations = 200;
        let trace = run_r3m(
            &model,
            &map,
            &ball(0.0),
            &FeasibleSet::Unbounded,
            &config,
        )
        .unwrap();
        assert_eq!(trace.status, RunStatus::Diverged);
        // Steps must have been growing when the run was cut off.
        let n = trace.iterations.len();
        assert!(trace.iterations[n - 1].step > trace.iterations[n - 2].step);
    }

    #[test]
    fn stability_residuals_classify_candidates() {
        let model = LossModel::logistic(2.0, 5.0).unwrap();
        let base = LabeledBase::make();
        let map = DistributionMap::strategic(base, vec![0], 0.2).unwrap();
        let spec = ball(0.1);
        let feasible = FeasibleSet::Unbounded;
        let config = R3mConfig::new(Decision::new(vec![0.5, 0.5]).unwrap());
        let trace = run_r3m(&model, &map, &spec, &feasible, &config).unwrap();
        assert_eq!(trace.status, RunStatus::Converged);
        let residual =
            check_stability(&model, &map, &spec, &feasible, trace.final_theta(), &config).unwrap();
        assert!(
            residual <= 10.0 * config.outer_tolerance,
            "converged run residual {residual}"
        );
        let random = Decision::new(vec![2.0, -2.0]).unwrap();
        let residual = check_stability(&model, &map, &spec, &feasible, &random, &config).unwrap();
        assert!(residual > 0.01, "non-optimal candidate residual {residual}");
    }

    #[test]
    fn traces_are_bitwise_deterministic() {
        let model = LossModel::logistic(2.0, 5.0).unwrap();
        let base = LabeledBase::make();
        let map = DistributionMap::strategic(base, vec![0], 0.3).unwrap();
        let config = R3mConfig::new(Decision::new(vec![0.8, -0.6]).unwrap());
        let run = || {
            run_r3m(&model, &map, &ball(0.1), &FeasibleSet::Unbounded, &config).unwrap()
        };
        let t1 = run();
        let t2 = run();
        assert_eq!(t1.iterations.len(), t2.iterations.len());
        for (a, b) in t1.iterations.iter().zip(&t2.iterations) {
            assert_eq!(a.step.to_bits(), b.step.to_bits());
            assert_eq!(a.objective.to_bits(), b.objective.to_bits());
            for (x, y) in a.theta.coords().iter().zip(b.theta.coords()) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }

    /// Small labeled dataset shared by the strategic-map tests.
    struct LabeledBase;
    impl LabeledBase {
        fn make() -> crate::performative::LabeledDistribution {
            crate::performative::LabeledDistribution::uniform(
                vec![
                    vec![1.2, 0.4],
                    vec![-0.8, 1.0],
                    vec![0.5, -1.1],
                    vec![-1.4, -0.2],
                    vec![0.9, 0.9],
                    vec![-0.3, 0.6],
                ],
                vec![1.0, -1.0, 1.0, -1.0, 1.0, -1.0],
            )
            .unwrap()
        }
    }
}
