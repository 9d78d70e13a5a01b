//! Ambiguity sets and worst-case-expectation oracles.
//!
//! Three interchangeable oracles evaluate `sup_{Q ∈ B(P̂)} E_Q[ℓ(z̃,θ)]`:
//!
//! * [`wce_regularized`] — closed form for Lipschitz margin losses over
//!   Wasserstein balls: the worst case equals the empirical risk plus a
//!   norm regularizer (Tikhonov `τL‖(θ,1)‖₂²` for the lifted spectral-norm
//!   ball, `τL‖θ‖₂` / `τL‖θ‖_∞` for the vector-norm balls).
//! * [`wce_lp`] — exact dualization of the event-wise set for losses that
//!   are piecewise affine in z; both dualization stages are linear programs.
//! * [`wce_bruteforce`] — grid discretization of the primal problem, solved
//!   as a transportation-style LP. Independent of the other two oracles and
//!   used to cross-check them.
//!
//! All oracles are pure functions of their inputs; independent evaluations
//! can run in parallel. LP solver state is never shared across solves.

use crate::linalg;
use crate::model::{
    logloss, Decision, EmpiricalDistribution, LossKind, LossModel, ModelError, Sample,
};
use crate::simplex::{solve_lp, Direction, LinearProgram, LpStatus, Sense, SimplexError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AmbiguityError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solver(#[from] SimplexError),
    #[error("unsupported (model, ambiguity) combination: {detail}")]
    UnsupportedCombination { detail: String },
    #[error("ambiguity set is empty: the moment sets are inconsistent with the supports")]
    EmptyAmbiguitySet,
    #[error("unbounded support: {detail}")]
    UnboundedSupport { detail: String },
    #[error("polytope `{which}` is empty")]
    EmptyPolytope { which: String },
    #[error("dimension {dim} exceeds the brute-force limit of {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("grid_points_per_dim = {got}, need at least {min}")]
    GridTooCoarse { got: usize, min: usize },
    #[error("invalid radius {0}")]
    InvalidRadius(f64),
    #[error("spec shape error: {detail}")]
    Shape { detail: String },
}

/// Vector-norm order of the Wasserstein ground metric. `Infinity` selects
/// the lifted spectral-norm ball whose worst case is the Tikhonov
/// regularization; `One`/`Two` are plain vector ground metrics on z-space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormOrder {
    One,
    Two,
    Infinity,
}

/// Wasserstein ball of radius τ around the reference distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WassersteinBallSpec {
    radius: f64,
    norm_order: NormOrder,
}

impl WassersteinBallSpec {
    pub fn new(radius: f64, norm_order: NormOrder) -> Result<Self, AmbiguityError> {
        if !radius.is_finite() || radius < 0.0 {
            return Err(AmbiguityError::InvalidRadius(radius));
        }
        Ok(Self { radius, norm_order })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn norm_order(&self) -> NormOrder {
        self.norm_order
    }
}

/// Polyhedron `{z : A z ≤ b}`; no rows means the whole space.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    dim: usize,
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
}

impl Polytope {
    pub fn new(dim: usize, a: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Self, AmbiguityError> {
        if a.len() != b.len() || a.iter().any(|row| row.len() != dim) {
            return Err(AmbiguityError::Shape {
                detail: "polytope row shapes inconsistent".into(),
            });
        }
        if a.iter().flatten().chain(b.iter()).any(|x| !x.is_finite()) {
            return Err(AmbiguityError::Shape {
                detail: "polytope has non-finite coefficients".into(),
            });
        }
        Ok(Self { dim, a, b })
    }

    /// The whole space (vacuous constraint set).
    pub fn whole_space(dim: usize) -> Self {
        Self {
            dim,
            a: Vec::new(),
            b: Vec::new(),
        }
    }

    /// 1-D interval `[lo, hi]`.
    pub fn interval(lo: f64, hi: f64) -> Result<Self, AmbiguityError> {
        Self::new(1, vec![vec![1.0], vec![-1.0]], vec![hi, -lo])
    }

    /// Axis-aligned box.
    pub fn box_hull(lo: &[f64], hi: &[f64]) -> Result<Self, AmbiguityError> {
        let dim = lo.len();
        if hi.len() != dim {
            return Err(AmbiguityError::Shape {
                detail: "box bounds length mismatch".into(),
            });
        }
        let mut a = Vec::with_capacity(2 * dim);
        let mut b = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            let mut row = vec![0.0; dim];
            row[i] = 1.0;
            a.push(row);
            b.push(hi[i]);
            let mut row = vec![0.0; dim];
            row[i] = -1.0;
            a.push(row);
            b.push(-lo[i]);
        }
        Self::new(dim, a, b)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_rows(&self) -> usize {
        self.a.len()
    }

    pub fn rows(&self) -> (&[Vec<f64>], &[f64]) {
        (&self.a, &self.b)
    }

    pub fn contains(&self, z: &[f64], tol: f64) -> bool {
        z.len() == self.dim
            && self
                .a
                .iter()
                .zip(&self.b)
                .all(|(row, bi)| linalg::dot(row, z) <= bi + tol)
    }

    /// Feasibility via an LP over free variables.
    pub fn is_nonempty(&self) -> Result<bool, AmbiguityError> {
        if self.a.is_empty() {
            return Ok(true);
        }
        let mut lp = LinearProgram::new(Direction::Minimize, vec![0.0; self.dim]);
        for j in 0..self.dim {
            lp.set_bounds(j, f64::NEG_INFINITY, f64::INFINITY);
        }
        for (row, &bi) in self.a.iter().zip(&self.b) {
            lp.add_row(row.clone(), Sense::Le, bi);
        }
        Ok(solve_lp(&lp)?.status == LpStatus::Optimal)
    }

    /// `(min, max)` of coordinate `coord` over the polytope; `None` if the
    /// polytope is unbounded in that coordinate.
    pub fn coordinate_range(&self, coord: usize) -> Result<Option<(f64, f64)>, AmbiguityError> {
        let mut bounds = [0.0f64; 2];
        for (slot, direction) in [(0usize, Direction::Minimize), (1, Direction::Maximize)] {
            let mut obj = vec![0.0; self.dim];
            obj[coord] = 1.0;
            let mut lp = LinearProgram::new(direction, obj);
            for j in 0..self.dim {
                lp.set_bounds(j, f64::NEG_INFINITY, f64::INFINITY);
            }
            for (row, &bi) in self.a.iter().zip(&self.b) {
                lp.add_row(row.clone(), Sense::Le, bi);
            }
            let sol = solve_lp(&lp)?;
            match sol.status {
                LpStatus::Optimal => bounds[slot] = sol.objective_value,
                LpStatus::Unbounded => return Ok(None),
                LpStatus::Infeasible => {
                    return Err(AmbiguityError::EmptyPolytope {
                        which: "support".into(),
                    })
                }
            }
        }
        Ok(Some((bounds[0], bounds[1])))
    }
}

/// Event-wise decision-dependent ambiguity set restricted to polyhedral
/// cones: events E_k over scenario indices, moment polytopes D_k bounding
/// the probability-weighted conditional means, and per-scenario support
/// polytopes Z_s.
#[derive(Debug, Clone, PartialEq)]
pub struct EventWiseSpec {
    events: Vec<Vec<usize>>,
    moment_sets: Vec<Polytope>,
    supports: Vec<Polytope>,
}

impl EventWiseSpec {
    /// Validates shapes and fails fast on empty polytopes (construction-time
    /// feasibility LPs).
    pub fn new(
        events: Vec<Vec<usize>>,
        moment_sets: Vec<Polytope>,
        supports: Vec<Polytope>,
    ) -> Result<Self, AmbiguityError> {
        if supports.is_empty() {
            return Err(AmbiguityError::Shape {
                detail: "need at least one scenario support".into(),
            });
        }
        if events.len() != moment_sets.len() {
            return Err(AmbiguityError::Shape {
                detail: "events and moment sets must pair up".into(),
            });
        }
        let dim = supports[0].dim();
        if supports.iter().any(|p| p.dim() != dim) || moment_sets.iter().any(|p| p.dim() != dim) {
            return Err(AmbiguityError::Shape {
                detail: "support/moment dimensions differ".into(),
            });
        }
        let s = supports.len();
        for event in &events {
            if event.is_empty() || event.iter().any(|&i| i >= s) {
                return Err(AmbiguityError::Shape {
                    detail: "event references an invalid scenario index".into(),
                });
            }
        }
        for (i, support) in supports.iter().enumerate() {
            if !support.is_nonempty()? {
                return Err(AmbiguityError::EmptyPolytope {
                    which: format!("support {i}"),
                });
            }
        }
        for (k, moment) in moment_sets.iter().enumerate() {
            if !moment.is_nonempty()? {
                return Err(AmbiguityError::EmptyPolytope {
                    which: format!("moment set {k}"),
                });
            }
        }
        Ok(Self {
            events,
            moment_sets,
            supports,
        })
    }

    pub fn num_scenarios(&self) -> usize {
        self.supports.len()
    }

    pub fn dim(&self) -> usize {
        self.supports[0].dim()
    }

    pub fn events(&self) -> &[Vec<usize>] {
        &self.events
    }

    pub fn moment_sets(&self) -> &[Polytope] {
        &self.moment_sets
    }

    pub fn supports(&self) -> &[Polytope] {
        &self.supports
    }
}

/// Either ambiguity-set representation, for operations generic over both.
#[derive(Debug, Clone, PartialEq)]
pub enum AmbiguitySpec {
    Ball(WassersteinBallSpec),
    EventWise(EventWiseSpec),
}

/// Dual variables of the event-wise LP: α per scenario, β per event (one
/// entry per moment row), ψ per (scenario, piece) pair (one entry per
/// support row).
#[derive(Debug, Clone)]
pub struct DualCertificate {
    pub alpha: Vec<f64>,
    pub beta: Vec<Vec<f64>>,
    pub psi: Vec<Vec<Vec<f64>>>,
}

/// Value of a worst-case expectation, with a dual certificate when produced
/// by the LP oracle and a primal witness distribution when produced by the
/// brute-force oracle.
#[derive(Debug, Clone)]
pub struct WorstCaseResult {
    pub value: f64,
    pub dual_certificate: Option<DualCertificate>,
    pub worst_distribution: Option<EmpiricalDistribution>,
}

/// Closed-form worst case and the strong-convexity modulus ρ it contributes.
#[derive(Debug, Clone, Copy)]
pub struct RegularizedWce {
    pub value: f64,
    pub rho: f64,
}

/// Strong-convexity modulus contributed by the ball's regularizer for a
/// Lipschitz margin loss: 2τL for the lifted spectral-norm (Tikhonov) ball,
/// 0 for the vector-norm balls (their regularizers are norms, not squared
/// norms) and for radius zero.
pub fn regularization_rho(
    model: &LossModel,
    ball: &WassersteinBallSpec,
) -> Result<f64, AmbiguityError> {
    if ball.radius == 0.0 {
        return Ok(0.0);
    }
    if !model.is_lipschitz_margin_loss() {
        return Err(AmbiguityError::UnsupportedCombination {
            detail: format!(
                "regularized oracle needs a Lipschitz margin loss, got {}",
                model.kind().name()
            ),
        });
    }
    Ok(match ball.norm_order {
        NormOrder::Infinity => 2.0 * ball.radius * model.l_outer(),
        NormOrder::One | NormOrder::Two => 0.0,
    })
}

/// Empirical expected loss `E_P̂[ℓ(z̃,θ)]`.
pub fn empirical_risk(
    model: &LossModel,
    reference: &EmpiricalDistribution,
    theta: &Decision,
) -> Result<f64, AmbiguityError> {
    let mut total = 0.0;
    for (s, p) in reference.scenarios().iter().zip(reference.probabilities()) {
        total += p * model.value(s, theta)?;
    }
    Ok(total)
}

/// Closed-form worst-case expectation over a Wasserstein ball.
///
/// For a margin loss 𝓛(zᵀθ) with L-Lipschitz 𝓛 the worst case is the
/// empirical risk plus `τL‖(θ,1)‖₂²` for the lifted spectral-norm ball
/// (the dual Schatten norm is nuclear, and on the lifted rank-one matrix it
/// reduces to the trace `‖θ‖² + 1`) or plus `τL·‖θ‖₂` / `τL·‖θ‖_∞` for the
/// ℓ2/ℓ1 vector balls (dual-norm identity). Radius zero collapses to the
/// empirical expectation for every loss kind.
pub fn wce_regularized(
    model: &LossModel,
    reference: &EmpiricalDistribution,
    ball: &WassersteinBallSpec,
    theta: &Decision,
) -> Result<RegularizedWce, AmbiguityError> {
    let empirical = empirical_risk(model, reference, theta)?;
    if ball.radius == 0.0 {
        return Ok(RegularizedWce {
            value: empirical,
            rho: 0.0,
        });
    }
    let rho = regularization_rho(model, ball)?;
    let tau_l = ball.radius * model.l_outer();
    let reg = match ball.norm_order {
        NormOrder::Infinity => tau_l * (linalg::dot(theta.coords(), theta.coords()) + 1.0),
        NormOrder::Two => tau_l * linalg::norm2(theta.coords()),
        NormOrder::One => tau_l * linalg::norm_inf(theta.coords()),
    };
    Ok(RegularizedWce {
        value: empirical + reg,
        rho,
    })
}

/// Exact worst-case expectation over the event-wise set for a loss that is
/// piecewise affine in z, via the dual linear program.
///
/// With pieces `ℓ_j(z,θ) = q_j(θ)ᵀz + r_j(θ)`, polyhedral supports
/// `Z_s = {z : F_s z ≤ f_s}`, and moment sets `{v : D_k v ≤ d_k}` on the
/// probability-weighted event means, the dual reads
///
/// ```text
/// min  Σ_s p̂_s α_s + Σ_k d_kᵀ β_k
/// s.t. α_s − f_sᵀ ψ_sj ≥ r_j(θ)                        ∀ s, j
///      F_sᵀ ψ_sj + Σ_{k : s ∈ E_k} D_kᵀ β_k = q_j(θ)   ∀ s, j
///      β_k ≥ 0, ψ_sj ≥ 0
/// ```
///
/// An unbounded dual signals an empty ambiguity set (inconsistent moments);
/// supports are pre-checked for boundedness coordinate by coordinate.
pub fn wce_lp(
    model: &LossModel,
    reference: &EmpiricalDistribution,
    spec: &EventWiseSpec,
    theta: &Decision,
) -> Result<WorstCaseResult, AmbiguityError> {
    let LossKind::PiecewiseAffine { pieces } = model.kind() else {
        return Err(AmbiguityError::UnsupportedCombination {
            detail: format!(
                "the LP oracle needs a piecewise-affine loss, got {}",
                model.kind().name()
            ),
        });
    };
    let s_count = reference.len();
    if spec.num_scenarios() != s_count {
        return Err(AmbiguityError::Shape {
            detail: format!("{} supports for {} scenarios", spec.num_scenarios(), s_count),
        });
    }
    let p_dim = spec.dim();
    if reference.dim() != p_dim {
        return Err(AmbiguityError::Shape {
            detail: "reference dimension differs from support dimension".into(),
        });
    }
    for (i, support) in spec.supports().iter().enumerate() {
        for coord in 0..p_dim {
            if support.coordinate_range(coord)?.is_none() {
                return Err(AmbiguityError::UnboundedSupport {
                    detail: format!("support {i} is unbounded in coordinate {coord}"),
                });
            }
        }
    }

    let j_count = pieces.len();
    // Column layout: α (free) | β_k blocks (≥0) | ψ_sj blocks (≥0).
    let mut beta_offsets = Vec::with_capacity(spec.moment_sets().len());
    let mut cursor = s_count;
    for moment in spec.moment_sets() {
        beta_offsets.push(cursor);
        cursor += moment.num_rows();
    }
    let mut psi_offsets = vec![vec![0usize; j_count]; s_count];
    for (s, support) in spec.supports().iter().enumerate() {
        for j in 0..j_count {
            psi_offsets[s][j] = cursor;
            cursor += support.num_rows();
        }
    }
    let total_vars = cursor;

    let mut objective = vec![0.0; total_vars];
    objective[..s_count].copy_from_slice(reference.probabilities());
    for (k, moment) in spec.moment_sets().iter().enumerate() {
        let (_, d_rhs) = moment.rows();
        for (r, &dr) in d_rhs.iter().enumerate() {
            objective[beta_offsets[k] + r] = dr;
        }
    }
    let mut lp = LinearProgram::new(Direction::Minimize, objective);
    for s in 0..s_count {
        lp.set_bounds(s, f64::NEG_INFINITY, f64::INFINITY);
    }

    let theta_v = theta.coords();
    for (s, support) in spec.supports().iter().enumerate() {
        let (f_rows, f_rhs) = support.rows();
        let memberships: Vec<usize> = spec
            .events()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.contains(&s))
            .map(|(k, _)| k)
            .collect();
        for (j, piece) in pieces.iter().enumerate() {
            let q = piece.z_gradient_at(theta_v);
            let r_const = piece.constant_at(theta_v);
            // α_s − f_sᵀψ_sj ≥ r_j(θ)
            let mut row = vec![0.0; total_vars];
            row[s] = 1.0;
            for (r, &fr) in f_rhs.iter().enumerate() {
                row[psi_offsets[s][j] + r] = -fr;
            }
            lp.add_row(row, Sense::Ge, r_const);
            // F_sᵀψ_sj + Σ_k D_kᵀβ_k = q_j(θ), one row per coordinate.
            for p in 0..p_dim {
                let mut row = vec![0.0; total_vars];
                for (r, f_row) in f_rows.iter().enumerate() {
                    row[psi_offsets[s][j] + r] = f_row[p];
                }
                for &k in &memberships {
                    let (d_rows, _) = spec.moment_sets()[k].rows();
                    for (r, d_row) in d_rows.iter().enumerate() {
                        row[beta_offsets[k] + r] += d_row[p];
                    }
                }
                lp.add_row(row, Sense::Eq, q[p]);
            }
        }
    }

    let sol = solve_lp(&lp)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Unbounded => return Err(AmbiguityError::EmptyAmbiguitySet),
        LpStatus::Infeasible => {
            return Err(AmbiguityError::UnboundedSupport {
                detail: "dual infeasible: a support admits unbounded growth".into(),
            })
        }
    }
    let alpha = sol.primal[..s_count].to_vec();
    let beta = spec
        .moment_sets()
        .iter()
        .enumerate()
        .map(|(k, m)| sol.primal[beta_offsets[k]..beta_offsets[k] + m.num_rows()].to_vec())
        .collect();
    let psi = (0..s_count)
        .map(|s| {
            (0..j_count)
                .map(|j| {
                    let off = psi_offsets[s][j];
                    sol.primal[off..off + spec.supports()[s].num_rows()].to_vec()
                })
                .collect()
        })
        .collect();
    Ok(WorstCaseResult {
        value: sol.objective_value,
        dual_certificate: Some(DualCertificate { alpha, beta, psi }),
        worst_distribution: None,
    })
}

/// Maximum dimension the brute-force oracle accepts (desk scale).
const BRUTEFORCE_MAX_DIM: usize = 2;
/// Minimum grid resolution.
const BRUTEFORCE_MIN_GRID: usize = 11;
/// Radial grid span factor for margin losses over Wasserstein balls. The
/// payoff of moving mass a margin distance t is convex in t (the logloss is
/// convex), so the optimal grid allocation mixes extreme radii and the only
/// discretization error is truncation at R_max: mass τ/R_max parked at R_max
/// leaves a gap of at most (τ/R_max)·softplus(m_s) against the supremum.
/// R_max = FACTOR · (1 + max_s softplus(m_s)) therefore caps the gap at
/// τ/FACTOR, far inside the 2e-3 oracle-agreement tolerance.
const RADIAL_SPAN_FACTOR: f64 = 4000.0;
/// Support-box inflation per side for the z-grid path, in units of τ.
const BOX_INFLATION: f64 = 3.0;

/// Brute-force worst-case expectation by grid discretization.
///
/// Wasserstein balls: for margin losses the problem reduces exactly to a
/// one-dimensional transportation LP over displacement radii — per unit of
/// transport budget the margin moves by at most the dual norm of θ
/// (`‖(θ,1)‖₂²` for the lifted spectral ball), and that rate is attained, so
/// gridding the displacement radius loses nothing but the truncation term.
/// Piecewise-affine losses are gridded directly over the inflated bounding
/// box of the scenarios. Event-wise sets grid each support polytope's
/// bounding box and optimize the conditional weights subject to the moment
/// rows. The value is a lower bound on the true supremum converging as the
/// grid refines (exact for piecewise-affine losses on box supports, whose
/// optima sit on vertices that the uniform grid contains).
pub fn wce_bruteforce(
    model: &LossModel,
    reference: &EmpiricalDistribution,
    spec: &AmbiguitySpec,
    theta: &Decision,
    grid_points_per_dim: usize,
) -> Result<WorstCaseResult, AmbiguityError> {
    if grid_points_per_dim < BRUTEFORCE_MIN_GRID {
        return Err(AmbiguityError::GridTooCoarse {
            got: grid_points_per_dim,
            min: BRUTEFORCE_MIN_GRID,
        });
    }
    if reference.dim() > BRUTEFORCE_MAX_DIM {
        return Err(AmbiguityError::DimensionTooLarge {
            dim: reference.dim(),
            max: BRUTEFORCE_MAX_DIM,
        });
    }
    match spec {
        AmbiguitySpec::Ball(ball) => {
            if ball.radius == 0.0 {
                return Ok(WorstCaseResult {
                    value: empirical_risk(model, reference, theta)?,
                    dual_certificate: None,
                    worst_distribution: Some(reference.clone()),
                });
            }
            match model.kind() {
                LossKind::Logistic => {
                    radial_bruteforce(model, reference, ball, theta, grid_points_per_dim)
                }
                LossKind::PiecewiseAffine { .. } => {
                    zgrid_ball_bruteforce(model, reference, ball, theta, grid_points_per_dim)
                }
                LossKind::Quadratic { .. } => Err(AmbiguityError::UnsupportedCombination {
                    detail:
                        "quadratic loss grows faster than the W₁ cost; the ball worst case diverges"
                            .into(),
                }),
            }
        }
        AmbiguitySpec::EventWise(event_spec) => {
            eventwise_bruteforce(model, reference, event_spec, theta, grid_points_per_dim)
        }
    }
}

/// Margin displacement per unit of transport budget for each ground norm.
fn margin_rate(ball: &WassersteinBallSpec, theta: &[f64]) -> f64 {
    match ball.norm_order() {
        NormOrder::Infinity => linalg::dot(theta, theta) + 1.0,
        NormOrder::Two => linalg::norm2(theta),
        NormOrder::One => linalg::norm_inf(theta),
    }
}

fn radial_bruteforce(
    model: &LossModel,
    reference: &EmpiricalDistribution,
    ball: &WassersteinBallSpec,
    theta: &Decision,
    grid_points: usize,
) -> Result<WorstCaseResult, AmbiguityError> {
    let margins: Vec<f64> = reference
        .scenarios()
        .iter()
        .map(|s| linalg::dot(s.coords(), theta.coords()))
        .collect();
    let rate = margin_rate(ball, theta.coords());
    if rate <= 1e-12 {
        // Transport cannot move the margin; the ball is inert.
        return Ok(WorstCaseResult {
            value: empirical_risk(model, reference, theta)?,
            dual_certificate: None,
            worst_distribution: Some(reference.clone()),
        });
    }
    let softplus_max = margins.iter().map(|&m| logloss(-m)).fold(0.0f64, f64::max);
    let r_max = RADIAL_SPAN_FACTOR * (1.0 + softplus_max);
    let step = r_max / (grid_points - 1) as f64;

    // Columns: (scenario, radius, direction sign); r = 0 appears once.
    let s_count = reference.len();
    let mut payoff = Vec::new();
    let mut col_meta: Vec<(usize, f64, f64)> = Vec::new();
    for (s, &m) in margins.iter().enumerate() {
        for g in 0..grid_points {
            let r = g as f64 * step;
            let signs: &[f64] = if g == 0 { &[1.0] } else { &[1.0, -1.0] };
            for &sgn in signs {
                payoff.push(logloss(m + sgn * r * rate));
                col_meta.push((s, r, sgn));
            }
        }
    }
    let mut lp = LinearProgram::new(Direction::Maximize, payoff);
    for s in 0..s_count {
        let row: Vec<f64> = col_meta
            .iter()
            .map(|&(cs, _, _)| if cs == s { 1.0 } else { 0.0 })
            .collect();
        lp.add_row(row, Sense::Eq, reference.probabilities()[s]);
    }
    let cost: Vec<f64> = col_meta.iter().map(|&(_, r, _)| r).collect();
    lp.add_row(cost, Sense::Le, ball.radius());
    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(AmbiguityError::Solver(SimplexError::Numerical {
            reason: format!("radial grid LP returned {:?}", sol.status),
        }));
    }

    // Witness: concrete displaced points exist for the vector ground norms;
    // the lifted spectral ball's extremal perturbations live in the matrix
    // space, so no z-space witness is reported there.
    let worst_distribution = match ball.norm_order() {
        NormOrder::Infinity => None,
        NormOrder::Two | NormOrder::One => {
            let direction: Vec<f64> = match ball.norm_order() {
                NormOrder::Two => {
                    let nrm = linalg::norm2(theta.coords());
                    theta.coords().iter().map(|t| t / nrm).collect()
                }
                _ => {
                    let (i_max, t_max) =
                        theta
                            .coords()
                            .iter()
                            .enumerate()
                            .fold((0usize, 0.0f64), |acc, (i, &t)| {
                                if t.abs() > acc.1.abs() {
                                    (i, t)
                                } else {
                                    acc
                                }
                            });
                    let mut e = vec![0.0; theta.dim()];
                    e[i_max] = t_max.signum();
                    e
                }
            };
            let mut points = Vec::new();
            let mut weights = Vec::new();
            for (x, &(s, r, sgn)) in sol.primal.iter().zip(&col_meta) {
                if *x > 1e-12 {
                    let z = linalg::axpy(reference.scenarios()[s].coords(), sgn * r, &direction);
                    points.push(Sample::new(z)?);
                    weights.push(*x);
                }
            }
            normalize_witness(points, weights)
        }
    };
    Ok(WorstCaseResult {
        value: sol.objective_value,
        dual_certificate: None,
        worst_distribution,
    })
}

fn normalize_witness(points: Vec<Sample>, mut weights: Vec<f64>) -> Option<EmpiricalDistribution> {
    if points.is_empty() {
        return None;
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return None;
    }
    for w in weights.iter_mut() {
        *w /= total;
    }
    let head: f64 = weights[..weights.len() - 1].iter().sum();
    *weights.last_mut().unwrap() = 1.0 - head;
    EmpiricalDistribution::new(points, weights).ok()
}

fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 || hi <= lo {
        return vec![lo];
    }
    let step = (hi - lo) / (points - 1) as f64;
    (0..points).map(|g| lo + g as f64 * step).collect()
}

fn ground_cost(norm: NormOrder, a: &[f64], b: &[f64]) -> f64 {
    let d = linalg::sub(a, b);
    match norm {
        NormOrder::One => linalg::norm1(&d),
        NormOrder::Two => linalg::norm2(&d),
        NormOrder::Infinity => linalg::norm_inf(&d),
    }
}

fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    match axes.len() {
        1 => axes[0].iter().map(|&x| vec![x]).collect(),
        2 => {
            let mut out = Vec::with_capacity(axes[0].len() * axes[1].len());
            for &x in &axes[0] {
                for &y in &axes[1] {
                    out.push(vec![x, y]);
                }
            }
            out
        }
        _ => unreachable!("dimension checked at entry"),
    }
}

fn zgrid_ball_bruteforce(
    model: &LossModel,
    reference: &EmpiricalDistribution,
    ball: &WassersteinBallSpec,
    theta: &Decision,
    grid_points: usize,
) -> Result<WorstCaseResult, AmbiguityError> {
    if ball.norm_order() == NormOrder::Infinity {
        return Err(AmbiguityError::UnsupportedCombination {
            detail: "the lifted spectral ball has no z-space grid; use a margin loss".into(),
        });
    }
    let dim = reference.dim();
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for s in reference.scenarios() {
        for (i, &zi) in s.coords().iter().enumerate() {
            lo[i] = lo[i].min(zi);
            hi[i] = hi[i].max(zi);
        }
    }
    let inflate = BOX_INFLATION * ball.radius();
    let axes: Vec<Vec<f64>> = (0..dim)
        .map(|i| linspace(lo[i] - inflate, hi[i] + inflate, grid_points))
        .collect();
    let grid = cartesian(&axes);
    // Same global grid for every scenario, plus each scenario's own atom so
    // keeping mass in place is always free.
    let mut columns: Vec<(usize, Vec<f64>)> = Vec::new();
    for s in 0..reference.len() {
        for z in &grid {
            columns.push((s, z.clone()));
        }
        columns.push((s, reference.scenarios()[s].coords().to_vec()));
    }
    let norm = ball.norm_order();
    grid_weight_lp(
        model,
        reference,
        theta,
        columns,
        Some((ball.radius(), &|s: usize, z: &[f64]| {
            ground_cost(norm, z, reference.scenarios()[s].coords())
        })),
        None,
    )
}

fn eventwise_bruteforce(
    model: &LossModel,
    reference: &EmpiricalDistribution,
    spec: &EventWiseSpec,
    theta: &Decision,
    grid_points: usize,
) -> Result<WorstCaseResult, AmbiguityError> {
    if spec.num_scenarios() != reference.len() {
        return Err(AmbiguityError::Shape {
            detail: "scenario count differs between reference and spec".into(),
        });
    }
    let dim = spec.dim();
    let mut columns: Vec<(usize, Vec<f64>)> = Vec::new();
    for (i, support) in spec.supports().iter().enumerate() {
        let mut axes = Vec::with_capacity(dim);
        for coord in 0..dim {
            match support.coordinate_range(coord)? {
                Some((lo, hi)) => axes.push(linspace(lo, hi, grid_points)),
                None => {
                    return Err(AmbiguityError::UnboundedSupport {
                        detail: format!("support {i} unbounded in coordinate {coord}"),
                    })
                }
            }
        }
        let before = columns.len();
        columns.extend(
            cartesian(&axes)
                .into_iter()
                .filter(|z| support.contains(z, 1e-9))
                .map(|z| (i, z)),
        );
        if columns.len() == before {
            return Err(AmbiguityError::EmptyPolytope {
                which: format!("support {i} after gridding"),
            });
        }
    }
    grid_weight_lp(model, reference, theta, columns, None, Some(spec))
}

/// Shared weight-LP: maximize Σ w·ℓ(z,θ) over per-scenario conditional
/// weights, subject to mass conservation, an optional transport budget, and
/// optional event-wise moment rows.
fn grid_weight_lp(
    model: &LossModel,
    reference: &EmpiricalDistribution,
    theta: &Decision,
    columns: Vec<(usize, Vec<f64>)>,
    budget: Option<(f64, &dyn Fn(usize, &[f64]) -> f64)>,
    moments: Option<&EventWiseSpec>,
) -> Result<WorstCaseResult, AmbiguityError> {
    let s_count = reference.len();
    let mut payoff = Vec::with_capacity(columns.len());
    for (_, z) in &columns {
        payoff.push(model.value(&Sample::new(z.clone())?, theta)?);
    }
    let mut lp = LinearProgram::new(Direction::Maximize, payoff);
    for s in 0..s_count {
        let row: Vec<f64> = columns
            .iter()
            .map(|(cs, _)| if *cs == s { 1.0 } else { 0.0 })
            .collect();
        lp.add_row(row, Sense::Eq, reference.probabilities()[s]);
    }
    if let Some((tau, cost_fn)) = budget {
        let row: Vec<f64> = columns.iter().map(|(s, z)| cost_fn(*s, z)).collect();
        lp.add_row(row, Sense::Le, tau);
    }
    if let Some(spec) = moments {
        for (k, event) in spec.events().iter().enumerate() {
            let (d_rows, d_rhs) = spec.moment_sets()[k].rows();
            for (d_row, &dr) in d_rows.iter().zip(d_rhs) {
                let row: Vec<f64> = columns
                    .iter()
                    .map(|(s, z)| {
                        if event.contains(s) {
                            linalg::dot(d_row, z)
                        } else {
                            0.0
                        }
                    })
                    .collect();
                lp.add_row(row, Sense::Le, dr);
            }
        }
    }
    let sol = solve_lp(&lp)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(AmbiguityError::EmptyAmbiguitySet),
        LpStatus::Unbounded => {
            return Err(AmbiguityError::Solver(SimplexError::Numerical {
                reason: "grid LP unbounded".into(),
            }))
        }
    }
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for (x, (_, z)) in sol.primal.iter().zip(&columns) {
        if *x > 1e-12 {
            points.push(Sample::new(z.clone())?);
            weights.push(*x);
        }
    }
    Ok(WorstCaseResult {
        value: sol.objective_value,
        dual_certificate: None,
        worst_distribution: normalize_witness(points, weights),
    })
}

/// Oracle selector for operations generic over the evaluation route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Oracle {
    Regularized,
    Lp,
    BruteForce { grid_points_per_dim: usize },
}

/// Robust decoupled performative risk `J_η(θ)`: the ambiguity set is built
/// from the reference realized at η while the loss is evaluated at θ.
pub fn decoupled_risk(
    model: &LossModel,
    ref_at_eta: &EmpiricalDistribution,
    spec: &AmbiguitySpec,
    theta: &Decision,
    oracle: Oracle,
) -> Result<f64, AmbiguityError> {
    match (oracle, spec) {
        (Oracle::Regularized, AmbiguitySpec::Ball(ball)) => {
            Ok(wce_regularized(model, ref_at_eta, ball, theta)?.value)
        }
        (Oracle::Regularized, AmbiguitySpec::EventWise(_)) => {
            Err(AmbiguityError::UnsupportedCombination {
                detail: "the closed-form oracle applies to Wasserstein balls only".into(),
            })
        }
        (Oracle::Lp, AmbiguitySpec::EventWise(event_spec)) => {
            Ok(wce_lp(model, ref_at_eta, event_spec, theta)?.value)
        }
        (Oracle::Lp, AmbiguitySpec::Ball(_)) => Err(AmbiguityError::UnsupportedCombination {
            detail: "the LP oracle applies to event-wise sets only".into(),
        }),
        (Oracle::BruteForce { grid_points_per_dim }, _) => Ok(wce_bruteforce(
            model,
            ref_at_eta,
            spec,
            theta,
            grid_points_per_dim,
        )?
        .value),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AffinePiece;
    use approx::assert_relative_eq;
    use rand::Rng;

    fn dist_1d(points: &[f64], probs: &[f64]) -> EmpiricalDistribution {
        EmpiricalDistribution::new(
            points.iter().map(|&p| Sample::new(vec![p]).unwrap()).collect(),
            probs.to_vec(),
        )
        .unwrap()
    }

    fn abs_loss_1d() -> LossModel {
        LossModel::piecewise_affine(vec![
            AffinePiece {
                theta_coef: vec![0.0],
                interaction: vec![vec![0.0]],
                z_coef: vec![1.0],
                offset: 0.0,
            },
            AffinePiece {
                theta_coef: vec![0.0],
                interaction: vec![vec![0.0]],
                z_coef: vec![-1.0],
                offset: 0.0,
            },
        ])
        .unwrap()
    }

    /// ℓ(z,θ) = z·θ in one dimension.
    fn bilinear_loss_1d() -> LossModel {
        LossModel::piecewise_affine(vec![AffinePiece {
            theta_coef: vec![0.0],
            interaction: vec![vec![1.0]],
            z_coef: vec![0.0],
            offset: 0.0,
        }])
        .unwrap()
    }

    #[test]
    fn zero_radius_collapses_to_empirical() {
        let model = LossModel::logistic(2.0, 2.0).unwrap();
        let reference = dist_1d(&[1.0, -0.5], &[0.5, 0.5]);
        let theta = Decision::new(vec![0.7]).unwrap();
        let ball = WassersteinBallSpec::new(0.0, NormOrder::Infinity).unwrap();
        let empirical = empirical_risk(&model, &reference, &theta).unwrap();

        let reg = wce_regularized(&model, &reference, &ball, &theta).unwrap();
        assert!((reg.value - empirical).abs() <= 1e-9);
        assert_eq!(reg.rho, 0.0);

        let bf = wce_bruteforce(
            &model,
            &reference,
            &AmbiguitySpec::Ball(ball),
            &theta,
            401,
        )
        .unwrap();
        assert!((bf.value - empirical).abs() <= 1e-9);
    }

    #[test]
    fn regularized_at_origin_is_log_two_plus_radius() {
        let model = LossModel::logistic(1.0, 1.0).unwrap();
        let reference = dist_1d(&[1.0, -1.0], &[0.25, 0.75]);
        let theta = Decision::new(vec![0.0]).unwrap();
        let tau = 0.07;
        let ball = WassersteinBallSpec::new(tau, NormOrder::Infinity).unwrap();
        let got = wce_regularized(&model, &reference, &ball, &theta).unwrap();
        assert_relative_eq!(got.value, 2.0f64.ln() + tau, epsilon = 1e-12);
        assert_relative_eq!(got.rho, 2.0 * tau, epsilon = 1e-15);
    }

    #[test]
    fn tikhonov_value_matches_hand_computation() {
        // 1-D point mass at z = 1, θ = 1, τ = 0.1:
        // log(1+e^{−1}) + 0.1·(1+1) = 0.51326...
        let model = LossModel::logistic(1.0, 1.0).unwrap();
        let reference = dist_1d(&[1.0], &[1.0]);
        let theta = Decision::new(vec![1.0]).unwrap();
        let ball = WassersteinBallSpec::new(0.1, NormOrder::Infinity).unwrap();
        let got = wce_regularized(&model, &reference, &ball, &theta).unwrap();
        assert_relative_eq!(got.value, 0.513261687518223, epsilon = 1e-12);
    }

    #[test]
    fn tikhonov_cross_check_against_bruteforce() {
        let model = LossModel::logistic(1.0, 1.0).unwrap();
        let reference = dist_1d(&[1.0], &[1.0]);
        let theta = Decision::new(vec![1.0]).unwrap();
        let ball = WassersteinBallSpec::new(0.1, NormOrder::Infinity).unwrap();
        let reg = wce_regularized(&model, &reference, &ball, &theta).unwrap();
        let bf = wce_bruteforce(
            &model,
            &reference,
            &AmbiguitySpec::Ball(ball),
            &theta,
            401,
        )
        .unwrap();
        assert!(
            (reg.value - bf.value).abs() <= 2e-3,
            "regularized {} vs brute force {}",
            reg.value,
            bf.value
        );
    }

    #[test]
    fn oracle_agreement_on_random_instances() {
        let mut rng = crate::seed::rng(0xa1b1, 0);
        for trial in 0..20 {
            let s = rng.gen_range(1..=3);
            let pts: Vec<f64> = (0..s).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let raw: Vec<f64> = (0..s).map(|_| rng.gen_range(0.2..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let mut probs: Vec<f64> = raw.iter().map(|x| x / total).collect();
            let head: f64 = probs[..s - 1].iter().sum();
            probs[s - 1] = 1.0 - head;
            let reference = dist_1d(&pts, &probs);
            let theta = Decision::new(vec![rng.gen_range(-2.0..2.0)]).unwrap();
            let tau = [0.05, 0.1, 0.2][trial % 3];
            let norm = if trial % 2 == 0 {
                NormOrder::Infinity
            } else {
                NormOrder::Two
            };
            let model = LossModel::logistic(2.0, 2.0).unwrap();
            let ball = WassersteinBallSpec::new(tau, norm).unwrap();
            let reg = wce_regularized(&model, &reference, &ball, &theta).unwrap();
            let bf = wce_bruteforce(
                &model,
                &reference,
                &AmbiguitySpec::Ball(ball),
                &theta,
                401,
            )
            .unwrap();
            assert!(
                (reg.value - bf.value).abs() <= 2e-3,
                "trial {trial}: regularized {} vs brute force {}",
                reg.value,
                bf.value
            );
        }
    }

    #[test]
    fn bruteforce_moves_mass_to_the_extreme_for_abs_loss() {
        // Single scenario at 0, τ = 1: the W₁ ball pushes |z|'s expectation
        // up to exactly 1.
        let model = abs_loss_1d();
        let reference = dist_1d(&[0.0], &[1.0]);
        let theta = Decision::new(vec![0.0]).unwrap();
        let ball = WassersteinBallSpec::new(1.0, NormOrder::Two).unwrap();
        let bf = wce_bruteforce(
            &model,
            &reference,
            &AmbiguitySpec::Ball(ball),
            &theta,
            401,
        )
        .unwrap();
        assert_relative_eq!(bf.value, 1.0, epsilon = 1e-9);
        let witness = bf.worst_distribution.expect("witness expected");
        let witness_value = witness.expectation(|z| z.coords()[0].abs());
        assert_relative_eq!(witness_value, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn lp_with_singleton_supports_is_empirical() {
        let model = bilinear_loss_1d();
        let reference = dist_1d(&[0.5, -1.5], &[0.4, 0.6]);
        let theta = Decision::new(vec![2.0]).unwrap();
        let spec = EventWiseSpec::new(
            vec![vec![0, 1]],
            vec![Polytope::whole_space(1)],
            vec![
                Polytope::interval(0.5, 0.5).unwrap(),
                Polytope::interval(-1.5, -1.5).unwrap(),
            ],
        )
        .unwrap();
        let got = wce_lp(&model, &reference, &spec, &theta).unwrap();
        let empirical = empirical_risk(&model, &reference, &theta).unwrap();
        assert!((got.value - empirical).abs() <= 1e-9);
        assert!(got.dual_certificate.is_some());
    }

    #[test]
    fn lp_pushes_linear_loss_to_interval_end() {
        let model = bilinear_loss_1d();
        let reference = dist_1d(&[0.0], &[1.0]);
        let theta = Decision::new(vec![1.0]).unwrap();
        let spec = EventWiseSpec::new(
            vec![],
            vec![],
            vec![Polytope::interval(-1.0, 1.0).unwrap()],
        )
        .unwrap();
        let got = wce_lp(&model, &reference, &spec, &theta).unwrap();
        assert_relative_eq!(got.value, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn lp_respects_mean_constraint() {
        // Two scenarios with supports [0,2] and a mean cap at 1: mass wants
        // z = 2 but the event-wise moment row stops the mean at 1.
        let model = bilinear_loss_1d();
        let reference = dist_1d(&[0.0, 1.0], &[0.5, 0.5]);
        let theta = Decision::new(vec![1.0]).unwrap();
        let spec = EventWiseSpec::new(
            vec![vec![0, 1]],
            vec![Polytope::new(1, vec![vec![1.0]], vec![1.0]).unwrap()],
            vec![
                Polytope::interval(0.0, 2.0).unwrap(),
                Polytope::interval(0.0, 2.0).unwrap(),
            ],
        )
        .unwrap();
        let lp_res = wce_lp(&model, &reference, &spec, &theta).unwrap();
        assert_relative_eq!(lp_res.value, 1.0, epsilon = 1e-9);

        let bf = wce_bruteforce(
            &model,
            &reference,
            &AmbiguitySpec::EventWise(spec),
            &theta,
            201,
        )
        .unwrap();
        assert!(
            (lp_res.value - bf.value).abs() <= 1e-6,
            "LP {} vs brute force {}",
            lp_res.value,
            bf.value
        );
        // Weak/strong duality between the LP dual value and the brute-force
        // primal witness.
        let witness = bf.worst_distribution.expect("witness");
        let witness_value = {
            let mut v = 0.0;
            for (smp, p) in witness.scenarios().iter().zip(witness.probabilities()) {
                v += p * model.value(smp, &theta).unwrap();
            }
            v
        };
        assert!(witness_value <= lp_res.value + 1e-6);
    }

    #[test]
    fn lp_duality_on_random_eventwise_instances() {
        let mut rng = crate::seed::rng(0xa1b1, 1);
        for trial in 0..20 {
            let s = rng.gen_range(1..=3);
            let mut supports = Vec::new();
            let mut pts = Vec::new();
            for _ in 0..s {
                let center: f64 = rng.gen_range(-1.0..1.0);
                let half: f64 = rng.gen_range(0.2..1.0);
                supports.push(Polytope::interval(center - half, center + half).unwrap());
                pts.push(center);
            }
            let raw: Vec<f64> = (0..s).map(|_| rng.gen_range(0.2..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let mut probs: Vec<f64> = raw.iter().map(|x| x / total).collect();
            let head: f64 = probs[..s - 1].iter().sum();
            probs[s - 1] = 1.0 - head;
            let reference = dist_1d(&pts, &probs);

            // Moment rows feasible by construction: cap the weighted mean a
            // little above its reference value.
            let k = rng.gen_range(0..=2usize);
            let mut events = Vec::new();
            let mut moments = Vec::new();
            for _ in 0..k {
                let members: Vec<usize> = (0..s).filter(|_| rng.gen_bool(0.7)).collect();
                let members = if members.is_empty() { vec![0] } else { members };
                let ref_mean: f64 = members.iter().map(|&i| probs[i] * pts[i]).sum();
                let slack: f64 = rng.gen_range(0.05..0.5);
                events.push(members);
                moments.push(Polytope::new(1, vec![vec![1.0]], vec![ref_mean + slack]).unwrap());
            }
            let spec = EventWiseSpec::new(events, moments, supports).unwrap();

            let num_pieces = rng.gen_range(1..=3);
            let pieces: Vec<AffinePiece> = (0..num_pieces)
                .map(|_| AffinePiece {
                    theta_coef: vec![rng.gen_range(-1.0..1.0)],
                    interaction: vec![vec![rng.gen_range(-1.0..1.0)]],
                    z_coef: vec![rng.gen_range(-1.0..1.0)],
                    offset: rng.gen_range(-0.5..0.5),
                })
                .collect();
            let model = LossModel::piecewise_affine(pieces).unwrap();
            let theta = Decision::new(vec![rng.gen_range(-1.5..1.5)]).unwrap();

            let lp_res = wce_lp(&model, &reference, &spec, &theta).unwrap();
            let bf = wce_bruteforce(
                &model,
                &reference,
                &AmbiguitySpec::EventWise(spec),
                &theta,
                401,
            )
            .unwrap();
            assert!(
                (lp_res.value - bf.value).abs() <= 1e-6,
                "trial {trial}: LP {} vs brute force {}",
                lp_res.value,
                bf.value
            );
        }
    }

    #[test]
    fn dominance_and_radius_monotonicity() {
        let model = LossModel::logistic(2.0, 2.0).unwrap();
        let reference = dist_1d(&[0.8, -0.3, 1.4], &[0.3, 0.3, 0.4]);
        let theta = Decision::new(vec![1.2]).unwrap();
        let empirical = empirical_risk(&model, &reference, &theta).unwrap();
        let mut last = empirical;
        for tau in [0.0, 0.05, 0.1, 0.2, 0.4] {
            let ball = WassersteinBallSpec::new(tau, NormOrder::Infinity).unwrap();
            let v = wce_regularized(&model, &reference, &ball, &theta)
                .unwrap()
                .value;
            assert!(v >= empirical - 1e-12, "worst case dominates nominal");
            assert!(v >= last - 1e-9, "monotone in radius");
            last = v;

            let bf = wce_bruteforce(
                &model,
                &reference,
                &AmbiguitySpec::Ball(ball),
                &theta,
                101,
            )
            .unwrap();
            assert!(bf.value >= empirical - 1e-9);
        }
    }

    #[test]
    fn decoupled_risk_is_strongly_convex_in_theta() {
        let model = LossModel::logistic(2.0, 2.0).unwrap();
        let reference = dist_1d(&[0.8, -0.3], &[0.5, 0.5]);
        let ball = WassersteinBallSpec::new(0.25, NormOrder::Infinity).unwrap();
        let spec = AmbiguitySpec::Ball(ball);
        let rho = regularization_rho(&model, &ball).unwrap();
        let gamma = model.gamma();
        let mut rng = crate::seed::rng(0xa1b1, 2);
        for _ in 0..50 {
            let t1 = vec![rng.gen_range(-2.0..2.0)];
            let t2 = vec![rng.gen_range(-2.0..2.0)];
            let lam: f64 = rng.gen_range(0.05..0.95);
            let mid: Vec<f64> = t1
                .iter()
                .zip(&t2)
                .map(|(a, b)| lam * a + (1.0 - lam) * b)
                .collect();
            let j = |t: &[f64]| {
                decoupled_risk(
                    &model,
                    &reference,
                    &spec,
                    &Decision::new(t.to_vec()).unwrap(),
                    Oracle::Regularized,
                )
                .unwrap()
            };
            let d2 = linalg::dist2(&t1, &t2).powi(2);
            assert!(
                j(&mid)
                    <= lam * j(&t1) + (1.0 - lam) * j(&t2)
                        - (gamma + rho) * lam * (1.0 - lam) * d2 / 2.0
                        + 1e-8
            );
        }
    }

    #[test]
    fn empty_moment_sets_fail_fast() {
        // Construction-time: an empty moment polytope is rejected.
        let empty = Polytope::new(1, vec![vec![1.0], vec![-1.0]], vec![-1.0, -1.0]).unwrap();
        assert!(!empty.is_nonempty().unwrap());
        let err = EventWiseSpec::new(
            vec![vec![0]],
            vec![empty],
            vec![Polytope::interval(0.0, 1.0).unwrap()],
        )
        .unwrap_err();
        assert!(matches!(err, AmbiguityError::EmptyPolytope { .. }));

        // Solve-time: a nonempty moment polytope that no supported
        // distribution can reach makes the ambiguity set empty.
        let model = bilinear_loss_1d();
        let reference = dist_1d(&[0.0], &[1.0]);
        let theta = Decision::new(vec![1.0]).unwrap();
        let spec = EventWiseSpec::new(
            vec![vec![0]],
            // Mean must be ≤ −5 while the support lives in [0, 1].
            vec![Polytope::new(1, vec![vec![1.0]], vec![-5.0]).unwrap()],
            vec![Polytope::interval(0.0, 1.0).unwrap()],
        )
        .unwrap();
        let err = wce_lp(&model, &reference, &spec, &theta).unwrap_err();
        assert!(matches!(err, AmbiguityError::EmptyAmbiguitySet));
        let err = wce_bruteforce(
            &model,
            &reference,
            &AmbiguitySpec::EventWise(spec),
            &theta,
            101,
        )
        .unwrap_err();
        assert!(matches!(err, AmbiguityError::EmptyAmbiguitySet));
    }

    #[test]
    fn unbounded_support_is_reported() {
        let model = bilinear_loss_1d();
        let reference = dist_1d(&[0.0], &[1.0]);
        let theta = Decision::new(vec![1.0]).unwrap();
        // Only a lower bound: unbounded above.
        let spec = EventWiseSpec::new(
            vec![],
            vec![],
            vec![Polytope::new(1, vec![vec![-1.0]], vec![0.0]).unwrap()],
        )
        .unwrap();
        let err = wce_lp(&model, &reference, &spec, &theta).unwrap_err();
        assert!(matches!(err, AmbiguityError::UnboundedSupport { .. }));
    }

    #[test]
    fn quadratic_ball_combination_is_rejected() {
        let model = LossModel::quadratic(vec![vec![1.0]], vec![0.0], 0.0, 1.0, 1.0).unwrap();
        let reference = dist_1d(&[0.0], &[1.0]);
        let theta = Decision::new(vec![0.5]).unwrap();
        let ball = WassersteinBallSpec::new(0.1, NormOrder::Two).unwrap();
        assert!(matches!(
            wce_regularized(&model, &reference, &ball, &theta),
            Err(AmbiguityError::UnsupportedCombination { .. })
        ));
        assert!(matches!(
            wce_bruteforce(&model, &reference, &AmbiguitySpec::Ball(ball), &theta, 101),
            Err(AmbiguityError::UnsupportedCombination { .. })
        ));
    }

    #[test]
    fn decoupled_risk_dominates_and_is_monotone() {
        let model = LossModel::logistic(2.0, 2.0).unwrap();
        let reference = dist_1d(&[0.5, -1.0], &[0.5, 0.5]);
        let theta = Decision::new(vec![0.9]).unwrap();
        let v0 = decoupled_risk(
            &model,
            &reference,
            &AmbiguitySpec::Ball(WassersteinBallSpec::new(0.0, NormOrder::Infinity).unwrap()),
            &theta,
            Oracle::Regularized,
        )
        .unwrap();
        let v1 = decoupled_risk(
            &model,
            &reference,
            &AmbiguitySpec::Ball(WassersteinBallSpec::new(0.1, NormOrder::Infinity).unwrap()),
            &theta,
            Oracle::Regularized,
        )
        .unwrap();
        let v2 = decoupled_risk(
            &model,
            &reference,
            &AmbiguitySpec::Ball(WassersteinBallSpec::new(0.2, NormOrder::Infinity).unwrap()),
            &theta,
            Oracle::Regularized,
        )
        .unwrap();
        let empirical = empirical_risk(&model, &reference, &theta).unwrap();
        assert!((v0 - empirical).abs() <= 1e-12);
        assert!(v1 >= empirical && v1 <= v2 + 1e-9);
    }

    #[test]
    fn grid_and_dimension_preconditions() {
        let model = LossModel::logistic(1.0, 1.0).unwrap();
        let reference = dist_1d(&[0.0], &[1.0]);
        let theta = Decision::new(vec![1.0]).unwrap();
        let ball = AmbiguitySpec::Ball(WassersteinBallSpec::new(0.1, NormOrder::Two).unwrap());
        assert!(matches!(
            wce_bruteforce(&model, &reference, &ball, &theta, 5),
            Err(AmbiguityError::GridTooCoarse { .. })
        ));
        let wide = EmpiricalDistribution::new(
            vec![Sample::new(vec![0.0, 0.0, 0.0]).unwrap()],
            vec![1.0],
        )
        .unwrap();
        let theta3 = Decision::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            wce_bruteforce(&model, &wide, &ball, &theta3, 101),
            Err(AmbiguityError::DimensionTooLarge { .. })
        ));
    }
}
