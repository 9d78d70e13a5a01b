//! Core domain types: decisions, feasible sets, empirical distributions, and
//! loss models with their regularity constants.
//!
//! All types are immutable value objects after construction and all
//! operations are pure functions, so everything here is safe to share across
//! threads.

use crate::linalg;
use thiserror::Error;

/// Errors raised by domain-type construction and loss evaluation.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("vector must have at least one entry")]
    EmptyVector,
    #[error("{what} contains a non-finite entry")]
    NonFinite { what: &'static str },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid probabilities: {reason}")]
    InvalidProbabilities { reason: String },
    #[error("invalid feasible set: {reason}")]
    InvalidFeasibleSet { reason: &'static str },
    #[error("operation `{op}` does not support loss kind `{kind}`")]
    UnsupportedKind { op: &'static str, kind: &'static str },
    #[error("quadratic loss matrix must be symmetric positive semidefinite")]
    NotPositiveSemidefinite,
    #[error("piecewise-affine loss needs at least one piece")]
    NoPieces,
}

/// A decision vector θ in the feasible set Θ.
#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    theta: Vec<f64>,
}

impl Decision {
    pub fn new(theta: Vec<f64>) -> Result<Self, ModelError> {
        if theta.is_empty() {
            return Err(ModelError::EmptyVector);
        }
        if theta.iter().any(|x| !x.is_finite()) {
            return Err(ModelError::NonFinite { what: "decision" });
        }
        Ok(Self { theta })
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.theta
    }
}

/// A realization z of the uncertain parameters. In classification z = x·y,
/// the features scaled by the ±1 label.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    z: Vec<f64>,
}

impl Sample {
    pub fn new(z: Vec<f64>) -> Result<Self, ModelError> {
        if z.is_empty() {
            return Err(ModelError::EmptyVector);
        }
        if z.iter().any(|x| !x.is_finite()) {
            return Err(ModelError::NonFinite { what: "sample" });
        }
        Ok(Self { z })
    }

    pub fn dim(&self) -> usize {
        self.z.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.z
    }
}

/// Closed convex feasible set Θ with an exact Euclidean projection.
#[derive(Debug, Clone, PartialEq)]
pub enum FeasibleSet {
    /// All of R^N.
    Unbounded,
    /// Axis-aligned box `lower ≤ θ ≤ upper` (componentwise).
    Box { lower: Vec<f64>, upper: Vec<f64> },
    /// Euclidean ball of positive radius.
    Ball { center: Vec<f64>, radius: f64 },
}

/// Relative slack used to make ball projection exactly idempotent: a point
/// within this relative distance of the boundary is treated as inside, so a
/// freshly projected point is never re-scaled by a rounding ulp.
const BALL_MEMBERSHIP_SLACK: f64 = 1e-12;

impl FeasibleSet {
    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, ModelError> {
        if lower.is_empty() {
            return Err(ModelError::EmptyVector);
        }
        if lower.len() != upper.len() {
            return Err(ModelError::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if lower.iter().chain(upper.iter()).any(|x| !x.is_finite()) {
            return Err(ModelError::NonFinite { what: "box bounds" });
        }
        if lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return Err(ModelError::InvalidFeasibleSet {
                reason: "box lower bound exceeds upper bound",
            });
        }
        Ok(Self::Box { lower, upper })
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self, ModelError> {
        if center.is_empty() {
            return Err(ModelError::EmptyVector);
        }
        if center.iter().any(|x| !x.is_finite()) || !radius.is_finite() {
            return Err(ModelError::NonFinite { what: "ball" });
        }
        if radius <= 0.0 {
            return Err(ModelError::InvalidFeasibleSet {
                reason: "ball radius must be positive",
            });
        }
        Ok(Self::Ball { center, radius })
    }

    /// Dimension constraint of the set, if any (`Unbounded` matches all).
    pub fn dim(&self) -> Option<usize> {
        match self {
            Self::Unbounded => None,
            Self::Box { lower, .. } => Some(lower.len()),
            Self::Ball { center, .. } => Some(center.len()),
        }
    }

    fn check_dim(&self, point: &[f64]) -> Result<(), ModelError> {
        if let Some(d) = self.dim() {
            if d != point.len() {
                return Err(ModelError::DimensionMismatch {
                    expected: d,
                    got: point.len(),
                });
            }
        }
        Ok(())
    }

    /// Euclidean projection onto the set. Idempotent: projecting a projected
    /// point returns it unchanged, bit for bit.
    pub fn project(&self, point: &[f64]) -> Result<Vec<f64>, ModelError> {
        self.check_dim(point)?;
        Ok(match self {
            Self::Unbounded => point.to_vec(),
            Self::Box { lower, upper } => point
                .iter()
                .zip(lower.iter().zip(upper))
                .map(|(x, (l, u))| x.clamp(*l, *u))
                .collect(),
            Self::Ball { center, radius } => {
                let offset = linalg::sub(point, center);
                let dist = linalg::norm2(&offset);
                if dist <= radius * (1.0 + BALL_MEMBERSHIP_SLACK) {
                    point.to_vec()
                } else {
                    let scale = radius / dist;
                    center
                        .iter()
                        .zip(&offset)
                        .map(|(c, o)| c + scale * o)
                        .collect()
                }
            }
        })
    }

    /// Membership test with absolute tolerance `tol`.
    pub fn contains(&self, point: &[f64], tol: f64) -> bool {
        if self.check_dim(point).is_err() {
            return false;
        }
        match self {
            Self::Unbounded => true,
            Self::Box { lower, upper } => point
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(x, (l, u))| *x >= l - tol && *x <= u + tol),
            Self::Ball { center, radius } => {
                linalg::dist2(point, center) <= radius * (1.0 + BALL_MEMBERSHIP_SLACK) + tol
            }
        }
    }
}

/// A discrete reference distribution P̂ = Σ_s p̂_s δ(ẑ_s).
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    scenarios: Vec<Sample>,
    probabilities: Vec<f64>,
}

/// Absolute tolerance on Σ p̂_s = 1 at construction.
const PROBABILITY_SUM_TOL: f64 = 1e-12;

impl EmpiricalDistribution {
    pub fn new(scenarios: Vec<Sample>, probabilities: Vec<f64>) -> Result<Self, ModelError> {
        if scenarios.is_empty() {
            return Err(ModelError::EmptyVector);
        }
        if scenarios.len() != probabilities.len() {
            return Err(ModelError::DimensionMismatch {
                expected: scenarios.len(),
                got: probabilities.len(),
            });
        }
        let dim = scenarios[0].dim();
        if scenarios.iter().any(|s| s.dim() != dim) {
            return Err(ModelError::InvalidProbabilities {
                reason: "scenario dimensions differ".into(),
            });
        }
        if probabilities.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(ModelError::InvalidProbabilities {
                reason: "probabilities must be finite and nonnegative".into(),
            });
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_SUM_TOL {
            return Err(ModelError::InvalidProbabilities {
                reason: format!("probabilities sum to {total}, expected 1"),
            });
        }
        Ok(Self {
            scenarios,
            probabilities,
        })
    }

    /// Uniform distribution over the given scenarios.
    pub fn uniform(scenarios: Vec<Sample>) -> Result<Self, ModelError> {
        let n = scenarios.len();
        if n == 0 {
            return Err(ModelError::EmptyVector);
        }
        let p = 1.0 / n as f64;
        let mut probabilities = vec![p; n];
        // Absorb the representation error of 1/n into the last entry so the
        // mass sums to exactly 1.
        let partial: f64 = probabilities[..n - 1].iter().sum();
        probabilities[n - 1] = 1.0 - partial;
        Self::new(scenarios, probabilities)
    }

    pub fn len(&self) -> usize {
        self.scenarios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scenarios.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.scenarios[0].dim()
    }

    pub fn scenarios(&self) -> &[Sample] {
        &self.scenarios
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Expectation of a scalar function of z under the distribution.
    pub fn expectation<F: FnMut(&Sample) -> f64>(&self, mut f: F) -> f64 {
        self.scenarios
            .iter()
            .zip(&self.probabilities)
            .map(|(s, p)| p * f(s))
            .sum()
    }
}

/// One piece of a piecewise-affine loss:
/// `ℓ_j(z,θ) = θᵀ(theta_coef + interaction·z) + offset + z_coefᵀz`.
///
/// This is the affine-in-z specialization of the piecewise-quadratic family
/// used by the LP dualization oracle (all quadratic-in-θ blocks zero).
#[derive(Debug, Clone, PartialEq)]
pub struct AffinePiece {
    /// Coefficient of θ that does not depend on z (dimension N).
    pub theta_coef: Vec<f64>,
    /// Bilinear block coupling θ and z (N×P, row-major).
    pub interaction: Vec<Vec<f64>>,
    /// Coefficient of z that does not depend on θ (dimension P).
    pub z_coef: Vec<f64>,
    /// Constant offset.
    pub offset: f64,
}

impl AffinePiece {
    /// `q_j(θ)`: the coefficient of z in this piece at a fixed θ.
    pub fn z_gradient_at(&self, theta: &[f64]) -> Vec<f64> {
        let mut q = linalg::matvec_t(&self.interaction, theta);
        for (qi, ci) in q.iter_mut().zip(&self.z_coef) {
            *qi += ci;
        }
        q
    }

    /// `r_j(θ)`: the z-independent part of this piece at a fixed θ.
    pub fn constant_at(&self, theta: &[f64]) -> f64 {
        linalg::dot(&self.theta_coef, theta) + self.offset
    }

    fn value(&self, z: &[f64], theta: &[f64]) -> f64 {
        self.constant_at(theta) + linalg::dot(&self.z_gradient_at(theta), z)
    }

    fn grad_theta(&self, z: &[f64]) -> Vec<f64> {
        linalg::axpy(&self.theta_coef, 1.0, &linalg::matvec(&self.interaction, z))
    }
}

/// The loss family ℓ(z,θ).
#[derive(Debug, Clone, PartialEq)]
pub enum LossKind {
    /// Margin-based logloss `log(1+exp(−zᵀθ))`.
    Logistic,
    /// `(θ−z)ᵀA(θ−z) + bᵀθ + c` with A symmetric positive semidefinite.
    Quadratic {
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
        c: f64,
    },
    /// `max_j ℓ_j(z,θ)` over affine pieces; ties resolved to the
    /// lowest-index active piece.
    PiecewiseAffine { pieces: Vec<AffinePiece> },
}

impl LossKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Logistic => "logistic",
            Self::Quadratic { .. } => "quadratic",
            Self::PiecewiseAffine { .. } => "piecewise-affine",
        }
    }
}

/// Regularity constants of a loss model. γ is the strong-convexity modulus
/// in θ, β the joint smoothness constant, `l_z` the Lipschitz constant in z,
/// and `l_outer` the Lipschitz constant L of the outer scalar function when
/// the loss is a margin loss 𝓛(zᵀθ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityConstants {
    pub gamma: f64,
    pub beta: f64,
    pub l_z: f64,
    pub l_outer: f64,
}

/// A loss ℓ(z,θ) with gradients in θ and z and its regularity constants.
///
/// Constants produced by the constructors are conservative defaults from
/// [`estimate_constants`]; experiments that need exact instance constants
/// override them with [`LossModel::with_constants`].
#[derive(Debug, Clone, PartialEq)]
pub struct LossModel {
    kind: LossKind,
    constants: RegularityConstants,
}

impl LossModel {
    /// Logistic margin loss, with β and L_z bounds valid on the given data
    /// and decision radii. γ = 0 (the logloss is convex but not strongly
    /// convex); L = 1 since the logloss has derivative magnitude < 1.
    pub fn logistic(data_radius: f64, theta_radius: f64) -> Result<Self, ModelError> {
        let (beta, l_z) = logistic_bounds(data_radius, theta_radius)?;
        Ok(Self {
            kind: LossKind::Logistic,
            constants: RegularityConstants {
                gamma: 0.0,
                beta,
                l_z,
                l_outer: 1.0,
            },
        })
    }

    /// Quadratic loss `(θ−z)ᵀA(θ−z) + bᵀθ + c`. γ = 2λ_min(A) and
    /// β = 2λ_max(A) are exact; L_z is bounded on the given radii.
    pub fn quadratic(
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
        c: f64,
        data_radius: f64,
        theta_radius: f64,
    ) -> Result<Self, ModelError> {
        let n = a.len();
        if n == 0 {
            return Err(ModelError::EmptyVector);
        }
        if a.iter().any(|row| row.len() != n) || b.len() != n {
            return Err(ModelError::DimensionMismatch {
                expected: n,
                got: b.len(),
            });
        }
        let finite = a
            .iter()
            .flatten()
            .chain(b.iter())
            .all(|x| x.is_finite())
            && c.is_finite();
        if !finite {
            return Err(ModelError::NonFinite { what: "quadratic coefficients" });
        }
        let symmetric = (0..n).all(|i| (0..n).all(|j| (a[i][j] - a[j][i]).abs() <= 1e-12));
        if !symmetric {
            return Err(ModelError::NotPositiveSemidefinite);
        }
        let lambda_min = linalg::sym_psd_eig_min(&a);
        let lambda_max = linalg::sym_eig_max(&a);
        if lambda_min < -1e-10 {
            return Err(ModelError::NotPositiveSemidefinite);
        }
        if !(data_radius > 0.0) || !(theta_radius > 0.0) {
            return Err(ModelError::InvalidFeasibleSet {
                reason: "radii must be positive",
            });
        }
        Ok(Self {
            kind: LossKind::Quadratic { a, b, c },
            constants: RegularityConstants {
                gamma: 2.0 * lambda_min,
                beta: 2.0 * lambda_max,
                l_z: 2.0 * lambda_max * (data_radius + theta_radius),
                l_outer: 1.0,
            },
        })
    }

    /// Piecewise-affine loss `max_j ℓ_j(z,θ)`. The gradient jumps across
    /// piece boundaries, so no finite joint-smoothness constant exists;
    /// β and L_z are stored as +∞ and the smooth-solver paths reject this
    /// kind.
    pub fn piecewise_affine(pieces: Vec<AffinePiece>) -> Result<Self, ModelError> {
        if pieces.is_empty() {
            return Err(ModelError::NoPieces);
        }
        let n = pieces[0].theta_coef.len();
        let p = pieces[0].z_coef.len();
        for piece in &pieces {
            let shape_ok = piece.theta_coef.len() == n
                && piece.z_coef.len() == p
                && piece.interaction.len() == n
                && piece.interaction.iter().all(|row| row.len() == p);
            if !shape_ok {
                return Err(ModelError::DimensionMismatch { expected: n, got: p });
            }
        }
        Ok(Self {
            kind: LossKind::PiecewiseAffine { pieces },
            constants: RegularityConstants {
                gamma: 0.0,
                beta: f64::INFINITY,
                l_z: f64::INFINITY,
                l_outer: 1.0,
            },
        })
    }

    /// Replace the stored regularity constants (config override).
    pub fn with_constants(mut self, constants: RegularityConstants) -> Self {
        self.constants = constants;
        self
    }

    pub fn kind(&self) -> &LossKind {
        &self.kind
    }

    pub fn constants(&self) -> RegularityConstants {
        self.constants
    }

    pub fn gamma(&self) -> f64 {
        self.constants.gamma
    }

    pub fn beta(&self) -> f64 {
        self.constants.beta
    }

    pub fn l_z(&self) -> f64 {
        self.constants.l_z
    }

    pub fn l_outer(&self) -> f64 {
        self.constants.l_outer
    }

    fn check_dims(&self, z: &Sample, theta: &Decision) -> Result<(), ModelError> {
        match &self.kind {
            LossKind::Logistic => {
                if z.dim() != theta.dim() {
                    return Err(ModelError::DimensionMismatch {
                        expected: theta.dim(),
                        got: z.dim(),
                    });
                }
            }
            LossKind::Quadratic { a, .. } => {
                if theta.dim() != a.len() {
                    return Err(ModelError::DimensionMismatch {
                        expected: a.len(),
                        got: theta.dim(),
                    });
                }
                if z.dim() != a.len() {
                    return Err(ModelError::DimensionMismatch {
                        expected: a.len(),
                        got: z.dim(),
                    });
                }
            }
            LossKind::PiecewiseAffine { pieces } => {
                let n = pieces[0].theta_coef.len();
                let p = pieces[0].z_coef.len();
                if theta.dim() != n {
                    return Err(ModelError::DimensionMismatch {
                        expected: n,
                        got: theta.dim(),
                    });
                }
                if z.dim() != p {
                    return Err(ModelError::DimensionMismatch {
                        expected: p,
                        got: z.dim(),
                    });
                }
            }
        }
        Ok(())
    }

    /// ℓ(z,θ).
    pub fn value(&self, z: &Sample, theta: &Decision) -> Result<f64, ModelError> {
        self.check_dims(z, theta)?;
        Ok(match &self.kind {
            LossKind::Logistic => logloss(linalg::dot(z.coords(), theta.coords())),
            LossKind::Quadratic { a, b, c } => {
                let d = linalg::sub(theta.coords(), z.coords());
                linalg::dot(&d, &linalg::matvec(a, &d)) + linalg::dot(b, theta.coords()) + c
            }
            LossKind::PiecewiseAffine { pieces } => {
                pieces
                    .iter()
                    .map(|piece| piece.value(z.coords(), theta.coords()))
                    .fold(f64::NEG_INFINITY, f64::max)
            }
        })
    }

    /// ∇_θ ℓ(z,θ). At a piecewise-affine tie the lowest-index active piece's
    /// gradient is returned.
    pub fn grad_theta(&self, z: &Sample, theta: &Decision) -> Result<Vec<f64>, ModelError> {
        self.check_dims(z, theta)?;
        Ok(match &self.kind {
            LossKind::Logistic => {
                let margin = linalg::dot(z.coords(), theta.coords());
                let w = -sigmoid(-margin);
                z.coords().iter().map(|zi| w * zi).collect()
            }
            LossKind::Quadratic { a, b, .. } => {
                let d = linalg::sub(theta.coords(), z.coords());
                let mut g = linalg::matvec(a, &d);
                g.iter_mut().zip(b).for_each(|(gi, bi)| *gi = 2.0 * *gi + bi);
                g
            }
            LossKind::PiecewiseAffine { pieces } => {
                let j = active_piece(pieces, z.coords(), theta.coords());
                pieces[j].grad_theta(z.coords())
            }
        })
    }

    /// ∇_z ℓ(z,θ), with the same tie-breaking rule as [`Self::grad_theta`].
    pub fn grad_z(&self, z: &Sample, theta: &Decision) -> Result<Vec<f64>, ModelError> {
        self.check_dims(z, theta)?;
        Ok(match &self.kind {
            LossKind::Logistic => {
                let margin = linalg::dot(z.coords(), theta.coords());
                let w = -sigmoid(-margin);
                theta.coords().iter().map(|ti| w * ti).collect()
            }
            LossKind::Quadratic { a, .. } => {
                let d = linalg::sub(z.coords(), theta.coords());
                linalg::matvec(a, &d).iter().map(|x| 2.0 * x).collect()
            }
            LossKind::PiecewiseAffine { pieces } => {
                let j = active_piece(pieces, z.coords(), theta.coords());
                pieces[j].z_gradient_at(theta.coords())
            }
        })
    }

    /// Whether the loss is a margin loss 𝓛(zᵀθ) with 𝓛 Lipschitz — the
    /// family covered by the Wasserstein regularization identities.
    pub fn is_lipschitz_margin_loss(&self) -> bool {
        matches!(self.kind, LossKind::Logistic)
    }
}

/// Index of the max-attaining piece, lowest index on ties (strict `>`
/// ensures the first maximizer wins, so subgradient selection is
/// deterministic and reproducible).
fn active_piece(pieces: &[AffinePiece], z: &[f64], theta: &[f64]) -> usize {
    let mut best = 0;
    let mut best_val = pieces[0].value(z, theta);
    for (j, piece) in pieces.iter().enumerate().skip(1) {
        let v = piece.value(z, theta);
        if v > best_val {
            best = j;
            best_val = v;
        }
    }
    best
}

/// Numerically stable logloss `log(1+exp(−m))`.
pub fn logloss(margin: f64) -> f64 {
    (-margin).max(0.0) + (-margin.abs()).exp().ln_1p()
}

/// Numerically stable standard sigmoid.
pub fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// Conservative upper bounds (β, L_z) for a loss on the ball
/// `‖z‖₂ ≤ data_radius, ‖θ‖₂ ≤ theta_radius`.
///
/// Logistic derivation, writing m = zᵀθ, σ for the sigmoid (0 < σ′ ≤ 1/4,
/// σ < 1) and R_z, R_θ for the radii:
///
/// * in θ: ∇_θℓ = −σ(−m)z, so ‖∇_θℓ(z,θ)−∇_θℓ(z,θ′)‖ ≤ (1/4)|zᵀ(θ−θ′)|‖z‖
///   ≤ (R_z²/4)‖θ−θ′‖;
/// * in z: ‖σ(−m)z − σ(−m′)z′‖ ≤ σ(−m)‖z−z′‖ + |σ(−m)−σ(−m′)|‖z′‖
///   ≤ (σ(R_zR_θ) + R_zR_θ/4)‖z−z′‖, using |m| ≤ R_zR_θ;
/// * L_z: ‖∇_zℓ‖ = σ(−m)‖θ‖ ≤ R_θ.
///
/// Quadratic: ∇_θℓ = 2A(θ−z) + b gives β = 2‖A‖₂ exactly in both arguments,
/// and ‖∇_zℓ‖ = ‖2A(z−θ)‖ ≤ 2‖A‖₂(R_z + R_θ).
pub fn estimate_constants(
    model: &LossModel,
    data_radius: f64,
    theta_radius: f64,
) -> Result<(f64, f64), ModelError> {
    if !(data_radius >= 0.0) || !(theta_radius >= 0.0) {
        return Err(ModelError::NonFinite { what: "radius" });
    }
    match &model.kind {
        LossKind::Logistic => logistic_bounds(data_radius, theta_radius),
        LossKind::Quadratic { a, .. } => {
            let two_norm = 2.0 * linalg::sym_eig_max(a);
            Ok((two_norm, two_norm * (data_radius + theta_radius)))
        }
        LossKind::PiecewiseAffine { .. } => Err(ModelError::UnsupportedKind {
            op: "estimate_constants",
            kind: "piecewise-affine",
        }),
    }
}

fn logistic_bounds(data_radius: f64, theta_radius: f64) -> Result<(f64, f64), ModelError> {
    if !(data_radius >= 0.0) || !(theta_radius >= 0.0) {
        return Err(ModelError::NonFinite { what: "radius" });
    }
    let theta_part = data_radius * data_radius / 4.0;
    let z_part = sigmoid(data_radius * theta_radius) + data_radius * theta_radius / 4.0;
    Ok((theta_part.max(z_part), theta_radius))
}
