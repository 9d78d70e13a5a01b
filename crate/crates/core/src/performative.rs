//! Decision-dependent distribution maps P̂(·) and sensitivity estimation.
//!
//! Three map families: the strategic-classification best response (agents
//! shift their strategic features against the deployed classifier), linear
//! scenario shifts with exactly known sensitivity, and the fixed
//! (performativity-free) map. [`estimate_sensitivity`] certifies a lower
//! bound on the Wasserstein sensitivity ε by maximizing the W₁ ratio over
//! sampled decision pairs, with exact transport distances from the LP.
//!
//! Maps are immutable and `realize` is a pure function of (map, θ), so
//! realizations can run in parallel.

use crate::linalg;
use crate::model::{Decision, EmpiricalDistribution, ModelError, Sample};
use crate::simplex::{solve_transport, SimplexError};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PerformativeError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solver(#[from] SimplexError),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("label at index {index} is {value}; labels must be ±1")]
    InvalidLabel { index: usize, value: f64 },
    #[error("strategic feature index {index} out of range for dimension {dim}")]
    InvalidStrategicIndex { index: usize, dim: usize },
    #[error("negative sensitivity parameter {0}")]
    NegativeEpsilon(f64),
    #[error("{detail}")]
    Shape { detail: String },
}

/// A discrete distribution over labeled examples (x, y) with y ∈ {−1, +1}.
/// The loss operates on z = x·y; this type keeps the label structure so the
/// strategic best response can move features without touching outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDistribution {
    features: Vec<Vec<f64>>,
    labels: Vec<f64>,
    probabilities: Vec<f64>,
}

impl LabeledDistribution {
    pub fn new(
        features: Vec<Vec<f64>>,
        labels: Vec<f64>,
        probabilities: Vec<f64>,
    ) -> Result<Self, PerformativeError> {
        if features.is_empty() {
            return Err(PerformativeError::Shape {
                detail: "need at least one labeled example".into(),
            });
        }
        if features.len() != labels.len() || features.len() != probabilities.len() {
            return Err(PerformativeError::Shape {
                detail: "features, labels, and probabilities must have equal length".into(),
            });
        }
        let dim = features[0].len();
        if features.iter().any(|x| x.len() != dim) {
            return Err(PerformativeError::Shape {
                detail: "feature dimensions differ".into(),
            });
        }
        for (i, &y) in labels.iter().enumerate() {
            if y != 1.0 && y != -1.0 {
                return Err(PerformativeError::InvalidLabel { index: i, value: y });
            }
        }
        // Delegate probability validation (mass, nonnegativity, finiteness).
        let samples = features
            .iter()
            .map(|x| Sample::new(x.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        EmpiricalDistribution::new(samples, probabilities.clone())?;
        Ok(Self {
            features,
            labels,
            probabilities,
        })
    }

    pub fn uniform(features: Vec<Vec<f64>>, labels: Vec<f64>) -> Result<Self, PerformativeError> {
        let n = features.len();
        if n == 0 {
            return Err(PerformativeError::Shape {
                detail: "need at least one labeled example".into(),
            });
        }
        let p = 1.0 / n as f64;
        let mut probabilities = vec![p; n];
        let head: f64 = probabilities[..n - 1].iter().sum();
        probabilities[n - 1] = 1.0 - head;
        Self::new(features, labels, probabilities)
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn feature_dim(&self) -> usize {
        self.features[0].len()
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.features
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }
}

/// A map from decisions to empirical distributions over z.
#[derive(Debug, Clone, PartialEq)]
pub enum DistributionMap {
    /// Fig.-1-style best response: each agent moves its strategic features
    /// by −ε·θ_S (linear utility −θᵀx against quadratic cost ‖x′−x‖²/(2ε)),
    /// labels never change, and the realized sample is z = x′·y.
    StrategicClassification {
        base: LabeledDistribution,
        strategic_features: Vec<usize>,
        epsilon: f64,
    },
    /// Scenarios translate by Mθ; the exact sensitivity ‖M‖₂ is computed at
    /// construction.
    LinearShift {
        base: EmpiricalDistribution,
        shift: Vec<Vec<f64>>,
        sensitivity: f64,
    },
    /// No performativity.
    Fixed { base: EmpiricalDistribution },
}

impl DistributionMap {
    pub fn strategic(
        base: LabeledDistribution,
        strategic_features: Vec<usize>,
        epsilon: f64,
    ) -> Result<Self, PerformativeError> {
        if !(epsilon >= 0.0) || !epsilon.is_finite() {
            return Err(PerformativeError::NegativeEpsilon(epsilon));
        }
        let dim = base.feature_dim();
        let mut seen = vec![false; dim];
        for &i in &strategic_features {
            if i >= dim {
                return Err(PerformativeError::InvalidStrategicIndex { index: i, dim });
            }
            if seen[i] {
                return Err(PerformativeError::Shape {
                    detail: format!("strategic feature {i} listed twice"),
                });
            }
            seen[i] = true;
        }
        Ok(Self::StrategicClassification {
            base,
            strategic_features,
            epsilon,
        })
    }

    pub fn linear_shift(
        base: EmpiricalDistribution,
        shift: Vec<Vec<f64>>,
    ) -> Result<Self, PerformativeError> {
        if shift.len() != base.dim() {
            return Err(PerformativeError::DimensionMismatch {
                expected: base.dim(),
                got: shift.len(),
            });
        }
        let cols = shift[0].len();
        if cols == 0 || shift.iter().any(|row| row.len() != cols) {
            return Err(PerformativeError::Shape {
                detail: "shift matrix rows have inconsistent lengths".into(),
            });
        }
        let sensitivity = linalg::spectral_norm(&shift);
        Ok(Self::LinearShift {
            base,
            shift,
            sensitivity,
        })
    }

    pub fn fixed(base: EmpiricalDistribution) -> Self {
        Self::Fixed { base }
    }

    /// The map's exact ε-sensitivity: the strategic parameter, the shift
    /// matrix's spectral norm, or 0 for the fixed map.
    pub fn epsilon(&self) -> f64 {
        match self {
            Self::StrategicClassification { epsilon, .. } => *epsilon,
            Self::LinearShift { sensitivity, .. } => *sensitivity,
            Self::Fixed { .. } => 0.0,
        }
    }

    /// Decision dimension the map expects.
    pub fn theta_dim(&self) -> usize {
        match self {
            Self::StrategicClassification { base, .. } => base.feature_dim(),
            Self::LinearShift { shift, .. } => shift[0].len(),
            Self::Fixed { base } => base.dim(),
        }
    }

    /// Realize P̂(θ). Probabilities are carried over unchanged and labels
    /// are never altered.
    pub fn realize(&self, theta: &Decision) -> Result<EmpiricalDistribution, PerformativeError> {
        match self {
            Self::StrategicClassification {
                base,
                strategic_features,
                epsilon,
            } => {
                if theta.dim() != base.feature_dim() {
                    return Err(PerformativeError::DimensionMismatch {
                        expected: base.feature_dim(),
                        got: theta.dim(),
                    });
                }
                let theta_v = theta.coords();
                let mut scenarios = Vec::with_capacity(base.len());
                for (x, &y) in base.features().iter().zip(base.labels()) {
                    let mut moved = x.clone();
                    for &i in strategic_features {
                        moved[i] -= epsilon * theta_v[i];
                    }
                    moved.iter_mut().for_each(|v| *v *= y);
                    scenarios.push(Sample::new(moved)?);
                }
                Ok(EmpiricalDistribution::new(
                    scenarios,
                    base.probabilities().to_vec(),
                )?)
            }
            Self::LinearShift { base, shift, .. } => {
                if theta.dim() != shift[0].len() {
                    return Err(PerformativeError::DimensionMismatch {
                        expected: shift[0].len(),
                        got: theta.dim(),
                    });
                }
                let offset = linalg::matvec(shift, theta.coords());
                let scenarios = base
                    .scenarios()
                    .iter()
                    .map(|s| Sample::new(linalg::axpy(s.coords(), 1.0, &offset)))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(EmpiricalDistribution::new(
                    scenarios,
                    base.probabilities().to_vec(),
                )?)
            }
            Self::Fixed { base } => Ok(base.clone()),
        }
    }
}

/// Seeded uniform sampler over an axis-aligned box in decision space.
#[derive(Debug, Clone)]
pub struct ThetaSampler {
    lo: Vec<f64>,
    hi: Vec<f64>,
    seed: u64,
}

impl ThetaSampler {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, seed: u64) -> Result<Self, PerformativeError> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(PerformativeError::Shape {
                detail: "sampler bounds must be nonempty and of equal length".into(),
            });
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(PerformativeError::Shape {
                detail: "sampler lower bound exceeds upper bound".into(),
            });
        }
        Ok(Self { lo, hi, seed })
    }

    fn draw(&self, rng: &mut impl Rng) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&l, &h)| if h > l { rng.gen_range(l..h) } else { l })
            .collect()
    }
}

/// Result of empirical sensitivity estimation: a certified lower bound on ε.
#[derive(Debug, Clone)]
pub struct SensitivityEstimate {
    pub epsilon_hat: f64,
    pub pairs_tested: usize,
    pub max_ratio_pair: (Decision, Decision),
}

/// Iteration cap for the adversarial direction refinement.
const REFINE_ITERATIONS: usize = 50;

/// Estimate the map's ε-sensitivity as the maximum of
/// `W₁(P̂(θ), P̂(θ′)) / ‖θ−θ′‖₂` over sampled pairs (exact W₁ via the
/// transportation LP). Always a lower bound on the true sensitivity.
/// With `refine`, a local ascent over the pair direction (cap 50
/// iterations) sharpens the bound around the best sampled pair.
pub fn estimate_sensitivity(
    map: &DistributionMap,
    sampler: &ThetaSampler,
    num_pairs: usize,
    refine: bool,
) -> Result<SensitivityEstimate, PerformativeError> {
    if num_pairs == 0 {
        return Err(PerformativeError::Shape {
            detail: "num_pairs must be at least 1".into(),
        });
    }
    let mut rng = crate::seed::rng(sampler.seed, 0);
    let mut best_ratio = 0.0f64;
    let mut best_pair: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut tested = 0;
    let mut attempts = 0;
    while tested < num_pairs {
        let a = sampler.draw(&mut rng);
        let b = sampler.draw(&mut rng);
        attempts += 1;
        if linalg::dist2(&a, &b) < 1e-12 {
            // Degenerate pair: resample rather than dividing by ~0.
            if attempts > 1000 * num_pairs {
                return Err(PerformativeError::Shape {
                    detail: "sampler box is degenerate; cannot draw distinct pairs".into(),
                });
            }
            continue;
        }
        tested += 1;
        let ratio = pair_ratio(map, &a, &b)?;
        if ratio > best_ratio {
            best_ratio = ratio;
            best_pair = Some((a, b));
        }
    }
    let (a, mut b) = best_pair.unwrap_or_else(|| {
        let a = sampler.lo.clone();
        let mut b = sampler.hi.clone();
        if linalg::dist2(&a, &b) < 1e-12 {
            b[0] += 1.0;
        }
        (a, b)
    });
    if refine {
        let scale = linalg::dist2(&a, &b);
        for it in 0..REFINE_ITERATIONS {
            // Perturb the pair direction, keeping its length; shrink the
            // perturbation as the ascent stalls.
            let sigma = scale * 0.5 / (1.0 + it as f64 / 8.0);
            let candidate: Vec<f64> = b
                .iter()
                .map(|&v| v + rng.gen_range(-sigma..sigma))
                .collect();
            if linalg::dist2(&a, &candidate) < 1e-12 {
                continue;
            }
            let ratio = pair_ratio(map, &a, &candidate)?;
            if ratio > best_ratio {
                best_ratio = ratio;
                b = candidate;
            }
        }
    }
    Ok(SensitivityEstimate {
        epsilon_hat: best_ratio,
        pairs_tested: tested,
        max_ratio_pair: (Decision::new(a)?, Decision::new(b)?),
    })
}

fn pair_ratio(map: &DistributionMap, a: &[f64], b: &[f64]) -> Result<f64, PerformativeError> {
    let da = Decision::new(a.to_vec())?;
    let db = Decision::new(b.to_vec())?;
    let pa = map.realize(&da)?;
    let pb = map.realize(&db)?;
    let w1 = solve_transport(&pa, &pb)?;
    Ok(w1 / linalg::dist2(a, b))
}
