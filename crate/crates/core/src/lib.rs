//! Distributionally robust performative optimization at desk scale.
//!
//! The library is organized around the pieces needed to study retraining
//! under decision-dependent data:
//!
//! * [`model`] — decisions, feasible sets, empirical distributions, and loss
//!   models together with their regularity constants (strong convexity γ,
//!   joint smoothness β, Lipschitz constants in the data).
//! * [`simplex`] — a self-contained dense two-phase LP solver with Bland's
//!   rule, plus exact discrete optimal transport built on top of it.
//! * [`ambiguity`] — Wasserstein-ball and event-wise ambiguity sets with
//!   three interchangeable worst-case-expectation oracles (closed-form
//!   regularization, LP dualization, brute-force discretization).
//! * [`performative`] — decision-dependent distribution maps, including the
//!   strategic-classification best response, and Wasserstein sensitivity
//!   estimation.
//! * [`r3m`] — the repeated robust risk minimization fixed-point loop and its
//!   projected-gradient inner solver, with full iterate tracing.
//! * [`analysis`] — certification harnesses for the contraction, linear-rate,
//!   and suboptimality guarantees, plus a grid-search oracle for the robust
//!   performative optimum.

pub mod ambiguity;
pub mod analysis;
pub mod linalg;
pub mod model;
pub mod performative;
pub mod r3m;
pub mod seed;
pub mod simplex;
