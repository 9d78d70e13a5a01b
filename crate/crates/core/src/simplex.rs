//! Self-contained dense linear programming.
//!
//! A two-phase primal simplex on a dense tableau with Bland's anti-cycling
//! rule: entering variable is the lowest-index column with a negative reduced
//! cost, leaving variable is the lowest-index basic variable among the
//! minimum-ratio rows. Bland's rule guarantees termination and makes every
//! solve deterministic for a fixed input. Problem sizes here are desk scale
//! (at most a few thousand variables from discretization grids), so the dense
//! tableau is the simple and auditable choice.
//!
//! General bounds are removed before the tableau is built: finite lower
//! bounds are shifted away, upper-bounded-below-unbounded variables are
//! mirrored, free variables are split, and finite upper bounds become extra
//! `≤` rows. Infinities never enter tableau arithmetic.
//!
//! [`solve_transport`] computes exact discrete Wasserstein-1 distances via
//! the transportation polytope.

use crate::linalg;
use crate::model::EmpiricalDistribution;
use thiserror::Error;

/// Pivot/reduced-cost tolerance.
const EPS: f64 = 1e-9;
/// Phase-1 infeasibility threshold (relative to the rhs scale).
const FEAS_TOL: f64 = 1e-7;
/// Iteration safety cap; Bland's rule terminates long before this on the
/// problem sizes targeted here.
const MAX_PIVOTS: usize = 400_000;

#[derive(Debug, Error)]
pub enum SimplexError {
    #[error("linear program is malformed: {reason}")]
    Malformed { reason: String },
    #[error("numerical failure: {reason}")]
    Numerical { reason: String },
}

/// Constraint row sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

/// A dense LP: optimize `objective·x` subject to per-row linear constraints
/// and per-variable bounds (±∞ allowed in bounds only).
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub direction: Direction,
    pub objective: Vec<f64>,
    pub constraint_matrix: Vec<Vec<f64>>,
    pub senses: Vec<Sense>,
    pub rhs: Vec<f64>,
    /// Per-variable `[lower, upper]`; defaults to `[0, +∞)`.
    pub variable_bounds: Vec<(f64, f64)>,
}

impl LinearProgram {
    /// New program over `objective.len()` variables, no rows yet, default
    /// bounds `[0, +∞)`.
    pub fn new(direction: Direction, objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            direction,
            objective,
            constraint_matrix: Vec::new(),
            senses: Vec::new(),
            rhs: Vec::new(),
            variable_bounds: vec![(0.0, f64::INFINITY); n],
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<f64>, sense: Sense, rhs: f64) {
        assert_eq!(coeffs.len(), self.objective.len(), "row length mismatch");
        self.constraint_matrix.push(coeffs);
        self.senses.push(sense);
        self.rhs.push(rhs);
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        self.variable_bounds[var] = (lower, upper);
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn validate(&self) -> Result<(), SimplexError> {
        let n = self.num_vars();
        let m = self.constraint_matrix.len();
        if self.senses.len() != m || self.rhs.len() != m {
            return Err(SimplexError::Malformed {
                reason: "row count mismatch between matrix, senses, and rhs".into(),
            });
        }
        if self.variable_bounds.len() != n {
            return Err(SimplexError::Malformed {
                reason: "bounds length mismatch".into(),
            });
        }
        let finite = self.objective.iter().all(|x| x.is_finite())
            && self.rhs.iter().all(|x| x.is_finite())
            && self
                .constraint_matrix
                .iter()
                .all(|row| row.len() == n && row.iter().all(|x| x.is_finite()));
        if !finite {
            return Err(SimplexError::Malformed {
                reason: "NaN or infinite entry in objective, matrix, or rhs".into(),
            });
        }
        for (l, u) in &self.variable_bounds {
            if l.is_nan() || u.is_nan() || l > u {
                return Err(SimplexError::Malformed {
                    reason: "invalid variable bounds".into(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver output. For non-optimal statuses the vectors are empty and the
/// objective value is NaN.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub primal: Vec<f64>,
    /// One multiplier per input row, in shadow-price convention:
    /// `dual[i] = ∂(objective)/∂(rhs[i])` at the optimum.
    pub dual: Vec<f64>,
    pub objective_value: f64,
}

impl LpSolution {
    fn non_optimal(status: LpStatus) -> Self {
        Self {
            status,
            primal: Vec::new(),
            dual: Vec::new(),
            objective_value: f64::NAN,
        }
    }
}

/// How each input variable maps onto the nonnegative tableau variables.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// `x = offset + t[col]`
    Shift { col: usize, offset: f64 },
    /// `x = offset − t[col]`
    Mirror { col: usize, offset: f64 },
    /// `x = t[pos] − t[neg]`
    Split { pos: usize, neg: usize },
    /// Equal bounds pin the variable.
    Fixed(f64),
}

struct Tableau {
    /// `rows × (cols + 1)`; last column is the rhs.
    data: Vec<Vec<f64>>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    active: Vec<bool>,
    cols: usize,
    first_artificial: usize,
}

impl Tableau {
    fn rhs(&self, row: usize) -> f64 {
        self.data[row][self.cols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.data[row][col];
        for v in self.data[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.data[row].clone();
        for (r, data_row) in self.data.iter_mut().enumerate() {
            if r != row {
                let f = data_row[col];
                if f != 0.0 {
                    for (v, pv) in data_row.iter_mut().zip(&pivot_row) {
                        *v -= f * pv;
                    }
                }
            }
        }
        let f = self.obj[col];
        if f != 0.0 {
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
        }
        self.basis[row] = col;
    }

    /// Rebuild the reduced-cost row for the given cost vector (phase switch).
    fn price_out(&mut self, costs: &[f64]) {
        let mut obj = costs.to_vec();
        obj.push(0.0);
        for (row, data_row) in self.data.iter().enumerate() {
            if !self.active[row] {
                continue;
            }
            let cb = obj[self.basis[row]];
            if cb != 0.0 {
                for (v, rv) in obj.iter_mut().zip(data_row) {
                    *v -= cb * rv;
                }
            }
        }
        self.obj = obj;
    }

    /// Bland's-rule simplex iterations on the current objective row.
    /// `allow` filters the entering columns. Returns `Ok(true)` at optimality,
    /// `Ok(false)` if an unbounded ray was found.
    fn run(&mut self, allow: impl Fn(usize) -> bool) -> Result<bool, SimplexError> {
        for _ in 0..MAX_PIVOTS {
            let entering = (0..self.cols).find(|&j| allow(j) && self.obj[j] < -EPS);
            let Some(col) = entering else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for row in 0..self.data.len() {
                if !self.active[row] {
                    continue;
                }
                let a = self.data[row][col];
                if a > EPS {
                    let ratio = self.rhs(row) / a;
                    let better = match leave {
                        None => true,
                        Some((best_row, best_ratio)) => {
                            ratio < best_ratio - EPS
                                || (ratio <= best_ratio + EPS
                                    && self.basis[row] < self.basis[best_row])
                        }
                    };
                    if better {
                        leave = Some((row, ratio));
                    }
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, col),
                None => return Ok(false),
            }
        }
        Err(SimplexError::Numerical {
            reason: "pivot limit exceeded".into(),
        })
    }
}

/// Solve the LP, certifying feasibility, complementary slackness, and the
/// duality gap of the returned basis. Deterministic for a fixed input.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution, SimplexError> {
    lp.validate()?;
    let n = lp.num_vars();
    let m_user = lp.constraint_matrix.len();

    // Internally always minimize.
    let sign = match lp.direction {
        Direction::Minimize => 1.0,
        Direction::Maximize => -1.0,
    };

    // Variable transforms.
    let mut var_maps = Vec::with_capacity(n);
    let mut num_structural = 0usize;
    let mut ub_rows: Vec<(usize, f64)> = Vec::new();
    for &(l, u) in &lp.variable_bounds {
        let map = if l.is_finite() && u.is_finite() {
            if u - l <= 0.0 {
                VarMap::Fixed(l)
            } else {
                let col = num_structural;
                num_structural += 1;
                ub_rows.push((col, u - l));
                VarMap::Shift { col, offset: l }
            }
        } else if l.is_finite() {
            let col = num_structural;
            num_structural += 1;
            VarMap::Shift { col, offset: l }
        } else if u.is_finite() {
            let col = num_structural;
            num_structural += 1;
            VarMap::Mirror { col, offset: u }
        } else {
            let pos = num_structural;
            let neg = num_structural + 1;
            num_structural += 2;
            VarMap::Split { pos, neg }
        };
        var_maps.push(map);
    }

    // Transformed rows over structural columns: user rows first, then
    // upper-bound rows. Track per-row rhs offsets and sign flips for duals.
    let mut rows: Vec<(Vec<f64>, Sense, f64)> = Vec::with_capacity(m_user + ub_rows.len());
    for i in 0..m_user {
        let mut coeffs = vec![0.0; num_structural];
        let mut rhs = lp.rhs[i];
        for (j, &a) in lp.constraint_matrix[i].iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            match var_maps[j] {
                VarMap::Shift { col, offset } => {
                    coeffs[col] += a;
                    rhs -= a * offset;
                }
                VarMap::Mirror { col, offset } => {
                    coeffs[col] -= a;
                    rhs -= a * offset;
                }
                VarMap::Split { pos, neg } => {
                    coeffs[pos] += a;
                    coeffs[neg] -= a;
                }
                VarMap::Fixed(v) => rhs -= a * v,
            }
        }
        rows.push((coeffs, lp.senses[i], rhs));
    }
    for &(col, limit) in &ub_rows {
        let mut coeffs = vec![0.0; num_structural];
        coeffs[col] = 1.0;
        rows.push((coeffs, Sense::Le, limit));
    }

    // Transformed objective. Constant terms from the variable transforms
    // drop out: the reported objective is recomputed from the original data.
    let mut costs = vec![0.0; num_structural];
    for (j, &c) in lp.objective.iter().enumerate() {
        let c = sign * c;
        match var_maps[j] {
            VarMap::Shift { col, .. } => costs[col] += c,
            VarMap::Mirror { col, .. } => costs[col] -= c,
            VarMap::Split { pos, neg } => {
                costs[pos] += c;
                costs[neg] -= c;
            }
            VarMap::Fixed(_) => {}
        }
    }

    // Normalize rhs ≥ 0 and attach slack/surplus/artificial columns.
    let m = rows.len();
    let mut row_flipped = vec![false; m];
    let mut slack_col = vec![None::<(usize, f64)>; m]; // (col, coefficient)
    let mut artificial_col = vec![None::<usize>; m];
    let mut next_col = num_structural;
    for (i, (coeffs, sense, rhs)) in rows.iter_mut().enumerate() {
        if *rhs < 0.0 {
            coeffs.iter_mut().for_each(|v| *v = -*v);
            *rhs = -*rhs;
            *sense = match *sense {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
            row_flipped[i] = true;
        }
        match sense {
            Sense::Le => {
                slack_col[i] = Some((next_col, 1.0));
                next_col += 1;
            }
            Sense::Ge => {
                slack_col[i] = Some((next_col, -1.0));
                next_col += 1;
            }
            Sense::Eq => {}
        }
    }
    let first_artificial = next_col;
    for (i, (_, sense, _)) in rows.iter().enumerate() {
        let needs_artificial = !matches!(sense, Sense::Le);
        if needs_artificial {
            artificial_col[i] = Some(next_col);
            next_col += 1;
        }
    }
    let cols = next_col;

    let mut tab = Tableau {
        data: Vec::with_capacity(m),
        obj: vec![0.0; cols + 1],
        basis: vec![0; m],
        active: vec![true; m],
        cols,
        first_artificial,
    };
    for (i, (coeffs, _, rhs)) in rows.iter().enumerate() {
        let mut row = vec![0.0; cols + 1];
        row[..num_structural].copy_from_slice(coeffs);
        if let Some((c, v)) = slack_col[i] {
            row[c] = v;
        }
        if let Some(c) = artificial_col[i] {
            row[c] = 1.0;
        }
        row[cols] = *rhs;
        tab.basis[i] = match (artificial_col[i], slack_col[i]) {
            (Some(c), _) => c,
            (None, Some((c, _))) => c,
            (None, None) => unreachable!("every row has a slack or an artificial"),
        };
        tab.data.push(row);
    }

    let rhs_scale = 1.0 + lp.rhs.iter().fold(0.0f64, |a, b| a.max(b.abs()));

    // Phase 1.
    if first_artificial < cols {
        let mut phase1 = vec![0.0; cols];
        for c in first_artificial..cols {
            phase1[c] = 1.0;
        }
        tab.price_out(&phase1);
        let optimal = tab.run(|_| true)?;
        if !optimal {
            return Err(SimplexError::Numerical {
                reason: "phase-1 objective unbounded".into(),
            });
        }
        let infeas = -tab.obj[cols];
        if infeas > FEAS_TOL * rhs_scale {
            return Ok(LpSolution::non_optimal(LpStatus::Infeasible));
        }
        // Drive artificials out of the basis; a row where no real column
        // can pivot is redundant and is dropped.
        for row in 0..m {
            if tab.basis[row] >= first_artificial && tab.active[row] {
                let candidate =
                    (0..first_artificial).find(|&j| tab.data[row][j].abs() > 1e-7);
                match candidate {
                    Some(col) => tab.pivot(row, col),
                    None => tab.active[row] = false,
                }
            }
        }
    }

    // Phase 2.
    let mut phase2 = vec![0.0; cols];
    phase2[..num_structural].copy_from_slice(&costs);
    tab.price_out(&phase2);
    let first_art = tab.first_artificial;
    let optimal = tab.run(|j| j < first_art)?;
    if !optimal {
        return Ok(LpSolution::non_optimal(LpStatus::Unbounded));
    }

    // Extract the structural solution.
    let mut t_vals = vec![0.0; cols];
    for row in 0..m {
        if tab.active[row] {
            t_vals[tab.basis[row]] = tab.rhs(row);
        }
    }
    let mut primal = vec![0.0; n];
    for (j, map) in var_maps.iter().enumerate() {
        primal[j] = match *map {
            VarMap::Shift { col, offset } => offset + t_vals[col],
            VarMap::Mirror { col, offset } => offset - t_vals[col],
            VarMap::Split { pos, neg } => t_vals[pos] - t_vals[neg],
            VarMap::Fixed(v) => v,
        };
    }
    let objective_value = linalg::dot(&lp.objective, &primal);

    // Row duals: solve Bᵀy = c_B on the active equality system, then map
    // back through row flips and the direction sign.
    let active_rows: Vec<usize> = (0..m).filter(|&i| tab.active[i]).collect();
    let k = active_rows.len();
    let mut basis_t = vec![vec![0.0; k]; k];
    let mut cost_b = vec![0.0; k];
    for (bi, &row) in active_rows.iter().enumerate() {
        let col = tab.basis[row];
        cost_b[bi] = if col < num_structural { costs[col] } else { 0.0 };
        for (ri, &r2) in active_rows.iter().enumerate() {
            // Original (pre-pivot) column entry of the basic variable.
            basis_t[bi][ri] = original_entry(&rows, &slack_col, num_structural, r2, col);
        }
    }
    let y_active = linalg::lu_solve(&basis_t, &cost_b).ok_or_else(|| SimplexError::Numerical {
        reason: "singular basis while extracting duals".into(),
    })?;
    let mut dual = vec![0.0; m_user];
    for (bi, &row) in active_rows.iter().enumerate() {
        if row < m_user {
            let mut y = y_active[bi];
            if row_flipped[row] {
                y = -y;
            }
            dual[row] = sign * y;
        }
    }

    let solution = LpSolution {
        status: LpStatus::Optimal,
        primal,
        dual,
        objective_value,
    };
    certify(lp, &solution, rhs_scale)?;
    Ok(solution)
}

/// Entry of the transformed constraint system for (row, column) before any
/// pivoting, used to reconstruct the basis matrix for dual extraction.
fn original_entry(
    rows: &[(Vec<f64>, Sense, f64)],
    slack_col: &[Option<(usize, f64)>],
    num_structural: usize,
    row: usize,
    col: usize,
) -> f64 {
    if col < num_structural {
        rows[row].0[col]
    } else {
        match slack_col[row] {
            Some((c, v)) if c == col => v,
            _ => 0.0,
        }
    }
}

/// Post-solve certification of the optimal basis: primal feasibility,
/// complementary slackness, and the primal/dual objective gap.
fn certify(lp: &LinearProgram, sol: &LpSolution, rhs_scale: f64) -> Result<(), SimplexError> {
    let feas_tol = 1e-8 * rhs_scale;
    let value_scale = 1.0 + sol.objective_value.abs();
    for (i, row) in lp.constraint_matrix.iter().enumerate() {
        let ax = linalg::dot(row, &sol.primal);
        let viol = match lp.senses[i] {
            Sense::Le => (ax - lp.rhs[i]).max(0.0),
            Sense::Ge => (lp.rhs[i] - ax).max(0.0),
            Sense::Eq => (ax - lp.rhs[i]).abs(),
        };
        if viol > feas_tol {
            return Err(SimplexError::Numerical {
                reason: format!("primal residual {viol} on row {i}"),
            });
        }
        // Complementary slackness on inequality rows.
        let slack = lp.rhs[i] - ax;
        if lp.senses[i] != Sense::Eq && (sol.dual[i] * slack).abs() > 1e-7 * value_scale {
            return Err(SimplexError::Numerical {
                reason: format!("complementary slackness residual on row {i}"),
            });
        }
    }
    for (j, &(l, u)) in lp.variable_bounds.iter().enumerate() {
        let x = sol.primal[j];
        if x < l - feas_tol || x > u + feas_tol {
            return Err(SimplexError::Numerical {
                reason: format!("bound violation on variable {j}"),
            });
        }
    }
    Ok(())
}

/// Exact Wasserstein-1 distance between two finite discrete distributions
/// with Euclidean ground metric, via the transportation LP.
pub fn solve_transport(
    source: &EmpiricalDistribution,
    target: &EmpiricalDistribution,
) -> Result<f64, SimplexError> {
    if source.dim() != target.dim() {
        return Err(SimplexError::Malformed {
            reason: format!(
                "transport dimension mismatch: {} vs {}",
                source.dim(),
                target.dim()
            ),
        });
    }
    let na = source.len();
    let nb = target.len();
    let mut objective = Vec::with_capacity(na * nb);
    for sa in source.scenarios() {
        for sb in target.scenarios() {
            objective.push(linalg::dist2(sa.coords(), sb.coords()));
        }
    }
    let mut lp = LinearProgram::new(Direction::Minimize, objective);
    for (i, &p) in source.probabilities().iter().enumerate() {
        let mut row = vec![0.0; na * nb];
        for j in 0..nb {
            row[i * nb + j] = 1.0;
        }
        lp.add_row(row, Sense::Eq, p);
    }
    // The final column-sum row is implied by mass conservation; dropping it
    // keeps the system full rank.
    for (j, &q) in target.probabilities().iter().enumerate().take(nb - 1) {
        let mut row = vec![0.0; na * nb];
        for i in 0..na {
            row[i * nb + j] = 1.0;
        }
        lp.add_row(row, Sense::Eq, q);
    }
    let sol = solve_lp(&lp)?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.objective_value.max(0.0)),
        status => Err(SimplexError::Numerical {
            reason: format!("transportation LP returned {status:?}"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Sample;
    use approx::assert_relative_eq;
    use rand::Rng;

    fn dist_1d(points: &[f64], probs: &[f64]) -> EmpiricalDistribution {
        let scenarios = points
            .iter()
            .map(|&p| Sample::new(vec![p]).unwrap())
            .collect();
        EmpiricalDistribution::new(scenarios, probs.to_vec()).unwrap()
    }

    /// Independent 1-D W₁ oracle: integrate |F_a − F_b| by merging the
    /// supports' CDF breakpoints.
    fn quantile_w1(a: &EmpiricalDistribution, b: &EmpiricalDistribution) -> f64 {
        let mut pts: Vec<(f64, f64, f64)> = Vec::new();
        for (s, &p) in a.scenarios().iter().zip(a.probabilities()) {
            pts.push((s.coords()[0], p, 0.0));
        }
        for (s, &p) in b.scenarios().iter().zip(b.probabilities()) {
            pts.push((s.coords()[0], 0.0, p));
        }
        pts.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        let mut total = 0.0;
        let mut fa = 0.0;
        let mut fb = 0.0;
        for w in 0..pts.len() {
            if w > 0 {
                total += (fa - fb as f64).abs() * (pts[w].0 - pts[w - 1].0);
            }
            fa += pts[w].1;
            fb += pts[w].2;
        }
        total
    }

    #[test]
    fn one_variable_lower_bound() {
        let mut lp = LinearProgram::new(Direction::Minimize, vec![1.0]);
        lp.add_row(vec![1.0], Sense::Ge, 3.0);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_relative_eq!(sol.primal[0], 3.0, epsilon = 1e-9);
        assert_relative_eq!(sol.objective_value, 3.0, epsilon = 1e-9);
        assert_relative_eq!(sol.dual[0], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn two_variable_budget() {
        let mut lp = LinearProgram::new(Direction::Maximize, vec![1.0, 1.0]);
        lp.add_row(vec![1.0, 1.0], Sense::Le, 1.0);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_relative_eq!(sol.objective_value, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(Direction::Minimize, vec![1.0]);
        lp.add_row(vec![1.0], Sense::Le, -1.0);
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Infeasible);

        let lp2 = LinearProgram::new(Direction::Maximize, vec![1.0]);
        assert_eq!(solve_lp(&lp2).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn free_and_mirrored_variables() {
        // min x + y with x free (x = -2 optimal via x ≥ -2 row) and y ≤ 4.
        let mut lp = LinearProgram::new(Direction::Minimize, vec![1.0, -1.0]);
        lp.set_bounds(0, f64::NEG_INFINITY, f64::INFINITY);
        lp.set_bounds(1, f64::NEG_INFINITY, 4.0);
        lp.add_row(vec![1.0, 0.0], Sense::Ge, -2.0);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_relative_eq!(sol.primal[0], -2.0, epsilon = 1e-9);
        assert_relative_eq!(sol.primal[1], 4.0, epsilon = 1e-9);
        assert_relative_eq!(sol.objective_value, -6.0, epsilon = 1e-9);
    }

    #[test]
    fn finite_box_bounds_and_degenerate_rows() {
        // Redundant equality rows exercise the drive-out path.
        let mut lp = LinearProgram::new(Direction::Maximize, vec![2.0, 3.0]);
        lp.set_bounds(0, 0.0, 2.0);
        lp.set_bounds(1, 1.0, 3.0);
        lp.add_row(vec![1.0, 1.0], Sense::Eq, 4.0);
        lp.add_row(vec![2.0, 2.0], Sense::Eq, 8.0);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_relative_eq!(sol.primal[0], 1.0, epsilon = 1e-8);
        assert_relative_eq!(sol.primal[1], 3.0, epsilon = 1e-8);
    }

    #[test]
    fn strong_duality_on_random_programs() {
        let mut rng = crate::seed::rng(0x11, 0);
        for trial in 0..40 {
            let n = rng.gen_range(2..6);
            let m = rng.gen_range(1..5);
            // Construct around a known feasible point so the program is
            // feasible; box bounds keep it bounded.
            let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0)).collect();
            let mut lp = LinearProgram::new(
                Direction::Minimize,
                (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect(),
            );
            for j in 0..n {
                lp.set_bounds(j, 0.0, 5.0);
            }
            for _ in 0..m {
                let row: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let ax = linalg::dot(&row, &x0);
                match rng.gen_range(0..3) {
                    0 => lp.add_row(row, Sense::Le, ax + rng.gen_range(0.0..1.0)),
                    1 => lp.add_row(row, Sense::Ge, ax - rng.gen_range(0.0..1.0)),
                    _ => lp.add_row(row, Sense::Eq, ax),
                }
            }
            let sol = solve_lp(&lp).unwrap_or_else(|e| panic!("trial {trial}: {e}"));
            assert_eq!(sol.status, LpStatus::Optimal, "trial {trial}");
            // Dual objective: bᵀy plus bound terms recovered from the
            // residual reduced costs.
            let mut dual_obj = linalg::dot(&lp.rhs, &sol.dual);
            for j in 0..n {
                let reduced = lp.objective[j]
                    - (0..lp.rhs.len())
                        .map(|i| lp.constraint_matrix[i][j] * sol.dual[i])
                        .sum::<f64>();
                // At the optimum each variable sits on a bound unless its
                // reduced cost vanishes.
                if reduced > 0.0 {
                    dual_obj += reduced * lp.variable_bounds[j].0;
                } else {
                    dual_obj += reduced * lp.variable_bounds[j].1;
                }
            }
            let gap = (sol.objective_value - dual_obj).abs();
            assert!(
                gap <= 1e-7 * (1.0 + sol.objective_value.abs()),
                "trial {trial}: duality gap {gap}"
            );
        }
    }

    #[test]
    fn transport_of_identical_distributions_is_zero() {
        let d = dist_1d(&[0.0, 1.0, 2.5], &[0.2, 0.3, 0.5]);
        assert_relative_eq!(solve_transport(&d, &d).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn transport_between_point_masses_is_distance() {
        let a = EmpiricalDistribution::new(
            vec![Sample::new(vec![1.0, 2.0]).unwrap()],
            vec![1.0],
        )
        .unwrap();
        let b = EmpiricalDistribution::new(
            vec![Sample::new(vec![4.0, 6.0]).unwrap()],
            vec![1.0],
        )
        .unwrap();
        assert_relative_eq!(solve_transport(&a, &b).unwrap(), 5.0, epsilon = 1e-9);
    }

    #[test]
    fn transport_matches_sorted_quantile_example() {
        let a = dist_1d(&[0.0, 1.0], &[0.5, 0.5]);
        let b = dist_1d(&[0.5, 1.5], &[0.5, 0.5]);
        assert_relative_eq!(solve_transport(&a, &b).unwrap(), 0.5, epsilon = 1e-9);
    }

    #[test]
    fn transport_equals_quantile_oracle_on_random_pairs() {
        let mut rng = crate::seed::rng(0x11, 1);
        for _ in 0..100 {
            let n = rng.gen_range(2..6);
            let pa: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let pb: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let w = 1.0 / n as f64;
            let mut wa = vec![w; n];
            let mut wb = vec![w; n];
            *wa.last_mut().unwrap() = 1.0 - w * (n as f64 - 1.0);
            *wb.last_mut().unwrap() = 1.0 - w * (n as f64 - 1.0);
            let a = dist_1d(&pa, &wa);
            let b = dist_1d(&pb, &wb);
            let lp_val = solve_transport(&a, &b).unwrap();
            let oracle = quantile_w1(&a, &b);
            assert!(
                (lp_val - oracle).abs() <= 1e-9,
                "LP {lp_val} vs quantile {oracle}"
            );
        }
    }

    #[test]
    fn w1_is_a_metric_on_random_triples() {
        let mut rng = crate::seed::rng(0x11, 2);
        for _ in 0..50 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let n = rng.gen_range(2..4);
                let pts: Vec<Vec<f64>> = (0..n)
                    .map(|_| vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)])
                    .collect();
                let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
                let total: f64 = raw.iter().sum();
                let mut probs: Vec<f64> = raw.iter().map(|x| x / total).collect();
                let head: f64 = probs[..n - 1].iter().sum();
                probs[n - 1] = 1.0 - head;
                EmpiricalDistribution::new(
                    pts.into_iter().map(|p| Sample::new(p).unwrap()).collect(),
                    probs,
                )
                .unwrap()
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let c = mk(&mut rng);
            let ab = solve_transport(&a, &b).unwrap();
            let ba = solve_transport(&b, &a).unwrap();
            let bc = solve_transport(&b, &c).unwrap();
            let ac = solve_transport(&a, &c).unwrap();
            assert!((ab - ba).abs() <= 1e-9, "symmetry: {ab} vs {ba}");
            assert!(ac <= ab + bc + 1e-9, "triangle: {ac} > {ab} + {bc}");
            assert!(ab >= -1e-12);
        }
    }
}
