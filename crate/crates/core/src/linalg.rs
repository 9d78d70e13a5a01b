//! Dense vector/matrix helpers shared across the crate.
//!
//! Everything here is plain `Vec<f64>` arithmetic: problem sizes are desk
//! scale (dimensions ≤ ~100, a few thousand LP columns) and explicit loops
//! keep evaluation order, and therefore results, deterministic.

/// Dot product. Panics on length mismatch (caller validates dimensions).
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "dot: length mismatch");
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm.
pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// ℓ1 norm.
pub fn norm1(a: &[f64]) -> f64 {
    a.iter().map(|x| x.abs()).sum()
}

/// ℓ∞ norm.
pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Euclidean distance between two vectors of equal length.
pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "dist2: length mismatch");
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// `a - b`.
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    assert_eq!(a.len(), b.len(), "sub: length mismatch");
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `a + s * b`.
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    assert_eq!(a.len(), b.len(), "axpy: length mismatch");
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

/// `m * v` for a dense row-major matrix.
pub fn matvec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

/// `mᵀ * v` for a dense row-major matrix.
pub fn matvec_t(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    assert_eq!(m.len(), v.len(), "matvec_t: length mismatch");
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    let mut out = vec![0.0; cols];
    for (row, &vi) in m.iter().zip(v) {
        for (o, &mij) in out.iter_mut().zip(row) {
            *o += vi * mij;
        }
    }
    out
}

/// Spectral norm ‖M‖₂ of a dense matrix via power iteration on MᵀM.
///
/// Deterministic: starts from the normalized all-ones vector (falling back to
/// unit basis vectors if that lies in the kernel) and iterates to a fixed
/// relative tolerance. For the small, well-separated matrices used in this
/// crate the iteration converges far below 1e-12.
pub fn spectral_norm(m: &[Vec<f64>]) -> f64 {
    if m.is_empty() || m[0].is_empty() {
        return 0.0;
    }
    let cols = m[0].len();
    let starts: Vec<Vec<f64>> = std::iter::once(vec![1.0; cols])
        .chain((0..cols).map(|i| {
            let mut e = vec![0.0; cols];
            e[i] = 1.0;
            e
        }))
        .collect();
    let mut best = 0.0f64;
    for start in starts {
        let mut v = start;
        let n = norm2(&v);
        if n == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= n);
        let mut sigma = 0.0f64;
        for _ in 0..2000 {
            let mv = matvec(m, &v);
            let mtmv = matvec_t(m, &mv);
            let n = norm2(&mtmv);
            if n == 0.0 {
                sigma = 0.0;
                break;
            }
            let new_sigma = norm2(&mv);
            v = mtmv.iter().map(|x| x / n).collect();
            if (new_sigma - sigma).abs() <= 1e-15 * (1.0 + new_sigma) {
                sigma = new_sigma;
                break;
            }
            sigma = new_sigma;
        }
        best = best.max(sigma);
    }
    best
}

/// Largest eigenvalue of a symmetric matrix (power iteration on A itself,
/// valid because A is assumed positive semidefinite by callers).
pub fn sym_eig_max(a: &[Vec<f64>]) -> f64 {
    spectral_norm(a)
}

/// Smallest eigenvalue of a symmetric PSD matrix, via the shift
/// λ_min(A) = s − λ_max(sI − A) with s = λ_max(A).
pub fn sym_psd_eig_min(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    if n == 0 {
        return 0.0;
    }
    let s = sym_eig_max(a);
    let shifted: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { s - a[i][j] } else { -a[i][j] })
                .collect()
        })
        .collect();
    (s - sym_eig_max(&shifted)).max(0.0)
}

/// Solve the square system `a x = b` by LU with partial pivoting.
///
/// Returns `None` if the matrix is numerically singular. Used for basis
/// solves when certifying LP optimality; sizes are small (≤ a few hundred).
pub fn lu_solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = a.len();
    assert_eq!(b.len(), n, "lu_solve: shape mismatch");
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut x: Vec<f64> = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let (pivot_row, pivot_val) = (col..n)
            .map(|r| (r, m[r][col].abs()))
            .fold((col, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if pivot_val < 1e-13 {
            return None;
        }
        m.swap(col, pivot_row);
        x.swap(col, pivot_row);
        perm.swap(col, pivot_row);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            if f != 0.0 {
                for c in col..n {
                    m[r][c] -= f * m[col][c];
                }
                x[r] -= f * x[col];
            }
        }
    }
    for col in (0..n).rev() {
        x[col] /= m[col][col];
        for r in 0..col {
            x[r] -= m[r][col] * x[col];
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn spectral_norm_diagonal() {
        let m = vec![vec![2.0, 0.0], vec![0.0, 1.0]];
        assert_relative_eq!(spectral_norm(&m), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn spectral_norm_nilpotent() {
        // Non-symmetric: eigenvalues are 0 but the singular value is 2.
        let m = vec![vec![0.0, 2.0], vec![0.0, 0.0]];
        assert_relative_eq!(spectral_norm(&m), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn psd_extreme_eigenvalues() {
        let a = vec![vec![3.0, 1.0], vec![1.0, 3.0]];
        assert_relative_eq!(sym_eig_max(&a), 4.0, max_relative = 1e-10);
        assert_relative_eq!(sym_psd_eig_min(&a), 2.0, max_relative = 1e-10);
    }

    #[test]
    fn lu_solves_small_system() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let x = lu_solve(&a, &[5.0, 10.0]).unwrap();
        assert_relative_eq!(x[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(x[1], 3.0, epsilon = 1e-12);
    }
}
