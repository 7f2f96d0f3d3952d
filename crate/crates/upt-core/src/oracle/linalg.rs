//! Small dense linear-algebra helpers shared by the oracles.

/// Outcome of solving a (possibly overdetermined) linear system.
#[derive(Clone, Debug, PartialEq)]
pub enum SolveOutcome {
    Unique(Vec<f64>),
    RankDeficient,
    Inconsistent,
}

/// Solves `a x = b` for an m x k matrix with m >= k by Gaussian
/// elimination with partial pivoting. Returns the unique solution when
/// `a` has full column rank and the system is consistent within `tol`.
pub fn solve_exact(a: &[Vec<f64>], b: &[f64], tol: f64) -> SolveOutcome {
    let m = a.len();
    let k = if m == 0 { 0 } else { a[0].len() };
    if k == 0 || m < k {
        return SolveOutcome::RankDeficient;
    }
    let mut aug: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let mut row = a[i].clone();
            row.push(b[i]);
            row
        })
        .collect();
    let scale = aug
        .iter()
        .flat_map(|r| r.iter().map(|v| v.abs()))
        .fold(0.0_f64, f64::max)
        .max(1.0);
    for col in 0..k {
        let (best_row, best_val) = (col..m)
            .map(|r| (r, aug[r][col].abs()))
            .fold((col, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best_val <= tol * scale {
            return SolveOutcome::RankDeficient;
        }
        aug.swap(col, best_row);
        for r in 0..m {
            if r != col {
                let f = aug[r][col] / aug[col][col];
                if f != 0.0 {
                    for c in col..=k {
                        aug[r][c] -= f * aug[col][c];
                    }
                }
            }
        }
    }
    // remaining rows must have vanished for the system to be consistent
    for row in aug.iter().take(m).skip(k) {
        if row[k].abs() > tol * scale.max(1.0) {
            return SolveOutcome::Inconsistent;
        }
    }
    let x: Vec<f64> = (0..k).map(|i| aug[i][k] / aug[i][i]).collect();
    // verify against the original system
    for i in 0..m {
        let lhs: f64 = (0..k).map(|j| a[i][j] * x[j]).sum();
        if (lhs - b[i]).abs() > tol * scale.max(1.0) * 10.0 {
            return SolveOutcome::Inconsistent;
        }
    }
    SolveOutcome::Unique(x)
}

/// Convenience wrapper returning `Some` only for a unique solution.
pub fn solve_full_column_rank(a: &[Vec<f64>], b: &[f64], tol: f64) -> Option<Vec<f64>> {
    match solve_exact(a, b, tol) {
        SolveOutcome::Unique(x) => Some(x),
        _ => None,
    }
}

/// Rank of a dense matrix by Gaussian elimination with partial pivoting;
/// pivots below `tol` relative to the largest encountered pivot count as
/// zero.
pub fn matrix_rank(rows: &[Vec<f64>], tol: f64) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    let m = rows.len();
    let n = rows[0].len();
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let mut rank = 0;
    let mut first_pivot = 0.0_f64;
    let mut col = 0;
    while rank < m && col < n {
        let (best_row, best_val) = (rank..m)
            .map(|r| (r, a[r][col].abs()))
            .fold((rank, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if first_pivot == 0.0 {
            first_pivot = best_val;
        }
        if best_val <= tol * first_pivot.max(1.0) {
            col += 1;
            continue;
        }
        a.swap(rank, best_row);
        for r in (rank + 1)..m {
            let factor = a[r][col] / a[rank][col];
            if factor != 0.0 {
                for c in col..n {
                    a[r][c] -= factor * a[rank][c];
                }
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}
