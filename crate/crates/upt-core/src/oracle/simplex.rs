//! Dense two-phase primal simplex for the small-to-moderate
//! equality-form programs produced by the extreme-point oracles.
//! Pricing is steepest-decrease (most negative reduced cost, ties by
//! lowest index); after a degenerate stall it permanently switches to
//! Bland's anti-cycling rule, so termination is guaranteed and identical
//! input yields an identical basis.

use crate::error::{Error, Result};
use crate::tol::{PIVOT_EPS, TOL_LP};

/// Equality-form linear program: minimize `objective . w` subject to
/// `constraints . w = rhs`, `w >= 0`.
#[derive(Clone, Debug)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub constraints: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub weights: Vec<f64>,
    pub objective_value: f64,
    pub basis: Vec<usize>,
    pub status: LpStatus,
}

/// Full tableau: `m` constraint rows over `n` structural plus `m`
/// artificial columns and the rhs, with a maintained cost row at the
/// bottom.
struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    n: usize,
    m: usize,
}

impl Tableau {
    fn width(&self) -> usize {
        self.n + self.m + 1
    }

    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.n + self.m]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let width = self.width();
        let factor = self.rows[row][col];
        for v in self.rows[row].iter_mut() {
            *v /= factor;
        }
        let (pivot_row, rest) = {
            let (a, b) = self.rows.split_at_mut(row);
            let (p, c) = b.split_first_mut().expect("pivot row exists");
            (p, (a, c))
        };
        for r in rest.0.iter_mut().chain(rest.1.iter_mut()) {
            let f = r[col];
            if f != 0.0 {
                for k in 0..width {
                    r[k] -= f * pivot_row[k];
                }
            }
        }
        if row < self.m {
            self.basis[row] = col;
        }
    }

    /// Installs `costs` into the bottom row, priced out over the basis.
    fn set_costs(&mut self, costs: &[f64]) {
        let width = self.width();
        let cost_row = self.m;
        for j in 0..self.n + self.m {
            self.rows[cost_row][j] = costs[j];
        }
        self.rows[cost_row][width - 1] = 0.0;
        for i in 0..self.m {
            let cb = costs[self.basis[i]];
            if cb != 0.0 {
                for k in 0..width {
                    self.rows[cost_row][k] -= cb * self.rows[i][k];
                }
            }
        }
    }

    /// Minimizes the installed cost row over the allowed columns.
    /// Returns false when unbounded.
    fn run_phase(&mut self, allow_artificial: bool) -> Result<bool> {
        let cost_row = self.m;
        let col_limit = if allow_artificial {
            self.n + self.m
        } else {
            self.n
        };
        let max_iters = 10_000 + 50 * (self.n + self.m);
        let stall_limit = 200;
        let mut bland = false;
        let mut stall = 0usize;
        let mut last_objective = f64::INFINITY;
        for _ in 0..max_iters {
            let entering = if bland {
                (0..col_limit).find(|&j| self.rows[cost_row][j] < -PIVOT_EPS)
            } else {
                let mut best: Option<(f64, usize)> = None;
                for j in 0..col_limit {
                    let c = self.rows[cost_row][j];
                    if c < -PIVOT_EPS && best.is_none_or(|(b, _)| c < b) {
                        best = Some((c, j));
                    }
                }
                best.map(|(_, j)| j)
            };
            let Some(col) = entering else {
                return Ok(true);
            };
            // ratio test; ties resolved by the smallest basic index
            let mut best: Option<(f64, usize, usize)> = None;
            for i in 0..self.m {
                let a = self.rows[i][col];
                if a > PIVOT_EPS {
                    let ratio = self.rhs(i) / a;
                    let key = (ratio, self.basis[i]);
                    match best {
                        Some((r, b, _)) if (key.0, key.1) >= (r, b) => {}
                        _ => best = Some((key.0, key.1, i)),
                    }
                }
            }
            let Some((_, _, row)) = best else {
                return Ok(false);
            };
            self.pivot(row, col);
            let objective = -self.rows[cost_row][self.width() - 1];
            if objective < last_objective - 1e-12 {
                stall = 0;
                last_objective = objective;
            } else {
                stall += 1;
                if stall >= stall_limit {
                    bland = true;
                }
            }
        }
        Err(Error::Invariant("simplex iteration limit exceeded".into()))
    }
}

pub fn simplex_solve(p: &LpProblem) -> Result<LpSolution> {
    simplex_solve_with(p, TOL_LP)
}

pub fn simplex_solve_with(p: &LpProblem, tau_lp: f64) -> Result<LpSolution> {
    let m = p.constraints.len();
    let n = p.objective.len();
    if p.rhs.len() != m {
        return Err(Error::DimensionMismatch {
            left: p.rhs.len(),
            right: m,
        });
    }
    for row in &p.constraints {
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                left: row.len(),
                right: n,
            });
        }
    }
    if m == 0 || n == 0 {
        return Err(Error::EmptyInput);
    }

    // canonicalize to rhs >= 0, attach one artificial per row, and leave
    // space for the cost row
    let mut rows = Vec::with_capacity(m + 1);
    for i in 0..m {
        let flip = p.rhs[i] < 0.0;
        let mut row = vec![0.0; n + m + 1];
        for j in 0..n {
            row[j] = if flip {
                -p.constraints[i][j]
            } else {
                p.constraints[i][j]
            };
        }
        row[n + i] = 1.0;
        row[n + m] = if flip { -p.rhs[i] } else { p.rhs[i] };
        rows.push(row);
    }
    rows.push(vec![0.0; n + m + 1]);
    let mut t = Tableau {
        rows,
        basis: (n..n + m).collect(),
        n,
        m,
    };

    // phase 1: drive the artificial mass to zero
    let mut phase1_costs = vec![0.0; n + m];
    for c in phase1_costs.iter_mut().skip(n) {
        *c = 1.0;
    }
    t.set_costs(&phase1_costs);
    let bounded = t.run_phase(true)?;
    debug_assert!(bounded, "phase 1 is bounded below by zero");
    let phase1_obj: f64 = t
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= n)
        .map(|(i, _)| t.rhs(i))
        .sum();
    if phase1_obj > tau_lp {
        return Ok(LpSolution {
            weights: vec![0.0; n],
            objective_value: 0.0,
            basis: vec![],
            status: LpStatus::Infeasible,
        });
    }
    // pivot lingering zero-level artificials out where possible;
    // rows with no structural pivot are redundant and stay inert
    for i in 0..m {
        if t.basis[i] >= n {
            if let Some(col) = (0..n).find(|&j| t.rows[i][j].abs() > PIVOT_EPS) {
                t.pivot(i, col);
            }
        }
    }

    // phase 2 over structural columns only
    let mut phase2_costs = vec![0.0; n + m];
    phase2_costs[..n].copy_from_slice(&p.objective);
    t.set_costs(&phase2_costs);
    let bounded = t.run_phase(false)?;
    if !bounded {
        return Ok(LpSolution {
            weights: vec![0.0; n],
            objective_value: f64::NEG_INFINITY,
            basis: vec![],
            status: LpStatus::Unbounded,
        });
    }

    let mut weights = vec![0.0; n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            let w = t.rhs(i);
            weights[b] = if w < 0.0 { 0.0 } else { w };
        }
    }
    // residual check against the original system
    for i in 0..m {
        let lhs: f64 = (0..n).map(|j| p.constraints[i][j] * weights[j]).sum();
        if (lhs - p.rhs[i]).abs() > tau_lp.max(1e3 * f64::EPSILON * m as f64) {
            return Err(Error::Invariant(format!(
                "simplex residual {} at row {i}",
                (lhs - p.rhs[i]).abs()
            )));
        }
    }
    let objective_value: f64 = (0..n).map(|j| p.objective[j] * weights[j]).sum();
    let mut basis: Vec<usize> = t.basis.iter().copied().filter(|&b| b < n).collect();
    basis.sort_unstable();
    Ok(LpSolution {
        weights,
        objective_value,
        basis,
        status: LpStatus::Optimal,
    })
}
