//! Exact perfect-privacy values on small instances: the optimum release
//! concentrates on extreme points of a polytope, so the value reduces to
//! allocating weights over the enumerated vertices — a linear program
//! solved by the dense simplex. These oracles double as the independent
//! check for the constructive algorithms and closed forms.

pub mod linalg;
mod extreme;
mod simplex;

pub use extreme::{
    enumerate_extreme_full, enumerate_extreme_public, ExtremePointSet, FullVertex, PublicVertex,
    DEFAULT_FULL_CAP, DEFAULT_PUBLIC_CAP,
};
pub use simplex::{simplex_solve, simplex_solve_with, LpProblem, LpSolution, LpStatus};

use crate::error::{Error, Result};
use crate::prob::{entropy, Channel, JointPmf, Mechanism, ObservationModel};
use crate::tol::TOL_LP;

/// Result of an exact perfect-privacy computation.
#[derive(Clone, Debug)]
pub struct OracleSolution {
    /// The exact optimum utility at zero leakage, in bits.
    pub value_bits: f64,
    /// An optimal mechanism assembled from the active vertices.
    pub mechanism: Mechanism,
    /// Vertex weights in enumeration order (the optimal `p_U` over
    /// candidates).
    pub weights: Vec<f64>,
    pub vertex_count: usize,
    /// Indices of vertices carrying positive weight.
    pub active_vertices: Vec<usize>,
}

fn canonical_row(nu: usize) -> Vec<f64> {
    let mut row = vec![0.0; nu];
    row[0] = 1.0;
    row
}

fn normalize_rows(mut rows: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    for row in &mut rows {
        let s: f64 = row.iter().sum();
        if s > 0.0 && (s - 1.0).abs() > 1e-15 {
            for v in row.iter_mut() {
                *v /= s;
            }
        }
    }
    rows
}

/// Exact `G_0`: minimizes `H(Y|U)` over weightings of the full-model
/// extreme points subject to reproducing the source distribution.
pub fn exact_perfect_privacy_full(j: &JointPmf, cap: usize) -> Result<OracleSolution> {
    exact_perfect_privacy_full_with(j, cap, TOL_LP)
}

pub fn exact_perfect_privacy_full_with(j: &JointPmf, cap: usize, tau_lp: f64) -> Result<OracleSolution> {
    let set = enumerate_extreme_full(j, cap)?;
    let ExtremePointSet::Full { live_x, vertices } = set else {
        unreachable!("full enumeration returns full set")
    };
    let px = j.marginal_x();
    let supp = j.support();
    // one constraint per supported pair: the weights of vertices
    // selecting y at x must sum to p(y|x)
    let mut constraints = vec![vec![0.0; vertices.len()]; supp.len()];
    let mut rhs = vec![0.0; supp.len()];
    for (row, &(x, y)) in supp.iter().enumerate() {
        rhs[row] = j.prob(x, y) / px.get(x);
        let xi = live_x.iter().position(|&v| v == x).expect("supported x is live");
        for (col, vertex) in vertices.iter().enumerate() {
            if vertex.y_choice[xi] == y {
                constraints[row][col] = 1.0;
            }
        }
    }
    let problem = LpProblem {
        objective: vertices.iter().map(|v| v.cond_entropy).collect(),
        constraints,
        rhs,
    };
    let solution = simplex_solve_with(&problem, tau_lp)?;
    match solution.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(Error::LpInfeasible),
        LpStatus::Unbounded => {
            return Err(Error::Invariant("weight allocation cannot be unbounded".into()))
        }
    }
    let active: Vec<usize> = (0..vertices.len())
        .filter(|&v| solution.weights[v] > tau_lp)
        .collect();
    // forward kernel over supported pairs: p(u|x,y) = w_u / p(y|x) when
    // the vertex links x to y
    let nu = active.len().max(1);
    let mut rows = vec![canonical_row(nu); j.nx() * j.ny()];
    for &(x, y) in &supp {
        let xi = live_x.iter().position(|&v| v == x).expect("supported x is live");
        let pyx = j.prob(x, y) / px.get(x);
        let mut row = vec![0.0; nu];
        for (slot, &v) in active.iter().enumerate() {
            if vertices[v].y_choice[xi] == y {
                row[slot] = solution.weights[v] / pyx;
            }
        }
        rows[x * j.ny() + y] = row;
    }
    let kernel = Channel::from_rows(normalize_rows(rows))?;
    let value_bits = (entropy(&j.marginal_y()) - solution.objective_value).max(0.0);
    Ok(OracleSolution {
        value_bits,
        mechanism: Mechanism::new(ObservationModel::FullObservation, kernel),
        weights: solution.weights,
        vertex_count: vertices.len(),
        active_vertices: active,
    })
}

/// Exact `g_0`: minimizes `H(Y|U)` over weightings of the public-model
/// polytope vertices subject to reproducing `p_Y`.
pub fn exact_perfect_privacy_public(j: &JointPmf, cap: usize) -> Result<OracleSolution> {
    exact_perfect_privacy_public_with(j, cap, TOL_LP)
}

pub fn exact_perfect_privacy_public_with(j: &JointPmf, cap: usize, tau_lp: f64) -> Result<OracleSolution> {
    let set = enumerate_extreme_public(j, cap)?;
    let ExtremePointSet::Public { vertices, .. } = set else {
        unreachable!("public enumeration returns public set")
    };
    if vertices.is_empty() {
        return Err(Error::LpInfeasible);
    }
    let py = j.marginal_y();
    let constraints: Vec<Vec<f64>> = (0..j.ny())
        .map(|y| vertices.iter().map(|v| v.q[y]).collect())
        .collect();
    let problem = LpProblem {
        objective: vertices.iter().map(|v| v.cond_entropy).collect(),
        constraints,
        rhs: py.probs().to_vec(),
    };
    let solution = simplex_solve_with(&problem, tau_lp)?;
    match solution.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(Error::LpInfeasible),
        LpStatus::Unbounded => {
            return Err(Error::Invariant("weight allocation cannot be unbounded".into()))
        }
    }
    let active: Vec<usize> = (0..vertices.len())
        .filter(|&v| solution.weights[v] > tau_lp)
        .collect();
    let nu = active.len().max(1);
    // forward kernel p(u|y) = w_u q_u(y) / p(y)
    let mut rows = vec![canonical_row(nu); j.ny()];
    for y in 0..j.ny() {
        if py.get(y) > 0.0 {
            let mut row = vec![0.0; nu];
            for (slot, &v) in active.iter().enumerate() {
                row[slot] = solution.weights[v] * vertices[v].q[y] / py.get(y);
            }
            rows[y] = row;
        }
    }
    let kernel = Channel::from_rows(normalize_rows(rows))?;
    let value_bits = (entropy(&py) - solution.objective_value).max(0.0);
    Ok(OracleSolution {
        value_bits,
        mechanism: Mechanism::new(ObservationModel::PublicObservation, kernel),
        weights: solution.weights,
        vertex_count: vertices.len(),
        active_vertices: active,
    })
}

/// The oracle report document.
pub fn oracle_report_json(model: &str, sol: &OracleSolution, j: &JointPmf) -> String {
    let mechanism_doc: serde_json::Value = serde_json::from_str(
        &crate::prob::io::mechanism_to_json(&sol.mechanism, &j.support(), j.ny()),
    )
    .expect("mechanism doc is valid json");
    serde_json::to_string_pretty(&serde_json::json!({
        "model": model,
        "value_bits": sol.value_bits,
        "vertex_count": sol.vertex_count,
        "active_vertices": sol.active_vertices,
        "mechanism": mechanism_doc,
    }))
    .expect("report serializes")
}
