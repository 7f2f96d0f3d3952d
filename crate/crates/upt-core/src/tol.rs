//! Numerical tolerances used across the crate.

/// Distribution validation: entries this close to zero are clamped and a
/// pmf may deviate from total mass 1 by at most this much.
pub const TOL_PMF: f64 = 1e-9;

/// Clamp window for tiny negative information values produced by
/// floating-point cancellation.
pub const TOL_NUM: f64 = 1e-12;

/// Real-number equality tests on probabilities (posterior vs. prior
/// classification, vertex deduplication).
pub const TOL_EQ: f64 = 1e-9;

/// Feasibility and residual tests in the simplex solver.
pub const TOL_LP: f64 = 1e-9;

/// Pivot eligibility threshold in the simplex solver.
pub const PIVOT_EPS: f64 = 1e-11;

/// Default relative tolerance for numerical rank computation.
pub const TOL_RANK: f64 = 1e-8;

/// Runtime-adjustable tolerances. Library entry points that honor
/// CLI overrides take one of these; everything else uses the constants.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    pub pmf: f64,
    pub eq: f64,
    pub lp: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            pmf: TOL_PMF,
            eq: TOL_EQ,
            lp: TOL_LP,
        }
    }
}
