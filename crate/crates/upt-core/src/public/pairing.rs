//! Perfect-privacy mechanism from public data alone, for binary `X`.
//!
//! Outputs whose posterior already equals the prior map to their own
//! release symbol deterministically. The rest split into a low side
//! (posterior below the prior) and a high side (above); each iteration
//! pairs the lowest-posterior live symbol on the low side with the
//! lowest-posterior live symbol on the high side and mixes them with
//! the unique weight that restores the prior, filling at least one of
//! the two remaining masses. The released alphabet never exceeds
//! `|Y| - 1` when no posterior matches the prior.

use crate::error::{Error, Result};
use crate::prob::{Channel, JointPmf, Mechanism, ObservationModel};
use crate::tol::{TOL_EQ, TOL_PMF};

#[derive(Clone, Debug)]
pub struct PairingTrace {
    /// Outputs whose posterior equals the prior (mapped deterministically).
    pub deterministic_set: Vec<usize>,
    /// Outputs with posterior below the prior.
    pub low_set: Vec<usize>,
    /// Outputs with posterior above the prior.
    pub high_set: Vec<usize>,
    /// Per-iteration pair `(y_low, y_high)` and its mixing weight.
    pub mix_weights: Vec<((usize, usize), f64)>,
    /// Water levels before each iteration and after the last one.
    pub water_levels: Vec<Vec<f64>>,
    pub iterations: usize,
    /// Set when one side ran dry with sub-tolerance residue left on the
    /// other, which exact arithmetic rules out.
    pub drift_flagged: bool,
}

pub fn perfect_privacy_mechanism(j: &JointPmf) -> Result<(Mechanism, PairingTrace)> {
    perfect_privacy_mechanism_with(j, TOL_EQ)
}

pub fn perfect_privacy_mechanism_with(j: &JointPmf, tau_eq: f64) -> Result<(Mechanism, PairingTrace)> {
    if j.nx() != 2 {
        return Err(Error::WrongAlphabetSize {
            expected: "|X| = 2".into(),
            got: j.nx(),
        });
    }
    let ny = j.ny();
    let py = j.marginal_y();
    let px0 = j.marginal_x().get(0);
    let posterior = |y: usize| j.prob(0, y) / py.get(y);

    let mut deterministic = Vec::new();
    let mut low = Vec::new();
    let mut high = Vec::new();
    for y in 0..ny {
        if py.get(y) <= 0.0 {
            continue;
        }
        let q = posterior(y);
        if (q - px0).abs() <= tau_eq {
            deterministic.push(y);
        } else if q < px0 {
            low.push(y);
        } else {
            high.push(y);
        }
    }

    let mut kernel: Vec<Vec<f64>> = vec![Vec::new(); ny];
    let mut n_u = 0usize;
    // deterministic symbols first
    for &y in &deterministic {
        for (row_y, row) in kernel.iter_mut().enumerate() {
            row.resize(n_u + 1, 0.0);
            if row_y == y {
                row[n_u] = 1.0;
            }
        }
        n_u += 1;
    }

    let snap = |v: f64| if v.abs() < TOL_PMF { 0.0 } else { v };
    let mut water: Vec<f64> = (0..ny)
        .map(|y| {
            if low.contains(&y) || high.contains(&y) {
                py.get(y)
            } else {
                0.0
            }
        })
        .collect();
    let mut trace = PairingTrace {
        deterministic_set: deterministic.clone(),
        low_set: low.clone(),
        high_set: high.clone(),
        mix_weights: Vec::new(),
        water_levels: vec![water.clone()],
        iterations: 0,
        drift_flagged: false,
    };

    while water.iter().any(|&a| a > 0.0) {
        let pick = |side: &[usize]| -> Option<usize> {
            side.iter()
                .copied()
                .filter(|&y| water[y] > 0.0)
                .min_by(|&a, &b| posterior(a).partial_cmp(&posterior(b)).expect("finite"))
        };
        let (Some(y0), Some(y1)) = (pick(&low), pick(&high)) else {
            // one side exhausted: only float residue may remain
            let residue: f64 = water.iter().sum();
            if residue < 10.0 * TOL_PMF {
                trace.drift_flagged = true;
                break;
            }
            return Err(Error::Invariant(format!(
                "one posterior side exhausted with residue {residue}"
            )));
        };
        let f = (posterior(y1) - px0) / (posterior(y1) - posterior(y0));
        debug_assert!(f > 0.0 && f < 1.0);
        let fill_low = water[y0] / f;
        let fill_high = water[y1] / (1.0 - f);
        let pu = fill_low.min(fill_high);
        if fill_low <= fill_high {
            water[y0] = 0.0;
            water[y1] = snap(water[y1] - pu * (1.0 - f));
        } else {
            water[y1] = 0.0;
            water[y0] = snap(water[y0] - pu * f);
        }
        for (row_y, row) in kernel.iter_mut().enumerate() {
            row.resize(n_u + 1, 0.0);
            if row_y == y0 {
                row[n_u] = f * pu / py.get(y0);
            } else if row_y == y1 {
                row[n_u] = (1.0 - f) * pu / py.get(y1);
            }
        }
        n_u += 1;
        trace.mix_weights.push(((y0, y1), f));
        trace.water_levels.push(water.clone());
        trace.iterations += 1;
    }

    let n_u = n_u.max(1);
    let rows: Vec<Vec<f64>> = kernel
        .into_iter()
        .map(|mut row| {
            row.resize(n_u, 0.0);
            let s: f64 = row.iter().sum();
            if s <= 0.0 {
                // zero-probability output symbol: canonical point mass
                row[0] = 1.0;
            } else if (s - 1.0).abs() > 1e-12 {
                for v in row.iter_mut() {
                    *v /= s;
                }
            }
            row
        })
        .collect();
    let mechanism = Mechanism::new(ObservationModel::PublicObservation, Channel::from_rows(rows)?);
    Ok((mechanism, trace))
}

/// Closed-form lower bound on the utility achieved by the construction:
/// `(H(Y) - (1 - sum_{y in B} p(y)) h_max)^+` where `h_max` is the
/// largest binary entropy of a mixing weight over all low/high pairs
/// (every release symbol built by an iteration mixes one such pair, so
/// its conditional entropy is at most `h_max`).
pub fn pairing_utility_bound(trace: &PairingTrace, j: &JointPmf) -> f64 {
    let py = j.marginal_y();
    let hy = crate::prob::entropy(&py);
    let px0 = j.marginal_x().get(0);
    let posterior = |y: usize| j.prob(0, y) / py.get(y);
    let det_mass: f64 = trace.deterministic_set.iter().map(|&y| py.get(y)).sum();
    let mut h_max: f64 = 0.0;
    for &y0 in &trace.low_set {
        for &y1 in &trace.high_set {
            let f = (posterior(y1) - px0) / (posterior(y1) - posterior(y0));
            let hb = crate::prob::binary_entropy(f.clamp(0.0, 1.0)).expect("weight in range");
            h_max = h_max.max(hb);
        }
    }
    (hy - (1.0 - det_mass) * h_max).max(0.0)
}
