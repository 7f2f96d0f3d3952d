//! Trade-off curves in the full-observation model, built from partial
//! independence: merging all inputs outside a subset into one symbol,
//! running the perfect-privacy construction on the merged pair, and
//! lifting the kernel back to the original alphabet. Each subset yields
//! one achievable point whose leakage is known in closed form before the
//! construction runs.

use itertools::Itertools;

use crate::envelope::{TradeoffCurve, TradeoffPoint};
use crate::error::{Error, Result};
use crate::full::construct::perfect_privacy_mechanism;
use crate::full::bounds::perfect_privacy_lower_bound;
use crate::parallel::par_map;
use crate::prob::{
    entropy, evaluate_mechanism, joint_from, Channel, JointPmf, Mechanism, ObservationModel, Pmf,
};
use crate::tol::{TOL_EQ, TOL_NUM};

/// Default cap on exhaustive subset enumeration.
pub const DEFAULT_SUBSET_CAP: usize = 4096;

/// The merged variable built from a subset of inputs: symbols inside the
/// subset keep their identity, everything else collapses to one symbol.
#[derive(Clone, Debug)]
pub struct SubsetRestriction {
    /// Kept `x` indices, ascending.
    pub subset: Vec<usize>,
    /// Distribution of the merged variable; index 0 is the collapsed
    /// symbol, the rest follow `subset` order.
    pub z_pmf: Pmf,
    /// Conditional `p(Y|Z)` with the same row order.
    pub z_channel: Channel,
    /// `I(X;Y) - I(Z;Y)`: the leakage of the point this subset yields.
    pub leakage: f64,
    /// Upper bound on the slope toward the no-privacy corner; infinite
    /// when merging destroys all information.
    pub slope_bound: f64,
}

pub fn restrict_to_z(j: &JointPmf, subset: &[usize]) -> Result<SubsetRestriction> {
    let nx = j.nx();
    let mut subset: Vec<usize> = subset.to_vec();
    subset.sort_unstable();
    subset.dedup();
    if subset.iter().any(|&x| x >= nx) {
        return Err(Error::InvalidInput(format!(
            "subset index out of range for |X| = {nx}"
        )));
    }
    if nx < 2 || subset.len() > nx - 2 {
        return Err(Error::SubsetTooLarge {
            size: subset.len(),
            nx,
        });
    }
    let px = j.marginal_x();
    let rest_mass: f64 = (0..nx)
        .filter(|x| !subset.contains(x))
        .map(|x| px.get(x))
        .sum();
    let mut z_probs = vec![rest_mass];
    z_probs.extend(subset.iter().map(|&x| px.get(x)));
    let z_pmf = Pmf::validate(&z_probs)?;

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(subset.len() + 1);
    if rest_mass > 0.0 {
        let merged: Vec<f64> = (0..j.ny())
            .map(|y| {
                (0..nx)
                    .filter(|x| !subset.contains(x))
                    .map(|x| j.prob(x, y))
                    .sum::<f64>()
                    / rest_mass
            })
            .collect();
        rows.push(merged);
    } else {
        rows.push(vec![1.0 / j.ny() as f64; j.ny()]);
    }
    for &x in &subset {
        let row: Vec<f64> = if px.get(x) > 0.0 {
            (0..j.ny()).map(|y| j.prob(x, y) / px.get(x)).collect()
        } else {
            vec![1.0 / j.ny() as f64; j.ny()]
        };
        rows.push(row);
    }
    let z_channel = Channel::from_rows(rows)?;

    let ixy = j.mutual_information();
    let izy = joint_from(&z_pmf, &z_channel)?.mutual_information();
    let leakage = (ixy - izy).max(0.0);

    let hy = entropy(&j.marginal_y());
    let hz = entropy(&z_pmf);
    let live_z: Vec<usize> = z_pmf.support();
    let common: f64 = (0..j.ny())
        .map(|y| {
            live_z
                .iter()
                .map(|&z| z_channel.prob(z, y))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    let slope_bound = if izy <= TOL_NUM {
        f64::INFINITY
    } else {
        hy.min((1.0 - common) * hz.min((j.ny() as f64).log2())) / izy
    };
    Ok(SubsetRestriction {
        subset,
        z_pmf,
        z_channel,
        leakage,
        slope_bound,
    })
}

fn subset_tag(subset: &[usize]) -> String {
    format!("X'={{{}}}", subset.iter().map(|x| x.to_string()).join(","))
}

/// Lifts the merged-pair kernel back to the original alphabet: an input
/// inside the subset uses its own row, everything else uses the
/// collapsed row.
fn lift_mechanism(restriction: &SubsetRestriction, mech_z: &Mechanism, j: &JointPmf) -> Mechanism {
    let ny = j.ny();
    let nu = mech_z.n_outputs();
    let z_index = |x: usize| -> usize {
        match restriction.subset.iter().position(|&s| s == x) {
            Some(pos) => pos + 1,
            None => 0,
        }
    };
    let rows: Vec<Vec<f64>> = (0..j.nx() * ny)
        .map(|i| {
            let (x, y) = (i / ny, i % ny);
            mech_z.kernel.row(z_index(x) * ny + y).probs().to_vec()
        })
        .collect();
    let _ = nu;
    Mechanism::new(
        ObservationModel::FullObservation,
        Channel::from_rows(rows).expect("lifted rows are rows of a valid kernel"),
    )
}

/// Runs the perfect-privacy construction on the merged pair and
/// evaluates the lifted mechanism on the source.
pub fn curve_point_from_subset(j: &JointPmf, subset: &[usize]) -> Result<TradeoffPoint> {
    let restriction = restrict_to_z(j, subset)?;
    let (mech_z, _) = perfect_privacy_mechanism(&restriction.z_channel)?;
    let lifted = lift_mechanism(&restriction, &mech_z, j);
    let ev = evaluate_mechanism(j, &lifted)?;
    debug_assert!(
        (ev.leakage_bits - restriction.leakage).abs() <= 1e-9,
        "leakage mismatch: evaluated {} vs closed-form {}",
        ev.leakage_bits,
        restriction.leakage
    );
    Ok(TradeoffPoint::new(
        ev.leakage_bits,
        ev.utility_bits,
        subset_tag(&restriction.subset),
    ))
}

fn leftmost_point(j: &JointPmf) -> Result<TradeoffPoint> {
    let (ch, _) = j.condition_on_x();
    let (mech, _) = perfect_privacy_mechanism(&ch)?;
    let ev = evaluate_mechanism(j, &mech)?;
    Ok(TradeoffPoint::new(0.0, ev.utility_bits, "L"))
}

fn rightmost_point(j: &JointPmf) -> TradeoffPoint {
    TradeoffPoint::new(j.mutual_information(), entropy(&j.marginal_y()), "R")
}

fn all_subsets(nx: usize) -> Vec<Vec<usize>> {
    let mut subsets = Vec::new();
    for k in 1..=nx.saturating_sub(2) {
        for s in (0..nx).combinations(k) {
            subsets.push(s);
        }
    }
    subsets
}

fn check_subset_cap(nx: usize, cap: usize) -> Result<()> {
    let needed = (1u128 << nx)
        .saturating_sub(nx as u128)
        .saturating_sub(2);
    if needed > cap as u128 {
        return Err(Error::TooManySubsets { needed, cap });
    }
    Ok(())
}

/// One achievable point per subset of kept inputs (sizes 1 through
/// |X|-2), plus the perfect-privacy point and the no-privacy corner.
pub fn curve_full_exhaustive(j: &JointPmf, cap: usize) -> Result<TradeoffCurve> {
    check_subset_cap(j.nx(), cap)?;
    let subsets = all_subsets(j.nx());
    let results = par_map(subsets, |s| curve_point_from_subset(j, s));
    let mut points = Vec::with_capacity(results.len() + 2);
    for r in results {
        points.push(r?);
    }
    points.push(leftmost_point(j)?);
    points.push(rightmost_point(j));
    TradeoffCurve::from_points(points)
}

/// The nested chain of kept-input sets chosen by minimizing the slope
/// bound at each step (ties by lowest index).
pub(crate) fn greedy_chain(j: &JointPmf) -> Result<Vec<Vec<usize>>> {
    let nx = j.nx();
    let mut chain: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    for _ in 1..=nx.saturating_sub(2) {
        let mut best: Option<(f64, usize)> = None;
        for x in 0..nx {
            if current.contains(&x) {
                continue;
            }
            let mut candidate = current.clone();
            candidate.push(x);
            let r = restrict_to_z(j, &candidate)?;
            if best.is_none_or(|(b, _)| r.slope_bound < b) {
                best = Some((r.slope_bound, x));
            }
        }
        let (_, x) = best.expect("nx - 2 candidates remain");
        current.push(x);
        current.sort_unstable();
        chain.push(current.clone());
    }
    Ok(chain)
}

/// Simplified curve: walks the greedy chain instead of all subsets,
/// stopping once the previous merged variable already carries all the
/// information of `X` about `Y`.
pub fn curve_full_greedy(j: &JointPmf) -> Result<TradeoffCurve> {
    let ixy = j.mutual_information();
    let mut points = vec![leftmost_point(j)?, rightmost_point(j)];
    let mut izy_prev = 0.0; // the empty merge is constant
    for subset in greedy_chain(j)? {
        if (ixy - izy_prev).abs() <= 1e-9 {
            break;
        }
        let restriction = restrict_to_z(j, &subset)?;
        points.push(curve_point_from_subset(j, &subset)?);
        izy_prev = ixy - restriction.leakage;
    }
    TradeoffCurve::from_points(points)
}

/// Subset family used by the closed-form curve variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveMode {
    Exhaustive,
    Greedy,
}

/// Same leakage coordinates as the corresponding curve, with utilities
/// replaced by the closed-form lower bound of the merged pair, so no
/// construction needs to run.
pub fn curve_full_nonalgorithmic(j: &JointPmf, mode: CurveMode, cap: usize) -> Result<TradeoffCurve> {
    let subsets = match mode {
        CurveMode::Exhaustive => {
            check_subset_cap(j.nx(), cap)?;
            all_subsets(j.nx())
        }
        CurveMode::Greedy => greedy_chain(j)?,
    };
    let ixy = j.mutual_information();
    let hy = entropy(&j.marginal_y());
    let log_ny = (j.ny() as f64).log2();
    let mut points = Vec::with_capacity(subsets.len() + 2);
    let mut izy_prev = 0.0;
    for subset in subsets {
        if mode == CurveMode::Greedy && (ixy - izy_prev).abs() <= 1e-9 {
            break;
        }
        let r = restrict_to_z(j, &subset)?;
        let live_z: Vec<usize> = r.z_pmf.support();
        let common: f64 = (0..j.ny())
            .map(|y| {
                live_z
                    .iter()
                    .map(|&z| r.z_channel.prob(z, y))
                    .fold(f64::INFINITY, f64::min)
            })
            .sum();
        let hz = entropy(&r.z_pmf);
        let utility = (hy - (1.0 - common) * hz.min(log_ny)).max(0.0);
        points.push(TradeoffPoint::new(r.leakage, utility, subset_tag(&r.subset)));
        izy_prev = ixy - r.leakage;
    }
    points.push(TradeoffPoint::new(0.0, perfect_privacy_lower_bound(j), "L~"));
    points.push(rightmost_point(j));
    TradeoffCurve::from_points(points)
}

/// Number of inputs whose release posterior matches the prior
/// everywhere.
pub fn independence_level(joint_xu: &JointPmf) -> usize {
    let px = joint_xu.marginal_x();
    let pu = joint_xu.marginal_y();
    (0..joint_xu.nx())
        .filter(|&x| {
            px.get(x) > 0.0
                && (0..joint_xu.ny()).all(|u| {
                    (joint_xu.prob(x, u) / px.get(x) - pu.get(u)).abs() <= TOL_EQ
                })
        })
        .count()
}

/// Whether at least `k` input symbols keep their prior under every
/// release symbol.
pub fn verify_k_independence(joint_xu: &JointPmf, k: usize) -> bool {
    independence_level(joint_xu) >= k
}
