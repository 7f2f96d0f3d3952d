//! Trade-off curves in the public-observation model: privacy is added
//! one input symbol at a time by making its binary indicator independent
//! of the release. Each stage applies the binary construction to the
//! pair (indicator, previous release) and chains the kernels, so
//! `X - Y - U_{i-1} - U_i` stays Markov and the independence level grows
//! with every stage.

use itertools::Itertools;

use crate::envelope::{TradeoffCurve, TradeoffPoint};
use crate::error::{Error, Result};
use crate::oracle::linalg::matrix_rank;
use crate::prob::{
    compose_mechanisms, entropy, evaluate_mechanism, Channel, JointPmf, Mechanism,
};
use crate::public::pairing::{perfect_privacy_mechanism, PairingTrace};
use crate::tol::{TOL_NUM, TOL_RANK};

/// Default cap on exhaustive ordering enumeration.
pub const DEFAULT_ORDERING_CAP: usize = 720;

/// One stage of an indicator chain.
#[derive(Clone, Debug)]
pub struct Stage {
    /// The input symbol whose indicator this stage makes independent.
    pub x_symbol: usize,
    /// Kernel from the previous release alphabet to the new one.
    pub stage_channel: Channel,
    /// The chained release `Y -> U_i`.
    pub composed: Mechanism,
    pub point: TradeoffPoint,
    pub trace: PairingTrace,
}

/// A full ordering of stages and the mechanisms it produced.
#[derive(Clone, Debug)]
pub struct OrderingPlan {
    pub ordering: Vec<usize>,
    pub stages: Vec<Stage>,
}

/// Joint distribution of the indicator `1{X = x}` (second row) and the
/// current release.
pub fn indicator_release_joint(j: &JointPmf, prev: &Mechanism, x: usize) -> Result<JointPmf> {
    let ev = evaluate_mechanism(j, prev)?;
    let nu = prev.n_outputs();
    let mut rows = vec![vec![0.0; nu]; 2];
    for y in 0..j.ny() {
        for u in 0..nu {
            let mass = ev.joint_xyu.prob(x, y, u);
            let total: f64 = (0..j.nx()).map(|xx| ev.joint_xyu.prob(xx, y, u)).sum();
            rows[0][u] += total - mass;
            rows[1][u] += mass;
        }
    }
    JointPmf::validate(rows)
}

/// Runs one stage: builds the indicator/release pair, applies the binary
/// construction to it, and chains the kernel onto the previous release.
/// Verifies the stage bounds: utility drops at most one bit and leakage
/// drops at least the indicator's information about the release.
pub fn curve_public_stage(
    j: &JointPmf,
    prev: &Mechanism,
    used: &[usize],
    x_i: usize,
) -> Result<Stage> {
    if used.contains(&x_i) {
        return Err(Error::SymbolReused { index: x_i });
    }
    if x_i >= j.nx() {
        return Err(Error::InvalidInput(format!(
            "symbol {x_i} outside alphabet of size {}",
            j.nx()
        )));
    }
    let prev_ev = evaluate_mechanism(j, prev)?;
    let indicator = indicator_release_joint(j, prev, x_i)?;
    let indicator_info = indicator.mutual_information();
    let (stage_mech, trace) = perfect_privacy_mechanism(&indicator)?;
    let stage_channel = stage_mech.kernel.clone();
    let composed = compose_mechanisms(prev, &stage_channel)?;
    let ev = evaluate_mechanism(j, &composed)?;
    if ev.utility_bits < prev_ev.utility_bits - 1.0 - 1e-9 {
        return Err(Error::Invariant(format!(
            "stage utility drop {} exceeds one bit",
            prev_ev.utility_bits - ev.utility_bits
        )));
    }
    if ev.leakage_bits > prev_ev.leakage_bits - indicator_info + 1e-9 {
        return Err(Error::Invariant(format!(
            "stage leakage {} above bound {}",
            ev.leakage_bits,
            prev_ev.leakage_bits - indicator_info
        )));
    }
    let point = TradeoffPoint::new(ev.leakage_bits, ev.utility_bits, format!("x={x_i}"));
    Ok(Stage {
        x_symbol: x_i,
        stage_channel,
        composed,
        point,
        trace,
    })
}

fn run_ordering(j: &JointPmf, ordering: &[usize]) -> Result<OrderingPlan> {
    let mut prev = Mechanism::identity_public(j.ny());
    let mut used: Vec<usize> = Vec::new();
    let mut stages = Vec::new();
    for &x in ordering {
        if evaluate_mechanism(j, &prev)?.leakage_bits <= TOL_NUM {
            break;
        }
        let stage = curve_public_stage(j, &prev, &used, x)?;
        prev = stage.composed.clone();
        used.push(x);
        stages.push(stage);
    }
    Ok(OrderingPlan {
        ordering: ordering.to_vec(),
        stages,
    })
}

fn rightmost_point(j: &JointPmf) -> TradeoffPoint {
    TradeoffPoint::new(j.mutual_information(), entropy(&j.marginal_y()), "R")
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Runs every ordered `(|X|-1)`-tuple of distinct input symbols and
/// collects all stage points; the envelope of those points plus the
/// no-privacy corner is the curve.
pub fn curve_public_exhaustive(
    j: &JointPmf,
    cap: usize,
) -> Result<(TradeoffCurve, Vec<OrderingPlan>)> {
    let nx = j.nx();
    if nx < 2 {
        return Err(Error::WrongAlphabetSize {
            expected: "|X| >= 2".into(),
            got: nx,
        });
    }
    let needed = factorial(nx);
    if needed > cap as u128 {
        return Err(Error::TooManyOrderings { needed, cap });
    }
    let orderings: Vec<Vec<usize>> = (0..nx).permutations(nx - 1).collect();
    let plans: Vec<OrderingPlan> = crate::parallel::par_map(orderings, |o| run_ordering(j, o))
        .into_iter()
        .collect::<Result<_>>()?;
    let mut points = vec![rightmost_point(j)];
    for plan in &plans {
        for stage in &plan.stages {
            let p = &stage.point;
            // deduplicate coincident stage points before the envelope
            if !points
                .iter()
                .any(|q| (q.leakage - p.leakage).abs() <= TOL_NUM
                    && (q.utility - p.utility).abs() <= TOL_NUM)
            {
                points.push(p.clone());
            }
        }
    }
    Ok((TradeoffCurve::from_points(points)?, plans))
}

/// Single adaptive ordering: each stage picks the unused symbol whose
/// indicator currently carries the most information about the release
/// (ties by lowest index), stopping once the release is independent.
pub fn curve_public_greedy(j: &JointPmf) -> Result<(TradeoffCurve, OrderingPlan)> {
    let nx = j.nx();
    if nx < 2 {
        return Err(Error::WrongAlphabetSize {
            expected: "|X| >= 2".into(),
            got: nx,
        });
    }
    let mut prev = Mechanism::identity_public(j.ny());
    let mut used: Vec<usize> = Vec::new();
    let mut stages = Vec::new();
    for _ in 0..nx - 1 {
        if evaluate_mechanism(j, &prev)?.leakage_bits <= TOL_NUM {
            break;
        }
        let mut best: Option<(f64, usize)> = None;
        for x in 0..nx {
            if used.contains(&x) {
                continue;
            }
            let info = indicator_release_joint(j, &prev, x)?.mutual_information();
            if best.is_none_or(|(b, _)| info > b) {
                best = Some((info, x));
            }
        }
        let (_, x) = best.expect("an unused symbol remains");
        let stage = curve_public_stage(j, &prev, &used, x)?;
        prev = stage.composed.clone();
        used.push(x);
        stages.push(stage);
    }
    let mut points = vec![rightmost_point(j)];
    points.extend(stages.iter().map(|s| s.point.clone()));
    let plan = OrderingPlan {
        ordering: used,
        stages,
    };
    Ok((TradeoffCurve::from_points(points)?, plan))
}

/// Rank-based lower bounds on the two perfect-privacy utilities:
/// `(H(Y) - log rank)^+` for the public model and
/// `(H(Y) - min{H(X), log rank})^+` for the full model, with the rank of
/// the posterior table `p(X|Y)`.
pub fn rank_bounds(j: &JointPmf) -> (f64, f64) {
    let py = j.marginal_y();
    let live_y: Vec<usize> = py.support();
    let posterior_rows: Vec<Vec<f64>> = live_y
        .iter()
        .map(|&y| (0..j.nx()).map(|x| j.prob(x, y) / py.get(y)).collect())
        .collect();
    let rank = matrix_rank(&posterior_rows, TOL_RANK).max(1);
    let hy = entropy(&py);
    let hx = entropy(&j.marginal_x());
    let log_rank = (rank as f64).log2();
    let public_bound = (hy - log_rank).max(0.0);
    let full_bound = (hy - hx.min(log_rank)).max(0.0);
    (public_bound, full_bound)
}
