//! Water-filling construction of a perfect-privacy mechanism in the
//! full-observation model.
//!
//! The construction works backwards: each release symbol `u` links to
//! exactly one supported `(x, y)` node per `x`-subgroup with transition
//! probability `p(x)`, which pins the posterior of `X` to its prior. The
//! first batch of symbols covers the outputs supported under every input
//! deterministically; afterwards each iteration creates one symbol that
//! fills the smallest remaining water level, preferring nodes that share
//! the `y` coordinate of the minimizer. Only the channel `p(Y|X)` is
//! consumed, so the resulting kernel does not depend on the prior of `X`.

use crate::error::{Error, Result};
use crate::prob::{Channel, Mechanism, ObservationModel};
use crate::tol::TOL_PMF;

/// Execution trace of the construction, kept for tests and reports.
#[derive(Clone, Debug)]
pub struct ConstructionTrace {
    /// Outputs supported under every input, in ascending order.
    pub common_support_set: Vec<usize>,
    /// Water levels before each iteration and after the last one; each
    /// table is indexed `[x][y]`.
    pub water_levels: Vec<Vec<Vec<f64>>>,
    /// Per-iteration smallest positive level and its cell.
    pub minima: Vec<(f64, (usize, usize))>,
    /// Per-iteration fallback output choice per input subgroup.
    pub subgroup_minimizers: Vec<Vec<Option<usize>>>,
    /// Number of water-filling iterations.
    pub iterations: usize,
    /// Mass of each release symbol, in creation order.
    pub u_levels: Vec<f64>,
}

/// Runs the construction on a channel `p(Y|X)` and returns the
/// full-observation mechanism together with its trace.
///
/// For every prior with full support the output satisfies `X` independent
/// of `U`, `Y` a function of `(X, U)`, preservation of the source
/// distribution, and `|U| <= |supp(X,Y)| - |X| + 1`.
pub fn perfect_privacy_mechanism(ch: &Channel) -> Result<(Mechanism, ConstructionTrace)> {
    let nx = ch.n_inputs();
    let ny = ch.n_outputs();
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidChannel("empty alphabet".into()));
    }
    let supported = |x: usize, y: usize| ch.prob(x, y) > TOL_PMF;
    let common: Vec<usize> = (0..ny)
        .filter(|&y| (0..nx).all(|x| supported(x, y)))
        .collect();
    let min_level: Vec<f64> = (0..ny)
        .map(|y| {
            if common.contains(&y) {
                (0..nx).map(|x| ch.prob(x, y)).fold(f64::INFINITY, f64::min)
            } else {
                0.0
            }
        })
        .collect();

    // forward kernel rows indexed (x, y) row-major; contributions
    // accumulate as release symbols are created
    let mut kernel: Vec<Vec<f64>> = vec![Vec::new(); nx * ny];
    let mut u_levels: Vec<f64> = Vec::new();
    let mut push_symbol = |links: &[(usize, usize)], mass: f64, kernel: &mut Vec<Vec<f64>>| {
        let u = u_levels.len();
        for row in kernel.iter_mut() {
            debug_assert!(row.len() <= u);
            row.resize(u + 1, 0.0);
        }
        for &(x, y) in links {
            kernel[x * ny + y][u] = mass / ch.prob(x, y);
        }
        u_levels.push(mass);
    };

    // deterministic symbols on the common support
    for &y in &common {
        let links: Vec<(usize, usize)> = (0..nx).map(|x| (x, y)).collect();
        push_symbol(&links, min_level[y], &mut kernel);
    }

    // initial water levels and the iterations
    let snap = |v: f64| if v.abs() < TOL_PMF { 0.0 } else { v };
    let mut water: Vec<Vec<f64>> = (0..nx)
        .map(|x| {
            (0..ny)
                .map(|y| {
                    if supported(x, y) {
                        snap(ch.prob(x, y) - min_level[y])
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    let mut trace = ConstructionTrace {
        common_support_set: common.clone(),
        water_levels: vec![water.clone()],
        minima: Vec::new(),
        subgroup_minimizers: Vec::new(),
        iterations: 0,
        u_levels: Vec::new(),
    };

    loop {
        // smallest positive level; ties resolved by the highest-index
        // cell (scanning backwards matches the worked reference run and
        // keeps the cyclic family optimal, which lowest-index ties do not)
        let mut level = f64::INFINITY;
        for row in &water {
            for &v in row {
                if v > 0.0 && v < level {
                    level = v;
                }
            }
        }
        if level == f64::INFINITY {
            break;
        }
        let (mut xs, mut ys) = (usize::MAX, usize::MAX);
        'outer: for x in (0..nx).rev() {
            for y in (0..ny).rev() {
                if water[x][y] == level {
                    (xs, ys) = (x, y);
                    break 'outer;
                }
            }
        }
        // fallback choice per subgroup: the highest-index output
        // attaining the smallest positive level in that row
        let minimizers: Vec<Option<usize>> = water
            .iter()
            .map(|row| {
                let mut best: Option<(f64, usize)> = None;
                for y in (0..ny).rev() {
                    let v = row[y];
                    if v > 0.0 && best.is_none_or(|(b, _)| v < b) {
                        best = Some((v, y));
                    }
                }
                best.map(|(_, y)| y)
            })
            .collect();
        let mut links = Vec::with_capacity(nx);
        for x in 0..nx {
            let y = if water[x][ys] > 0.0 {
                ys
            } else {
                minimizers[x].ok_or_else(|| {
                    Error::Invariant(format!("subgroup {x} exhausted while water remains"))
                })?
            };
            links.push((x, y));
        }
        for &(x, y) in &links {
            water[x][y] = snap(water[x][y] - level);
        }
        push_symbol(&links, level, &mut kernel);
        trace.minima.push((level, (xs, ys)));
        trace.subgroup_minimizers.push(minimizers);
        trace.water_levels.push(water.clone());
        trace.iterations += 1;
    }

    trace.u_levels = u_levels.clone();
    let nu = u_levels.len().max(1);
    let rows: Vec<Vec<f64>> = kernel
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.resize(nu, 0.0);
            let (x, y) = (i / ny, i % ny);
            if supported(x, y) {
                let s: f64 = row.iter().sum();
                if (s - 1.0).abs() > 1e-12 {
                    for v in row.iter_mut() {
                        *v /= s;
                    }
                }
                row
            } else {
                // off-support rows are unconstrained; canonical point mass
                let mut canonical = vec![0.0; nu];
                canonical[0] = 1.0;
                canonical
            }
        })
        .collect();
    let mechanism = Mechanism::new(ObservationModel::FullObservation, Channel::from_rows(rows)?);
    Ok((mechanism, trace))
}
