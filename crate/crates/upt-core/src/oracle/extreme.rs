//! Extreme points of the perfect-privacy polytopes.
//!
//! In the full-observation model the candidates are the conditionals
//! `p(x, y | u)` that put mass `p(x)` on exactly one supported `y` per
//! `x`, so they are indexed by selection functions over the per-`x`
//! supports. In the public model they are the distributions `q` on `Y`
//! whose posterior mixture reproduces the prior `p_X`, found by solving
//! the restricted linear system on every small-enough support set.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::oracle::linalg::{matrix_rank, solve_exact, SolveOutcome};
use crate::prob::{entropy_of, JointPmf};
use crate::tol::{TOL_EQ, TOL_LP, TOL_RANK};

/// Default cap on full-model vertex enumeration.
pub const DEFAULT_FULL_CAP: usize = 1_000_000;
/// Default cap on public-model support-subset enumeration
/// (covers alphabets up to |Y| = 16).
pub const DEFAULT_PUBLIC_CAP: usize = 1 << 16;

/// One full-model candidate: the chosen `y` per live `x`, and the
/// entropy of `Y` under the resulting conditional.
#[derive(Clone, Debug)]
pub struct FullVertex {
    pub y_choice: Vec<usize>,
    pub cond_entropy: f64,
}

/// One public-model candidate: a distribution on `Y` inside the
/// perfect-privacy polytope, and its entropy.
#[derive(Clone, Debug)]
pub struct PublicVertex {
    pub q: Vec<f64>,
    pub cond_entropy: f64,
}

/// The enumerated extreme points of one model's polytope.
#[derive(Clone, Debug)]
pub enum ExtremePointSet {
    Full {
        /// `x` symbols with positive marginal, in ascending order;
        /// `y_choice` vectors align with this list.
        live_x: Vec<usize>,
        vertices: Vec<FullVertex>,
    },
    Public {
        vertices: Vec<PublicVertex>,
        /// support subsets skipped because the restricted system was
        /// rank-deficient
        degenerate_skipped: usize,
    },
}

impl ExtremePointSet {
    pub fn len(&self) -> usize {
        match self {
            ExtremePointSet::Full { vertices, .. } => vertices.len(),
            ExtremePointSet::Public { vertices, .. } => vertices.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Enumerates every full-model candidate: one per element of the
/// Cartesian product of per-`x` supports.
pub fn enumerate_extreme_full(j: &JointPmf, cap: usize) -> Result<ExtremePointSet> {
    let px = j.marginal_x();
    let live_x: Vec<usize> = px.support();
    let supports: Vec<Vec<usize>> = live_x
        .iter()
        .map(|&x| (0..j.ny()).filter(|&y| j.prob(x, y) > 0.0).collect())
        .collect();
    let mut count: u128 = 1;
    for s in &supports {
        count = count.saturating_mul(s.len() as u128);
    }
    if count > cap as u128 {
        return Err(Error::TooManyVertices {
            needed: count,
            cap,
        });
    }
    let mut vertices = Vec::with_capacity(count as usize);
    let mut choice = vec![0usize; live_x.len()];
    loop {
        let y_choice: Vec<usize> = choice
            .iter()
            .enumerate()
            .map(|(i, &c)| supports[i][c])
            .collect();
        let mut pushforward = vec![0.0; j.ny()];
        for (i, &x) in live_x.iter().enumerate() {
            pushforward[y_choice[i]] += px.get(x);
        }
        vertices.push(FullVertex {
            y_choice,
            cond_entropy: entropy_of(&pushforward),
        });
        // mixed-radix increment, last coordinate fastest
        let mut pos = live_x.len();
        loop {
            if pos == 0 {
                return Ok(ExtremePointSet::Full { live_x, vertices });
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < supports[pos].len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}

/// Enumerates the vertices of the public-model polytope
/// `{ q on Y : sum_y p(X|y) q(y) = p_X }` by solving the restricted
/// system on every support subset of size up to the posterior rank.
pub fn enumerate_extreme_public(j: &JointPmf, cap: usize) -> Result<ExtremePointSet> {
    let px = j.marginal_x();
    let py = j.marginal_y();
    let live_y: Vec<usize> = py.support();
    // posterior columns p(X | y) for live y, plus a normalization row
    let column = |y: usize| -> Vec<f64> {
        (0..j.nx()).map(|x| j.prob(x, y) / py.get(y)).collect()
    };
    let augmented: Vec<Vec<f64>> = (0..j.nx())
        .map(|x| live_y.iter().map(|&y| j.prob(x, y) / py.get(y)).collect())
        .chain(std::iter::once(vec![1.0; live_y.len()]))
        .collect();
    let rank = matrix_rank(&augmented, TOL_RANK).max(1);

    let mut subset_count: u128 = 0;
    for k in 1..=rank.min(live_y.len()) {
        subset_count += binomial(live_y.len() as u128, k as u128);
    }
    if subset_count > cap as u128 {
        return Err(Error::TooManyVertices {
            needed: subset_count,
            cap,
        });
    }

    let mut vertices: Vec<PublicVertex> = Vec::new();
    let mut degenerate_skipped = 0usize;
    let mut rhs: Vec<f64> = px.probs().to_vec();
    rhs.push(1.0);
    for k in 1..=rank.min(live_y.len()) {
        for subset in live_y.iter().copied().combinations(k) {
            let a: Vec<Vec<f64>> = (0..j.nx())
                .map(|x| subset.iter().map(|&y| column(y)[x]).collect())
                .chain(std::iter::once(vec![1.0; k]))
                .collect();
            match solve_exact(&a, &rhs, TOL_LP) {
                SolveOutcome::Unique(q_t) => {
                    if q_t.iter().all(|&v| v >= -TOL_LP) {
                        let mut q = vec![0.0; j.ny()];
                        for (i, &y) in subset.iter().enumerate() {
                            q[y] = q_t[i].max(0.0);
                        }
                        if !vertices.iter().any(|v| {
                            v.q.iter().zip(&q).all(|(a, b)| (a - b).abs() <= TOL_EQ)
                        }) {
                            let cond_entropy = entropy_of(&q);
                            vertices.push(PublicVertex { q, cond_entropy });
                        }
                    }
                }
                SolveOutcome::RankDeficient => degenerate_skipped += 1,
                SolveOutcome::Inconsistent => {}
            }
        }
    }
    Ok(ExtremePointSet::Public {
        vertices,
        degenerate_skipped,
    })
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 0..k {
        result = result.saturating_mul(n - i) / (i + 1);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::prob::{joint_from, Channel, Pmf};
    use approx::assert_abs_diff_eq;

    #[test]
    fn full_candidate_counts() {
        // 3x2 full support: 2^3 candidates
        let j = joint_from(
            &Pmf::uniform(3),
            &Channel::from_rows(vec![
                vec![0.2, 0.8],
                vec![0.9, 0.1],
                vec![0.5, 0.5],
            ])
            .unwrap(),
        )
        .unwrap();
        let set = enumerate_extreme_full(&j, DEFAULT_FULL_CAP).unwrap();
        assert_eq!(set.len(), 8);

        // Y a function of X: single candidate
        let diag = joint_from(&Pmf::uniform(3), &Channel::identity(3)).unwrap();
        assert_eq!(enumerate_extreme_full(&diag, DEFAULT_FULL_CAP).unwrap().len(), 1);

        // full-support 3x3: 27 candidates
        let ex1 = fixtures::example1_joint(&[0.3, 0.3, 0.4]);
        assert_eq!(enumerate_extreme_full(&ex1, DEFAULT_FULL_CAP).unwrap().len(), 27);
    }

    #[test]
    fn full_enumeration_respects_cap() {
        let ex1 = fixtures::example1_joint(&[0.3, 0.3, 0.4]);
        assert!(matches!(
            enumerate_extreme_full(&ex1, 10),
            Err(Error::TooManyVertices { needed: 27, cap: 10 })
        ));
    }

    #[test]
    fn public_vertices_of_example_instance_pair_low_with_high() {
        let j = fixtures::example3_joint();
        let ExtremePointSet::Public { vertices, .. } =
            enumerate_extreme_public(&j, DEFAULT_PUBLIC_CAP).unwrap()
        else {
            panic!("public set expected")
        };
        // posterior rank is 2 and no y matches the prior, so every vertex
        // is supported on one y from the low side {y1, y4} and one from
        // the high side {y2, y3}
        assert_eq!(vertices.len(), 4);
        for v in &vertices {
            let support: Vec<usize> = (0..4).filter(|&y| v.q[y] > 0.0).collect();
            assert_eq!(support.len(), 2);
            assert!([0usize, 3].contains(&support.iter().copied().find(|&y| y == 0 || y == 3).unwrap()));
        }
        // the (y1, y3) vertex carries the mixing weight 0.1875
        let v13 = vertices
            .iter()
            .find(|v| v.q[0] > 0.0 && v.q[2] > 0.0)
            .expect("vertex on {y1, y3}");
        assert_abs_diff_eq!(v13.q[0], 0.1875, epsilon = 1e-9);
        assert_abs_diff_eq!(v13.q[2], 0.8125, epsilon = 1e-9);
    }

    #[test]
    fn independent_pair_yields_point_mass_vertices() {
        let py = Pmf::validate(&[0.5, 0.3, 0.2]).unwrap();
        let j = joint_from(
            &Pmf::validate(&[0.4, 0.6]).unwrap(),
            &Channel::constant(2, py),
        )
        .unwrap();
        let ExtremePointSet::Public { vertices, .. } =
            enumerate_extreme_public(&j, DEFAULT_PUBLIC_CAP).unwrap()
        else {
            panic!("public set expected")
        };
        assert_eq!(vertices.len(), 3);
        for v in &vertices {
            assert_eq!(v.q.iter().filter(|&&q| q > 0.0).count(), 1);
            assert_abs_diff_eq!(v.cond_entropy, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn function_of_x_yields_single_vertex_p_y() {
        let j = joint_from(&Pmf::validate(&[0.2, 0.3, 0.5]).unwrap(), &Channel::identity(3))
            .unwrap();
        let ExtremePointSet::Public { vertices, .. } =
            enumerate_extreme_public(&j, DEFAULT_PUBLIC_CAP).unwrap()
        else {
            panic!("public set expected")
        };
        assert_eq!(vertices.len(), 1);
        for (qv, expect) in vertices[0].q.iter().zip([0.2, 0.3, 0.5]) {
            assert_abs_diff_eq!(*qv, expect, epsilon = 1e-9);
        }
    }
}
