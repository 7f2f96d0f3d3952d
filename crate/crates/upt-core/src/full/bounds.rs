//! Closed-form bounds and exact small-alphabet values for the
//! perfect-privacy utility in the full-observation model.

use crate::error::{Error, Result};
use crate::prob::{binary_entropy, entropy, JointPmf};

/// `sum_y min_x p(y|x)` over inputs with positive marginal: the total
/// release mass that can be made deterministic in `Y`.
pub(crate) fn common_mass(j: &JointPmf) -> f64 {
    let px = j.marginal_x();
    let live: Vec<usize> = px.support();
    (0..j.ny())
        .map(|y| {
            live.iter()
                .map(|&x| j.prob(x, y) / px.get(x))
                .fold(f64::INFINITY, f64::min)
        })
        .sum()
}

/// Lower bound on the perfect-privacy utility:
/// `(H(Y) - (1 - sum_y min_x p(y|x)) min{H(X), log|Y|})^+`.
pub fn perfect_privacy_lower_bound(j: &JointPmf) -> f64 {
    let hy = entropy(&j.marginal_y());
    let hx = entropy(&j.marginal_x());
    let cap = (j.ny() as f64).log2();
    (hy - (1.0 - common_mass(j)) * hx.min(cap)).max(0.0)
}

/// Upper bound on the perfect-privacy utility:
/// `H(Y) - (1 - sum_y min_x p(y|x)) H_b(min_x p(x))`.
pub fn perfect_privacy_upper_bound(j: &JointPmf) -> f64 {
    let hy = entropy(&j.marginal_y());
    let min_px = j.marginal_x().min_prob();
    hy - (1.0 - common_mass(j)) * binary_entropy(min_px).expect("marginal within [0,1]")
}

/// Exact perfect-privacy utility for binary `X`:
/// `H(Y) - (1 - sum_y min_x p(y|x)) H(X)`.
pub fn perfect_privacy_exact_binary(j: &JointPmf) -> Result<f64> {
    if j.nx() != 2 {
        return Err(Error::WrongAlphabetSize {
            expected: "|X| = 2".into(),
            got: j.nx(),
        });
    }
    let hy = entropy(&j.marginal_y());
    let hx = entropy(&j.marginal_x());
    Ok(hy - (1.0 - common_mass(j)) * hx)
}

/// Relabeling used by the 3x2 closed form: `x1` minimizes `p(y1|x)`,
/// `x2` minimizes `p(y2|x)` (ties by lowest index; if one input
/// minimizes both columns it takes the `y1` label and the next-lowest
/// minimizer of the `y2` column takes the other), `x3` is the rest.
pub(crate) fn relabel_3x2(py1: &[f64; 3]) -> [usize; 3] {
    let argmin = |vals: [f64; 3], skip: Option<usize>| -> usize {
        let mut best = usize::MAX;
        let mut best_val = f64::INFINITY;
        for (i, &v) in vals.iter().enumerate() {
            if Some(i) != skip && v < best_val {
                best_val = v;
                best = i;
            }
        }
        best
    };
    let x1 = argmin(*py1, None);
    let py2 = [1.0 - py1[0], 1.0 - py1[1], 1.0 - py1[2]];
    let mut x2 = argmin(py2, None);
    if x2 == x1 {
        x2 = argmin(py2, Some(x1));
    }
    let x3 = (0..3).find(|&i| i != x1 && i != x2).expect("three symbols");
    [x1, x2, x3]
}

/// Exact perfect-privacy utility for `(|X|, |Y|) = (3, 2)`:
/// `H(Y) - (p(y1|x3) - p(y1|x1)) H_b(p1) - (p(y2|x3) - p(y2|x2)) H_b(p2)`
/// after the minimizing relabeling.
pub fn perfect_privacy_exact_3x2(j: &JointPmf) -> Result<f64> {
    if j.nx() != 3 {
        return Err(Error::WrongAlphabetSize {
            expected: "|X| = 3".into(),
            got: j.nx(),
        });
    }
    if j.ny() != 2 {
        return Err(Error::WrongAlphabetSize {
            expected: "|Y| = 2".into(),
            got: j.ny(),
        });
    }
    let px = j.marginal_x();
    let (ch, _) = j.condition_on_x();
    let py1 = [ch.prob(0, 0), ch.prob(1, 0), ch.prob(2, 0)];
    let [x1, x2, x3] = relabel_3x2(&py1);
    let hy = entropy(&j.marginal_y());
    let hb = |t: f64| binary_entropy(t).expect("probability in range");
    Ok(hy
        - (ch.prob(x3, 0) - ch.prob(x1, 0)) * hb(px.get(x1))
        - (ch.prob(x3, 1) - ch.prob(x2, 1)) * hb(px.get(x2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle::{exact_perfect_privacy_full, DEFAULT_FULL_CAP};
    use crate::prob::{joint_from, random_joint, Channel, Pmf};
    use approx::assert_abs_diff_eq;

    #[test]
    fn example_channel_lower_bound_formula() {
        // common mass of the worked 3x3 channel is 0.5, so the bound is
        // (H(Y) - 0.5 H(X))^+
        for p in [[0.2, 0.5, 0.3], [0.25, 0.3, 0.45]] {
            let j = fixtures::example1_joint(&p);
            let hy = entropy(&j.marginal_y());
            let hx = entropy(&j.marginal_x());
            assert_abs_diff_eq!(
                perfect_privacy_lower_bound(&j),
                (hy - 0.5 * hx).max(0.0),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn independent_pair_bounds_hit_entropy() {
        let j = joint_from(
            &Pmf::validate(&[0.3, 0.7]).unwrap(),
            &Channel::constant(2, Pmf::validate(&[0.4, 0.6]).unwrap()),
        )
        .unwrap();
        let hy = entropy(&j.marginal_y());
        assert_abs_diff_eq!(perfect_privacy_lower_bound(&j), hy, epsilon = 1e-12);
        assert_abs_diff_eq!(perfect_privacy_upper_bound(&j), hy, epsilon = 1e-12);
    }

    #[test]
    fn cyclic_upper_bound_is_tight() {
        // the common-support mass vanishes on the cyclic instance, so the
        // lower bound degrades to zero while the upper bound is exact
        let j = fixtures::cyclic_joint(4);
        let expect = 0.75 * 3f64.log2();
        assert_abs_diff_eq!(perfect_privacy_lower_bound(&j), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(perfect_privacy_upper_bound(&j), expect, epsilon = 1e-9);
        assert_abs_diff_eq!(
            exact_perfect_privacy_full(&j, DEFAULT_FULL_CAP).unwrap().value_bits,
            expect,
            epsilon = 1e-9
        );
    }

    #[test]
    fn singleton_y_upper_bound_is_zero() {
        let j = JointPmf::validate(vec![vec![0.3], vec![0.7]]).unwrap();
        assert_abs_diff_eq!(perfect_privacy_upper_bound(&j), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn binary_closed_form_known_channels() {
        // erasure: H_b(e) regardless of the prior
        for p in [0.2, 0.5, 0.8] {
            let j = fixtures::bec_joint(0.3, p);
            assert_abs_diff_eq!(
                perfect_privacy_exact_binary(&j).unwrap(),
                binary_entropy(0.3).unwrap(),
                epsilon = 1e-9
            );
        }
        // symmetric channel at the worst-case prior: 2 min{a, 1-a}
        let bsc = joint_from(
            &Pmf::uniform(2),
            &Channel::from_rows(vec![vec![0.8, 0.2], vec![0.2, 0.8]]).unwrap(),
        )
        .unwrap();
        assert_abs_diff_eq!(perfect_privacy_exact_binary(&bsc).unwrap(), 0.4, epsilon = 1e-12);
        // asymmetric channel with alpha = 1 - beta: independence
        let alpha = 0.3;
        let beta = 1.0 - alpha;
        for p in [0.2, 0.6] {
            let j = joint_from(
                &Pmf::validate(&[p, 1.0 - p]).unwrap(),
                &Channel::from_rows(vec![
                    vec![1.0 - alpha, alpha],
                    vec![beta, 1.0 - beta],
                ])
                .unwrap(),
            )
            .unwrap();
            assert_abs_diff_eq!(
                perfect_privacy_exact_binary(&j).unwrap(),
                binary_entropy(1.0 - alpha).unwrap(),
                epsilon = 1e-12
            );
        }
        assert!(perfect_privacy_exact_binary(&fixtures::cyclic_joint(3)).is_err());
    }

    #[test]
    fn binary_upper_bound_equals_closed_form() {
        for seed in 0..20 {
            let j = random_joint(seed, 2, 4);
            assert_abs_diff_eq!(
                perfect_privacy_upper_bound(&j),
                perfect_privacy_exact_binary(&j).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn closed_3x2_matches_oracle() {
        // frozen reference instance: p(y1|x) = (0.2, 0.9, 0.5), uniform prior
        let j = joint_from(
            &Pmf::uniform(3),
            &Channel::from_rows(vec![vec![0.2, 0.8], vec![0.9, 0.1], vec![0.5, 0.5]]).unwrap(),
        )
        .unwrap();
        let closed = perfect_privacy_exact_3x2(&j).unwrap();
        assert_abs_diff_eq!(closed, 0.35397, epsilon = 1e-4);
        let oracle = exact_perfect_privacy_full(&j, DEFAULT_FULL_CAP).unwrap();
        assert_abs_diff_eq!(closed, oracle.value_bits, epsilon = 1e-7);

        // identical columns: independence, utility is H(Y)
        let ind = joint_from(
            &Pmf::validate(&[0.5, 0.25, 0.25]).unwrap(),
            &Channel::from_rows(vec![vec![0.4, 0.6]; 3]).unwrap(),
        )
        .unwrap();
        assert_abs_diff_eq!(
            perfect_privacy_exact_3x2(&ind).unwrap(),
            entropy(&ind.marginal_y()),
            epsilon = 1e-12
        );

        for seed in 0..30 {
            let j = random_joint(seed, 3, 2);
            let closed = perfect_privacy_exact_3x2(&j).unwrap();
            let oracle = exact_perfect_privacy_full(&j, DEFAULT_FULL_CAP).unwrap();
            assert_abs_diff_eq!(closed, oracle.value_bits, epsilon = 1e-7);
        }
    }

    #[test]
    fn sandwich_on_random_instances() {
        for seed in 0..30 {
            let j = random_joint(seed, 3, 3);
            let exact = exact_perfect_privacy_full(&j, DEFAULT_FULL_CAP).unwrap().value_bits;
            assert!(perfect_privacy_lower_bound(&j) <= exact + 1e-9);
            assert!(exact <= perfect_privacy_upper_bound(&j) + 1e-9);
        }
    }
}
