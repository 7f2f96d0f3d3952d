//! Embedded worked instances used by golden tests and the `reproduce`
//! subcommand. Printed three-decimal tables are renormalized; the
//! correction must stay below 5e-3 per distribution.

use crate::prob::{joint_from, Channel, JointPmf, Pmf};

const MAX_TABLE_CORRECTION: f64 = 5e-3;

fn renormalized_pmf(raw: &[f64]) -> Pmf {
    let sum: f64 = raw.iter().sum();
    assert!(
        (sum - 1.0).abs() < MAX_TABLE_CORRECTION,
        "three-decimal table off by {}",
        (sum - 1.0).abs()
    );
    let probs: Vec<f64> = raw.iter().map(|&v| v / sum).collect();
    Pmf::validate(&probs).expect("renormalized fixture row")
}

fn renormalized_channel(rows: &[&[f64]]) -> Channel {
    let rows: Vec<Pmf> = rows.iter().map(|r| renormalized_pmf(r)).collect();
    Channel::from_pmf_rows(rows).expect("fixture channel")
}

/// The 3x3 channel of the first worked full-observation instance.
/// Row `x` is `p(Y|X = x)`.
pub fn example1_channel() -> Channel {
    Channel::from_rows(vec![
        vec![0.2, 0.5, 0.3],
        vec![0.4, 0.2, 0.4],
        vec![0.6, 0.3, 0.1],
    ])
    .expect("example channel")
}

/// The first worked instance as a joint with the given `p_X`.
pub fn example1_joint(p: &[f64; 3]) -> JointPmf {
    let px = Pmf::validate(p).expect("example marginal");
    joint_from(&px, &example1_channel()).expect("example joint")
}

/// The binary-X, 4-symbol-Y public-observation worked instance:
/// `p_Y = (1/2, 1/4, 1/8, 1/8)` with posterior columns
/// `p(x0|y) = (0.3, 0.8, 0.5, 0.4)`.
pub fn example3_joint() -> JointPmf {
    let p_y = [0.5, 0.25, 0.125, 0.125];
    let x0_given_y = [0.3, 0.8, 0.5, 0.4];
    let mut table = vec![vec![0.0; 4]; 2];
    for y in 0..4 {
        table[0][y] = p_y[y] * x0_given_y[y];
        table[1][y] = p_y[y] * (1.0 - x0_given_y[y]);
    }
    JointPmf::validate(table)
        .expect("example joint")
        .with_labels(
            Some(vec!["x0".into(), "x1".into()]),
            Some(vec!["y1".into(), "y2".into(), "y3".into(), "y4".into()]),
        )
}

/// K-ary cyclic instance: `X` uniform on `{0..K-1}`, `Y | X = x` uniform
/// on the K-1 symbols `{x, x+1, ..., x+K-2} mod K`.
pub fn cyclic_joint(k: usize) -> JointPmf {
    assert!(k > 2);
    let rows: Vec<Vec<f64>> = (0..k)
        .map(|x| {
            let mut row = vec![1.0 / (k as f64 - 1.0); k];
            row[(x + k - 1) % k] = 0.0;
            row
        })
        .collect();
    let ch = Channel::from_rows(rows).expect("cyclic channel");
    joint_from(&Pmf::uniform(k), &ch).expect("cyclic joint")
}

/// Binary erasure instance: `X` Bernoulli with `p(x0) = p`, `Y` in
/// `{erasure, y1, y2}` with `p(y0|x) = e` and `p(y_j|x_j) = 1 - e`.
pub fn bec_joint(e: f64, p: f64) -> JointPmf {
    let px = Pmf::validate(&[p, 1.0 - p]).expect("binary marginal");
    let ch = Channel::from_rows(vec![vec![e, 1.0 - e, 0.0], vec![e, 0.0, 1.0 - e]])
        .expect("bec channel");
    joint_from(&px, &ch).expect("bec joint")
}

/// M-ary erasure instance with uniform `X`: `Y` in `{erasure, y1..yM}`,
/// `p(y0|x) = e`, `p(y_j|x_j) = 1 - e`.
pub fn erasure_joint(m: usize, e: f64) -> JointPmf {
    assert!(m >= 2);
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|x| {
            let mut row = vec![0.0; m + 1];
            row[0] = e;
            row[x + 1] = 1.0 - e;
            row
        })
        .collect();
    let ch = Channel::from_rows(rows).expect("erasure channel");
    joint_from(&Pmf::uniform(m), &ch).expect("erasure joint")
}

/// The randomly generated 8x8 benchmark instance, shipped verbatim from
/// its printed three-decimal tables (columns of the printed channel are
/// `p(Y|X = x)`).
pub fn numerical_8x8() -> JointPmf {
    let p_x = [0.175, 0.089, 0.146, 0.026, 0.077, 0.167, 0.145, 0.175];
    // printed with columns = x; transposed here so row x is p(Y|X=x)
    let printed: [[f64; 8]; 8] = [
        [0.130, 0.233, 0.159, 0.045, 0.185, 0.158, 0.039, 0.051],
        [0.007, 0.061, 0.072, 0.117, 0.046, 0.054, 0.067, 0.065],
        [0.168, 0.251, 0.217, 0.106, 0.034, 0.107, 0.219, 0.160],
        [0.185, 0.011, 0.008, 0.154, 0.141, 0.147, 0.066, 0.123],
        [0.134, 0.099, 0.100, 0.169, 0.271, 0.188, 0.212, 0.091],
        [0.150, 0.016, 0.087, 0.180, 0.096, 0.202, 0.063, 0.216],
        [0.147, 0.035, 0.175, 0.066, 0.165, 0.115, 0.242, 0.152],
        [0.078, 0.293, 0.182, 0.162, 0.063, 0.029, 0.091, 0.143],
    ];
    let columns: Vec<Vec<f64>> = (0..8)
        .map(|x| (0..8).map(|y| printed[y][x]).collect())
        .collect();
    let ch = renormalized_channel(&columns.iter().map(|c| c.as_slice()).collect::<Vec<_>>());
    joint_from(&renormalized_pmf(&p_x), &ch).expect("8x8 fixture joint")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn fixtures_are_valid_joints() {
        for j in [
            example1_joint(&[0.3, 0.3, 0.4]),
            example3_joint(),
            cyclic_joint(4),
            bec_joint(0.3, 0.5),
            erasure_joint(3, 0.25),
            numerical_8x8(),
        ] {
            let total: f64 = j.table().iter().flatten().sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn example1_has_full_support() {
        let j = example1_joint(&[0.2, 0.5, 0.3]);
        assert_eq!(j.support().len(), 9);
    }

    #[test]
    fn cyclic_rows_miss_one_symbol() {
        let j = cyclic_joint(5);
        assert_eq!(j.support().len(), 20);
        assert_eq!(j.prob(0, 4), 0.0);
        assert_eq!(j.prob(1, 0), 0.0);
    }

    #[test]
    fn fixture_8x8_marginal_matches_print() {
        let j = numerical_8x8();
        let px = j.marginal_x();
        assert_abs_diff_eq!(px.get(0), 0.175, epsilon = 1e-3);
        assert_abs_diff_eq!(px.get(3), 0.026, epsilon = 1e-3);
        assert_eq!(j.support().len(), 64);
    }
}
