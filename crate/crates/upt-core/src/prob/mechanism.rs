use crate::error::{Error, Result};
use crate::prob::channel::Channel;
use crate::prob::joint::JointPmf;
use crate::prob::pmf::entropy_of;
use crate::tol::TOL_PMF;

/// What the curator observes when applying the release kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObservationModel {
    /// Kernel `p(u|x,y)`, rows indexed by the pair `(x, y)` row-major.
    FullObservation,
    /// Kernel `p(u|y)`, rows indexed by `y`; `U` is conditionally
    /// independent of `X` given `Y`.
    PublicObservation,
}

/// A release mechanism: a row-stochastic kernel onto the alphabet of `U`
/// plus the observation model that fixes how its rows are indexed.
///
/// In the full-observation model, rows for pairs outside the support of
/// `(X, Y)` are unconstrained and canonically set to a point mass on the
/// first `u` symbol.
#[derive(Clone, Debug, PartialEq)]
pub struct Mechanism {
    pub model: ObservationModel,
    pub kernel: Channel,
    pub u_labels: Vec<String>,
}

impl Mechanism {
    pub fn new(model: ObservationModel, kernel: Channel) -> Mechanism {
        let u_labels = default_u_labels(kernel.n_outputs());
        Mechanism {
            model,
            kernel,
            u_labels,
        }
    }

    pub fn n_outputs(&self) -> usize {
        self.kernel.n_outputs()
    }

    /// The identity release `U = Y` in the public model.
    pub fn identity_public(ny: usize) -> Mechanism {
        Mechanism::new(ObservationModel::PublicObservation, Channel::identity(ny))
    }

    /// The constant release (singleton `U`) in the public model.
    pub fn constant_public(ny: usize) -> Mechanism {
        let kernel = Channel::from_rows(vec![vec![1.0]; ny]).expect("valid constant kernel");
        Mechanism::new(ObservationModel::PublicObservation, kernel)
    }
}

pub fn default_u_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("u{i}")).collect()
}

/// Dense joint distribution over `(X, Y, U)`.
#[derive(Clone, Debug)]
pub struct JointXyu {
    pub nx: usize,
    pub ny: usize,
    pub nu: usize,
    data: Vec<f64>,
}

impl JointXyu {
    fn zeros(nx: usize, ny: usize, nu: usize) -> JointXyu {
        JointXyu {
            nx,
            ny,
            nu,
            data: vec![0.0; nx * ny * nu],
        }
    }

    #[inline]
    fn idx(&self, x: usize, y: usize, u: usize) -> usize {
        (x * self.ny + y) * self.nu + u
    }

    pub fn prob(&self, x: usize, y: usize, u: usize) -> f64 {
        self.data[self.idx(x, y, u)]
    }

    pub fn marginal_u(&self) -> Vec<f64> {
        let mut pu = vec![0.0; self.nu];
        for x in 0..self.nx {
            for y in 0..self.ny {
                for u in 0..self.nu {
                    pu[u] += self.prob(x, y, u);
                }
            }
        }
        pu
    }

    pub fn marginal_xu(&self) -> Vec<Vec<f64>> {
        let mut pxu = vec![vec![0.0; self.nu]; self.nx];
        for x in 0..self.nx {
            for y in 0..self.ny {
                for u in 0..self.nu {
                    pxu[x][u] += self.prob(x, y, u);
                }
            }
        }
        pxu
    }

    pub fn marginal_yu(&self) -> Vec<Vec<f64>> {
        let mut pyu = vec![vec![0.0; self.nu]; self.ny];
        for x in 0..self.nx {
            for y in 0..self.ny {
                for u in 0..self.nu {
                    pyu[y][u] += self.prob(x, y, u);
                }
            }
        }
        pyu
    }

    pub fn marginal_xy(&self) -> Vec<Vec<f64>> {
        let mut pxy = vec![vec![0.0; self.ny]; self.nx];
        for x in 0..self.nx {
            for y in 0..self.ny {
                for u in 0..self.nu {
                    pxy[x][y] += self.prob(x, y, u);
                }
            }
        }
        pxy
    }

    /// `H(Y | X, U)` in bits.
    pub fn cond_entropy_y_given_xu(&self) -> f64 {
        let mut h = 0.0;
        for x in 0..self.nx {
            for u in 0..self.nu {
                let pxu: f64 = (0..self.ny).map(|y| self.prob(x, y, u)).sum();
                if pxu > 0.0 {
                    for y in 0..self.ny {
                        let p = self.prob(x, y, u);
                        if p > 0.0 {
                            h -= p * (p / pxu).log2();
                        }
                    }
                }
            }
        }
        h
    }

    /// `(X, U)` as a joint pmf, for independence-level checks.
    pub fn xu_joint(&self) -> JointPmf {
        JointPmf::validate(self.marginal_xu()).expect("marginal of a valid joint")
    }
}

/// A mechanism applied to a source distribution.
#[derive(Clone, Debug)]
pub struct EvaluatedMechanism {
    pub leakage_bits: f64,
    pub utility_bits: f64,
    pub joint_xyu: JointXyu,
}

fn mi_of_tables(pa: &[f64], pb: &[f64], pab: &[Vec<f64>]) -> f64 {
    let flat: Vec<f64> = pab.iter().flatten().copied().collect();
    let i = entropy_of(pa) + entropy_of(pb) - entropy_of(&flat);
    i.max(0.0)
}

/// Builds the joint over `(X, Y, U)` induced by applying `m` to `j` and
/// reads off leakage `I(X;U)` and utility `I(Y;U)`.
pub fn evaluate_mechanism(j: &JointPmf, m: &Mechanism) -> Result<EvaluatedMechanism> {
    let nx = j.nx();
    let ny = j.ny();
    let nu = m.kernel.n_outputs();
    let expected_rows = match m.model {
        ObservationModel::FullObservation => nx * ny,
        ObservationModel::PublicObservation => ny,
    };
    if m.kernel.n_inputs() != expected_rows {
        return Err(Error::IncompatibleAlphabets(format!(
            "kernel has {} rows, source needs {}",
            m.kernel.n_inputs(),
            expected_rows
        )));
    }
    let mut xyu = JointXyu::zeros(nx, ny, nu);
    for x in 0..nx {
        for y in 0..ny {
            let pxy = j.prob(x, y);
            if pxy == 0.0 {
                continue;
            }
            let row = match m.model {
                ObservationModel::FullObservation => m.kernel.row(x * ny + y),
                ObservationModel::PublicObservation => m.kernel.row(y),
            };
            for u in 0..nu {
                let k = row.get(u);
                if k > 0.0 {
                    let i = xyu.idx(x, y, u);
                    xyu.data[i] = pxy * k;
                }
            }
        }
    }
    // the (X, Y) marginal must be preserved
    let pxy_back = xyu.marginal_xy();
    for x in 0..nx {
        for y in 0..ny {
            if (pxy_back[x][y] - j.prob(x, y)).abs() > TOL_PMF {
                return Err(Error::Invariant(format!(
                    "source marginal not preserved at ({x},{y}): {} vs {}",
                    pxy_back[x][y],
                    j.prob(x, y)
                )));
            }
        }
    }
    let pu = xyu.marginal_u();
    let leakage = mi_of_tables(j.marginal_x().probs(), &pu, &xyu.marginal_xu());
    let utility = mi_of_tables(j.marginal_y().probs(), &pu, &xyu.marginal_yu());
    Ok(EvaluatedMechanism {
        leakage_bits: leakage,
        utility_bits: utility,
        joint_xyu: xyu,
    })
}

/// Chains a public mechanism `Y -> U1` with a channel `U1 -> U2`; the
/// result releases `U2` from `Y` through the Markov chain `Y - U1 - U2`.
pub fn compose_mechanisms(first: &Mechanism, second: &Channel) -> Result<Mechanism> {
    if first.model != ObservationModel::PublicObservation {
        return Err(Error::IncompatibleAlphabets(
            "composition is defined for public-observation mechanisms".into(),
        ));
    }
    let kernel = first.kernel.then(second)?;
    Ok(Mechanism::new(ObservationModel::PublicObservation, kernel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::prob::joint::{joint_from, marginals};
    use crate::prob::pmf::{entropy, Pmf};
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_release_attains_rightmost_point() {
        let j = fixtures::example3_joint();
        let m = Mechanism::identity_public(j.ny());
        let ev = evaluate_mechanism(&j, &m).unwrap();
        assert_abs_diff_eq!(ev.leakage_bits, j.mutual_information(), epsilon = 1e-12);
        assert_abs_diff_eq!(ev.utility_bits, entropy(&j.marginal_y()), epsilon = 1e-12);
    }

    #[test]
    fn constant_release_reveals_nothing() {
        let j = fixtures::example3_joint();
        let m = Mechanism::constant_public(j.ny());
        let ev = evaluate_mechanism(&j, &m).unwrap();
        assert_eq!(ev.leakage_bits, 0.0);
        assert_eq!(ev.utility_bits, 0.0);
    }

    #[test]
    fn composing_with_identity_is_identity() {
        let j = fixtures::example3_joint();
        let m = Mechanism::identity_public(j.ny());
        let composed = compose_mechanisms(&m, &Channel::identity(j.ny())).unwrap();
        assert_eq!(composed.kernel, m.kernel);
    }

    #[test]
    fn composing_deterministic_maps_composes_functions() {
        let f = Mechanism::new(
            ObservationModel::PublicObservation,
            Channel::deterministic(2, &[0, 0, 1]),
        );
        let g = Channel::deterministic(3, &[2, 0]);
        let composed = compose_mechanisms(&f, &g).unwrap();
        let expect = Channel::deterministic(3, &[2, 2, 0]);
        assert_eq!(composed.kernel, expect);
    }

    #[test]
    fn full_model_kernel_dimensions_are_checked() {
        let j = fixtures::example3_joint();
        let m = Mechanism::new(ObservationModel::FullObservation, Channel::identity(3));
        assert!(matches!(
            evaluate_mechanism(&j, &m),
            Err(Error::IncompatibleAlphabets(_))
        ));
    }

    #[test]
    fn marginal_preserved_on_random_mechanism() {
        let px = Pmf::validate(&[0.3, 0.7]).unwrap();
        let ch = Channel::from_rows(vec![vec![0.1, 0.6, 0.3], vec![0.5, 0.2, 0.3]]).unwrap();
        let j = joint_from(&px, &ch).unwrap();
        let kernel = Channel::from_rows(vec![
            vec![0.9, 0.1],
            vec![0.4, 0.6],
            vec![0.2, 0.8],
        ])
        .unwrap();
        let m = Mechanism::new(ObservationModel::PublicObservation, kernel);
        let ev = evaluate_mechanism(&j, &m).unwrap();
        let back = ev.joint_xyu.marginal_xy();
        for x in 0..2 {
            for y in 0..3 {
                assert_abs_diff_eq!(back[x][y], j.prob(x, y), epsilon = 1e-12);
            }
        }
        let (px2, _) = marginals(&j);
        assert_abs_diff_eq!(px2.get(0), 0.3, epsilon = 1e-12);
    }
}
