use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::prob::channel::Channel;
use crate::prob::joint::{joint_from, JointPmf};
use crate::prob::pmf::Pmf;

// ChaCha8 keyed by the 64-bit seed: a portable, documented stream cipher
// PRNG whose output is identical on every platform, so seeded instances
// can be frozen into golden tests.

fn pmf_from_rng(rng: &mut ChaCha8Rng, n: usize) -> Pmf {
    let draws: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let sum: f64 = draws.iter().sum();
    let probs: Vec<f64> = draws.iter().map(|&d| d / sum).collect();
    Pmf::validate(&probs).expect("normalized uniform draws form a pmf")
}

/// A reproducible random pmf over `n` symbols: `n` iid Uniform[0,1)
/// draws, normalized.
pub fn random_pmf(seed: u64, n: usize) -> Pmf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pmf_from_rng(&mut rng, n)
}

/// A reproducible random joint pmf: `p_X` from `nx` normalized uniform
/// draws, then one normalized row of `p(Y|X)` per `x`, joint taken as the
/// product. The same seed yields a bit-identical table.
pub fn random_joint(seed: u64, nx: usize, ny: usize) -> JointPmf {
    assert!(nx >= 1 && ny >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let px = pmf_from_rng(&mut rng, nx);
    let rows: Vec<Pmf> = (0..nx).map(|_| pmf_from_rng(&mut rng, ny)).collect();
    let ch = Channel::from_pmf_rows(rows).expect("non-empty row set");
    joint_from(&px, &ch).expect("product of pmf and channel is a joint")
}
