//! Exact finite-probability primitives: pmfs, joint pmfs, channels,
//! entropies, mutual information, mechanisms, and seeded instance
//! generation. All values are immutable after construction and every
//! operation is a pure function of its inputs.

mod channel;
pub mod io;
mod joint;
mod mechanism;
mod pmf;
mod random;

pub use channel::{numerical_rank, Channel};
pub use joint::{condition, joint_from, marginals, mutual_information, support, Axis, JointPmf};
pub use mechanism::{
    compose_mechanisms, evaluate_mechanism, EvaluatedMechanism, JointXyu, Mechanism,
    ObservationModel,
};
pub use pmf::{binary_entropy, entropy, entropy_of, kl_divergence, validate_pmf, Pmf};
pub use random::{random_joint, random_pmf};
