//! Utility-privacy trade-off toolkit for finite joint distributions.
//!
//! Given a joint pmf of a private variable `X` and a useful variable `Y`,
//! this crate constructs release mechanisms `U` that trade utility
//! `I(Y;U)` against privacy leakage `I(X;U)` (both in bits), in two
//! observation models:
//!
//! * **full observation** — the mechanism sees `(X, Y)` and is a kernel
//!   `p(u|x,y)`; the leftmost (perfect-privacy) point is built by a
//!   water-filling construction over the support of `(X, Y)`,
//! * **public observation** — the mechanism sees only `Y` and is a kernel
//!   `p(u|y)`; the binary-`X` perfect-privacy point comes from pairing
//!   posteriors below and above the prior, and larger alphabets are
//!   handled by chaining binary indicator variables.
//!
//! Whole trade-off curves are produced as upper concave envelopes of
//! achievable points, and exact perfect-privacy values on small instances
//! are available through an extreme-point enumeration plus a dense
//! two-phase simplex solver, which doubles as the verification oracle for
//! everything else.

pub mod envelope;
pub mod error;
pub mod fixtures;
pub mod full;
pub mod oracle;
mod parallel;
pub mod prob;
pub mod public;
pub mod tol;

pub use error::{Error, Result};
pub use prob::{
    binary_entropy, compose_mechanisms, condition, entropy, evaluate_mechanism, joint_from,
    kl_divergence, marginals, mutual_information, numerical_rank, random_joint, support,
    validate_pmf, Axis, Channel, EvaluatedMechanism, JointPmf, Mechanism, ObservationModel, Pmf,
};

pub use envelope::{
    evaluate_envelope, sanity_band, upper_concave_envelope, PiecewiseLinear, TradeoffCurve,
    TradeoffPoint,
};
