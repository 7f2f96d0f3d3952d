//! Public-data-observation model: the curator designs `p(u|y)` and
//! `X - Y - U` is a Markov chain.

mod curve;
mod pairing;

pub use curve::{
    curve_public_exhaustive, curve_public_greedy, curve_public_stage, indicator_release_joint,
    rank_bounds, OrderingPlan, Stage, DEFAULT_ORDERING_CAP,
};
pub use pairing::{
    pairing_utility_bound, perfect_privacy_mechanism, perfect_privacy_mechanism_with, PairingTrace,
};
