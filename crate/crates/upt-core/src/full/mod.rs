//! Full-data-observation model: the curator designs `p(u|x,y)` with
//! access to both variables.

mod bounds;
mod construct;
mod curve;

pub use bounds::{
    perfect_privacy_exact_3x2, perfect_privacy_exact_binary, perfect_privacy_lower_bound,
    perfect_privacy_upper_bound,
};
pub use construct::{perfect_privacy_mechanism, ConstructionTrace};
pub use curve::{
    curve_full_exhaustive, curve_full_greedy, curve_full_nonalgorithmic, curve_point_from_subset,
    independence_level, restrict_to_z, verify_k_independence, CurveMode, SubsetRestriction,
    DEFAULT_SUBSET_CAP,
};
