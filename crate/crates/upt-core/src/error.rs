use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("negative probability {value} at index {index}")]
    NegativeEntry { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, expected 1")]
    SumNotOne { sum: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("value {value} outside [0, 1]")]
    OutOfRange { value: f64 },

    #[error("empty input")]
    EmptyInput,

    #[error("incompatible alphabets: {0}")]
    IncompatibleAlphabets(String),

    #[error("wrong alphabet size: expected {expected}, got {got}")]
    WrongAlphabetSize { expected: String, got: usize },

    #[error("subset of size {size} not allowed for |X| = {nx}")]
    SubsetTooLarge { size: usize, nx: usize },

    #[error("{needed} subsets exceed cap {cap}; use the greedy variant")]
    TooManySubsets { needed: u128, cap: usize },

    #[error("{needed} orderings exceed cap {cap}; use the greedy variant")]
    TooManyOrderings { needed: u128, cap: usize },

    #[error("{needed} candidate vertices exceed cap {cap}")]
    TooManyVertices { needed: u128, cap: usize },

    #[error("symbol {index} already used in an earlier stage")]
    SymbolReused { index: usize },

    #[error("linear program is infeasible (inconsistent input)")]
    LpInfeasible,

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
