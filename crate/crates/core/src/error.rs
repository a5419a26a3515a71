use thiserror::Error;

/// Errors raised by constructors, set arithmetic and the enumeration engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ring size must be at least 1")]
    EmptyRing,

    #[error("ring size {n} exceeds the bitmask width of 64")]
    RingTooLarge { n: usize },

    #[error("index {index} is outside [0, {}]", .n - 1)]
    IndexOutOfRange { index: usize, n: usize },

    #[error("index {index} appears in more than one block")]
    Overlap { index: usize },

    #[error("blocks do not cover index {missing}")]
    Coverage { missing: usize },

    #[error("block {block} is empty")]
    EmptyBlock { block: usize },

    #[error("difference multiset of an empty set")]
    EmptySet,

    #[error("ring sizes differ: {left} vs {right}")]
    RingMismatch { left: usize, right: usize },

    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    #[error("alphabet letter {0} repeats")]
    DuplicateLetter(f64),

    #[error("signal value {value} at index {index} is not an alphabet letter")]
    NotInAlphabet { index: usize, value: f64 },

    #[error("signal length {len} does not match ring size {n}")]
    LengthMismatch { len: usize, n: usize },

    #[error("invalid size profile {sizes:?} for N = {n}")]
    InvalidProfile { sizes: Vec<usize>, n: usize },

    #[error("{what}: {required} exceeds budget {limit}")]
    BudgetExceeded {
        what: &'static str,
        required: u128,
        limit: u128,
    },

    #[error("sample of {count} exceeds population {population}")]
    CountExceedsPopulation { count: u128, population: u128 },

    #[error("cross-check failed: {0}")]
    CrossCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;
