use alloc::string::String;

/// Errors raised by the local computations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An Euler factor was evaluated at (or within `POLE_EPSILON` of) a pole.
    #[error("pole of {factor}: |1 - q^-s a| = {distance:e}")]
    Pole { factor: String, distance: f64 },

    /// A Weyl group enumeration was requested beyond the size guard.
    #[error("Weyl group of rank {rank} exceeds the enumeration guard (max rank {max})")]
    Size { rank: usize, max: usize },

    /// A literal index pattern left the range of a character tuple.
    #[error("{factor}: index {index} outside tuple of length {len}")]
    Index { factor: String, index: i64, len: usize },

    /// Two readings of an ambiguous factor could not be reconciled.
    #[error("convention conflict at {factor}: {detail}")]
    Convention { factor: String, detail: String },

    /// Generic-position resampling gave up.
    #[error("generic-position sampling failed after {retries} retries")]
    SamplerExhausted { retries: usize },

    /// Exact rational arithmetic overflowed its integer width.
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;
