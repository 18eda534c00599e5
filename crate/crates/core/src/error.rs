use thiserror::Error;

use crate::graph::EdgeId;

/// Errors raised by the sequence, graph, IET and embedding operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// Two Kronecker terms are too close together to trust the computed order.
    #[error(
        "precision insufficient: terms {first} and {second} are within 2^-{guard_bits} \
         at {precision_bits} bits"
    )]
    PrecisionInsufficient {
        first: usize,
        second: usize,
        precision_bits: u32,
        guard_bits: u32,
    },

    #[error("terms {first} and {second} compare equal")]
    DuplicateValues { first: usize, second: usize },

    #[error("{value} is out of range (must be below {bound})")]
    OutOfRange { value: u64, bound: u64 },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("subinterval lengths sum to {sum}, not 1")]
    LengthsNotNormalized { sum: String },

    #[error("subinterval {index} has nonpositive length")]
    NonpositiveLength { index: usize },

    #[error("point {0} is outside [0, 1)")]
    OutOfDomain(String),

    #[error("no edge {0}")]
    NoSuchEdge(EdgeId),

    #[error("edge {0} is a loop and cannot be contracted")]
    LoopContraction(EdgeId),

    #[error("invalid range: target size {n} must be below source size {m}")]
    InvalidRange { n: usize, m: usize },

    #[error("connection set {{1, {c}}} is degenerate for N = {n}")]
    DegenerateConnectionSet { n: usize, c: usize },

    #[error("invalid rotation system: {0}")]
    InvalidRotation(String),

    #[error("graph with {0} vertices is too small for a canonical rotation")]
    DegenerateGraph(usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
