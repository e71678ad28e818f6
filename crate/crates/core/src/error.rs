use thiserror::Error;

/// Errors raised by circuit construction, synthesis and verification.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("node {id} does not exist (circuit has {len} nodes)")]
    UnknownNode { id: usize, len: usize },

    #[error("assignment has {got} bits, circuit has {expected} inputs")]
    AssignmentLength { expected: usize, got: usize },

    #[error("input length mismatch: {0}")]
    LengthMismatch(String),

    #[error("exhaustive check over {inputs} inputs exceeds the cap of {cap}; use random verification")]
    ExhaustiveTooLarge { inputs: usize, cap: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("arrival time {0} exceeds the supported maximum of 63")]
    ArrivalTooLarge(u32),

    #[error("set is not triangular with respect to the leftist circuit")]
    NotTriangular,

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed netlist: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
