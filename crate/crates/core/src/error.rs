use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input violated the documented precondition of an operation.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("strategy counts ({a}, {b}, {c}, {d}) do not sum to n = {n}")]
    InvalidCounts { a: u64, b: u64, c: u64, d: u64, n: u64 },

    #[error("party number mismatch: expected n = {expected}, found n = {found}")]
    PartyMismatch { expected: u32, found: u32 },

    #[error("{what}: n = {n} exceeds the supported limit {limit}")]
    TooLarge { what: &'static str, n: u32, limit: u32 },

    #[error("parity condition failed: {0}")]
    Parity(String),

    #[error("measurement angle {0} outside [0, pi]")]
    ThetaOutOfRange(f64),

    #[error("convex hull is degenerate: affine dimension {dimension} < {expected}")]
    DegenerateHull { dimension: usize, expected: usize },

    #[error("exact integer arithmetic overflowed in {0}")]
    Overflow(&'static str),

    #[error("eigensolver did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },

    /// Two independent computations of the same quantity disagreed.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    /// Process exit code for this error (1 is reserved for usage errors).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DegenerateHull { .. }
            | Error::Overflow(_)
            | Error::NonConvergence { .. }
            | Error::Consistency(_) => 3,
            _ => 2,
        }
    }
}
