use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph of order {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("malformed header: {0}")]
    MalformedHeader(String),

    #[error("triangle length mismatch: expected {expected} entries, found {found}")]
    TriangleLengthMismatch { expected: usize, found: usize },

    #[error("fewer than 2 vertices")]
    TooFewVertices,

    #[error("invalid color entry {0:?}")]
    InvalidColor(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("not a tournament: pair ({0}, {1}) is not directed")]
    NotATournament(usize, usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
