use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("weight matrix must be {n}x{n}: {detail}")]
    Shape { n: usize, detail: String },

    #[error("asymmetric weights at ({0},{1})")]
    Asymmetric(usize, usize),

    #[error("negative weight at ({0},{1})")]
    NegativeWeight(usize, usize),

    #[error("nonzero diagonal weight at ({0},{0})")]
    NonzeroDiagonal(usize),

    #[error("weight at ({0},{1}) is not in {{1, 2}}")]
    NotOneTwo(usize, usize),

    #[error("triangle inequality violated for ({0},{1},{2})")]
    NotMetric(usize, usize, usize),

    #[error("invalid point set: {0}")]
    Points(String),

    #[error("invalid tree: {0}")]
    Tree(String),

    #[error("invalid strategy profile: {0}")]
    Profile(String),

    #[error("alpha must be a finite positive weight, got {0}")]
    Alpha(String),

    #[error("operation requires a {expected} host, got {actual}")]
    WrongKind { expected: &'static str, actual: String },

    #[error("size {size} exceeds cap {cap} for {what}")]
    CapExceeded { what: &'static str, size: usize, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } => 3,
            _ => 2,
        }
    }

    /// Offending index pair, when the error is tied to a matrix entry.
    pub fn index_pair(&self) -> Option<(usize, usize)> {
        match self {
            Error::Asymmetric(u, v) | Error::NegativeWeight(u, v) | Error::NotOneTwo(u, v) => Some((*u, *v)),
            Error::NonzeroDiagonal(u) => Some((*u, *u)),
            _ => None,
        }
    }
}
