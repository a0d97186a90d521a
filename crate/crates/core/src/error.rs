use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: u32, right: u32 },

    #[error("dimension {0} outside [1, 64]")]
    InvalidDimension(u32),

    #[error("bits {bits:#x} exceed dimension {n}")]
    BitsOutOfRange { bits: u64, n: u32 },

    #[error("invalid probability {0}")]
    InvalidProbability(f64),

    #[error("invalid rate: {0}")]
    InvalidRate(String),

    #[error("point {0} is not in the vertex set")]
    NotInVertexSet(String),

    #[error("endpoints must be distinct")]
    SameEndpoints,

    #[error("value {0} outside [0, 1]")]
    OutOfUnitInterval(f64),

    #[error("{what}: size {size} exceeds limit {limit}")]
    BudgetExceeded {
        what: &'static str,
        size: u64,
        limit: u64,
    },

    #[error("graph was built from sampled pairs; {0} needs the full graph")]
    SampledGraph(&'static str),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
