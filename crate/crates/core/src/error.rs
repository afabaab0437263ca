use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("angular momentum label 2j = {twice} exceeds the supported range (max {max})")]
    LabelRange { twice: i64, max: i64 },

    #[error("invalid angular momentum label: {0}")]
    InvalidLabel(String),

    #[error("invalid matrix dimension {0}: need N >= 2")]
    InvalidDimension(usize),

    #[error("invalid harmonic label (n = {n}, m = {m})")]
    InvalidHarmonic { n: i64, m: i64 },

    #[error("dimension mismatch: expected {expected}x{expected}, got {rows}x{cols}")]
    DimensionMismatch {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("profile is identically zero at eps = {0}")]
    DegenerateProfile(f64),

    #[error("profile has no finite matrix representation: {0}")]
    NoMatrixRepresentation(String),

    #[error("profile positivity region has {0} components")]
    AmbiguousComponent(usize),

    #[error("representation construction failed: {0}")]
    Representation(String),

    #[error("ordering undefined: {0}")]
    OrderingUndefined(String),

    #[error("isomorphism undefined: {0}")]
    IsoUndefined(String),

    #[error("band limit {requested} exceeds capacity {capacity}")]
    Aliasing { requested: usize, capacity: usize },

    #[error("singular metric at {count} node(s)")]
    SingularMetric { count: usize, nodes: Vec<usize> },

    #[error("point at a coordinate pole (theta = {0})")]
    PolePoint(f64),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
