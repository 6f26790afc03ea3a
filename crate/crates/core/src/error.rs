use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("expected {expected} entries for a {dim}x{dim} matrix, got {actual}")]
    BadEntryCount { dim: usize, expected: usize, actual: usize },

    #[error("matrix is not Hermitian: entry ({row}, {col}) deviates by {deviation:e}")]
    NotHermitian { row: usize, col: usize, deviation: f64 },

    #[error("state is not normalized: squared norm is {0}")]
    NotNormalized(f64),

    #[error("density matrix trace is {0}, expected 1")]
    BadTrace(f64),

    #[error("density matrix has negative eigenvalue {0:e}")]
    NotPositive(f64),

    #[error("internal consistency: {quantity} has residue {residue:e}")]
    Residue { quantity: &'static str, residue: f64 },

    #[error("operation supports dimension {supported} only, got {actual}")]
    UnsupportedDimension { supported: usize, actual: usize },

    #[error("relation {0} requires a pure state")]
    UnsupportedState(&'static str),

    #[error("states are not orthogonal: overlap magnitude {0:e}")]
    NotOrthogonal(f64),

    #[error("{relation} needs at least {min} observables, got {actual}")]
    UnsupportedCount {
        relation: &'static str,
        min: usize,
        actual: usize,
    },

    #[error("observables in a set must share a dimension")]
    MixedDimensions,

    #[error("estimated moments lie outside the Bloch ball: V = {0}")]
    InvalidMoments(f64),

    #[error("relation {0} has no qubit closed form")]
    UnsupportedRelation(&'static str),

    #[error("angle out of range: {name} = {value}")]
    InvalidAngle { name: &'static str, value: f64 },

    #[error("invalid Stokes vector: {0}")]
    InvalidStokes(String),

    #[error("invalid shot plan: {0}")]
    InvalidPlan(String),

    #[error("no measurement record for basis {0}")]
    MissingBasis(char),

    #[error("duplicate measurement record for basis {0}")]
    DuplicateBasis(char),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("unknown relation label {0:?}")]
    UnknownRelation(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
