use thiserror::Error;

/// Errors raised while building states, measurements and correlation reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: max |H - H^dagger| = {deviation:e} exceeds 1e-9")]
    NotHermitian { deviation: f64 },

    #[error("trace is {trace}, expected 1 (tolerance 1e-9)")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e} < -1e-9")]
    NotPsd { min_eigenvalue: f64 },

    #[error("amplitude vector has norm {norm}, expected 1 (tolerance 1e-9)")]
    NotNormalized { norm: f64 },

    #[error("unknown state family `{0}`")]
    UnknownFamily(String),

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("state has a single subsystem; correlations need at least two")]
    SinglePartyState,

    #[error("not a probability distribution: {0}")]
    NotADistribution(String),

    #[error("measurement angle out of range: {0}")]
    AngleOutOfRange(String),

    #[error("matrix is not unitary: max |U^dagger U - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("invalid projective measurement: {0}")]
    InvalidMeasurement(String),

    #[error("subsystem {index} has dimension {dim}; a qubit is required")]
    NotAQubit { index: usize, dim: usize },

    #[error("parameter vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid measurement order: {0}")]
    BadOrder(String),

    #[error("invalid optimizer configuration: {0}")]
    BadConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
