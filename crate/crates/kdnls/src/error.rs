use thiserror::Error;

/// Errors surfaced by the simulation laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid psi bump: {0}")]
    InvalidPsi(String),

    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("config error: {0}")]
    ConfigGeneral(String),

    #[error("numerical abort at t = {t}: {msg}")]
    NumericalAbort { t: f64, msg: String },

    #[error("boundary contamination at t = {t}: near-boundary mass fraction {fraction:.3e} exceeds {threshold:.3e}")]
    BoundaryContamination {
        t: f64,
        fraction: f64,
        threshold: f64,
    },

    #[error("missing snapshot near t = {0}")]
    MissingSnapshot(f64),

    #[error("non-monotone times: {0}")]
    NonMonotoneTime(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("snapshot format error: {0}")]
    SnapshotFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
