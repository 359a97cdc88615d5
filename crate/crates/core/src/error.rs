use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid argument or unsatisfiable request parameters.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Input graph violates a task's structural precondition.
    #[error("task precondition violated: {0}")]
    Precondition(String),

    /// Instance exceeds a solver's hard capacity bound.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// No path exists between the requested endpoints.
    #[error("no path between node {from} and node {to}")]
    NoPath { from: usize, to: usize },

    /// Text does not conform to the expected format.
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    /// Bad or missing configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// Remote endpoint failure that survived the retry policy.
    #[error("transport error: {0}")]
    Transport(String),

    /// A dataset record failed re-verification.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
