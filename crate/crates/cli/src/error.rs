use polybilliard::billiard::BilliardError;
use polybilliard::geometry::{GeometryError, PolyhedronLoadError};
use polybilliard::symbolic::SymbolicError;
use polybilliard::transversal::TransversalError;
use thiserror::Error;

/// Failure of a subcommand, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input: bad flag values, unreadable JSON, unknown labels.
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    NonConvex(String),
    /// Well-formed input that violates an operation's precondition.
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::NonConvex(_) => 3,
            CliError::Precondition(_) => 4,
            CliError::Internal(_) => 5,
        }
    }
}

impl From<PolyhedronLoadError> for CliError {
    fn from(e: PolyhedronLoadError) -> Self {
        match e {
            PolyhedronLoadError::Parse(_) => CliError::Parse(e.to_string()),
            PolyhedronLoadError::Geometry(g) => g.into(),
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::NonConvex { .. } => CliError::NonConvex(e.to_string()),
            _ => CliError::Precondition(format!("invalid polyhedron: {e}")),
        }
    }
}

impl From<BilliardError> for CliError {
    fn from(e: BilliardError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<SymbolicError> for CliError {
    fn from(e: SymbolicError) -> Self {
        match e {
            SymbolicError::UnknownLabel(_) => CliError::Parse(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<TransversalError> for CliError {
    fn from(e: TransversalError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Internal(format!("serialization failed: {e}"))
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(format!("i/o error: {e}"))
    }
}
