use thiserror::Error;

/// Errors raised by the network, style, sequence and estimator layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("player id {0} out of range (expected 1..=11)")]
    InvalidPlayerId(i64),

    #[error("incomplete edge set: missing teammate {0}")]
    MissingTeammate(u8),

    #[error("unexpected edge to player {0}")]
    UnexpectedTeammate(u8),

    #[error("holder cannot be marked unavailable")]
    HolderMarked,

    #[error("no edge from the holder to itself (player {0})")]
    SelfEdge(u8),

    #[error("{field} = {value} out of range for player {id}")]
    EdgeValueOutOfRange {
        field: &'static str,
        value: f64,
        id: u8,
    },

    #[error("{field} = {value} out of range")]
    ValueOutOfRange { field: &'static str, value: f64 },

    #[error("edge vector has arity {got}, network expects {expected}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("network arity must be at least 1")]
    ZeroArity,

    #[error("invalid style {0:?}: {1}")]
    InvalidStyle(String, &'static str),

    #[error("malformed possession sequence: {0}")]
    MalformedSequence(String),

    #[error("estimator `{estimator}` produced {value}, outside its valid range")]
    EstimatorOutOfBounds { estimator: &'static str, value: f64 },

    #[error("invalid match state: {0}")]
    InvalidState(String),

    #[error("{0} must not be empty")]
    Empty(&'static str),
}

pub type Result<T> = std::result::Result<T, ModelError>;
