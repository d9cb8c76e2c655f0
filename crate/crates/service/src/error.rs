use thiserror::Error;

/// Failure of a service command. Each variant maps to one machine-readable code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ServiceError {
    #[error("{0}")]
    StateViolation(String),
    #[error("{0}")]
    Range(String),
    #[error("{0}")]
    Duplicate(String),
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    Conflict(String),
    #[error("{0}")]
    InvalidRequest(String),
    #[error("{0}")]
    Internal(String),
}

impl ServiceError {
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::StateViolation(_) => "state_violation",
            ServiceError::Range(_) => "range_error",
            ServiceError::Duplicate(_) => "duplicate",
            ServiceError::NotFound(_) => "not_found",
            ServiceError::Conflict(_) => "conflict",
            ServiceError::InvalidRequest(_) => "invalid_request",
            ServiceError::Internal(_) => "internal",
        }
    }
}
