use thiserror::Error;

/// Errors raised by the order-theoretic constructions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("element index {index} out of range for a preorder with {len} elements")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("{what} would need {size} elements, above the configured limit of {limit}")]
    SizeLimitExceeded {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("the preorder is not antisymmetric")]
    NotAPoset,

    #[error("a directed subset has no supremum")]
    MissingDirectedSup,

    /// An adjoint that must exist by construction could not be found. This is
    /// always an internal bug, never a property of the input.
    #[error("adjoint missing: {0}")]
    AdjointMissing(String),

    #[error("invalid object: {0}")]
    Invalid(String),
}

pub type Result<T, E = OrderError> = std::result::Result<T, E>;

pub(crate) fn shape(msg: impl Into<String>) -> OrderError {
    OrderError::ShapeMismatch(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> OrderError {
    OrderError::Invalid(msg.into())
}
