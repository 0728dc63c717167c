use thiserror::Error;

use crate::signal::Channel;

/// Errors raised by the signal, feature, search, and scoring routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("expected a {expected} recording, got {found}")]
    InvalidChannel { expected: Channel, found: Channel },

    #[error("degenerate peak shape: {0}")]
    DegenerateShape(String),

    #[error("invalid segment: {0}")]
    InvalidSegment(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("singular design matrix; use a positive ridge penalty")]
    SingularDesign,

    #[error("{0} features exceed the exact Shapley limit of {max}", max = crate::attribution::MAX_EXACT_FEATURES)]
    TooManyFeatures(usize),

    #[error("invalid survey response: {0}")]
    InvalidResponse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
