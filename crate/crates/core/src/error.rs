use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A constructed object violates its invariants.
    #[error("validation error: {0}")]
    Validation(String),
    /// A spec string failed to parse; `token` names the offending piece.
    #[error("cannot parse `{token}`: {reason}")]
    Parse { token: String, reason: String },
    /// The Luxemburg infimum does not exist (modular diverges near the diagonal).
    #[error("field is not in the space: {0}")]
    NotInSpace(String),
    /// Sampling produced an inconsistent estimate; more samples are needed.
    #[error("internal estimation error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(token: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        token: token.to_string(),
        reason: reason.into(),
    }
}
