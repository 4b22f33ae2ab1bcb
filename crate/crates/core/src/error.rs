use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid setting: {0}")]
    InvalidSetting(String),

    #[error("point lies on the pole set: {0}")]
    SingularPoint(String),

    #[error("divergent integral: {0}")]
    DivergentIntegral(String),

    #[error("syntax error at byte {position}: expected {expected}")]
    Syntax { position: usize, expected: String },

    #[error("semantic error: {0}")]
    Semantic(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
