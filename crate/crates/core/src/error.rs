use thiserror::Error;

use crate::linalg::{format_vector, IntVector};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The cone contains a line; the payload is a nonzero vector of the lineality space.
    #[error("cone is not pointed: lineality space contains ({})", format_vector(.0))]
    NotPointed(IntVector),

    #[error("no grading: the extreme integral generators do not lie on a common integral hyperplane")]
    NoGrading,

    #[error("parse error at line {line}: {message} (token `{token}`)")]
    Parse {
        line: usize,
        token: String,
        message: String,
    },

    #[error("incomplete result: {0} is missing")]
    IncompleteResult(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn parse(line: usize, token: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            token: token.into(),
            message: message.into(),
        }
    }
}
