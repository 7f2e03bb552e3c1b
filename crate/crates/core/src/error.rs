use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error in `{input}`: {message}")]
    Parse { input: String, message: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("invalid description: {0}")]
    Description(String),

    /// A table or derivation is incompatible with the relations of the base
    /// algebra, or otherwise malformed.
    #[error("structure error: {0}")]
    Structure(String),

    #[error("completion did not converge: {0}")]
    Completion(String),

    /// The input is outside what a windowed computation can handle soundly.
    #[error("refused: {0}")]
    Refused(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
