//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} features, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid hyperparameters: {0}")]
    InvalidParams(String),

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("unknown class label `{0}`")]
    UnknownLabel(String),

    #[error("atom `{0}` is not part of the feature index")]
    AtomOutsideSchema(String),

    #[error("{free} free variables exceed the permutation cap of {cap}")]
    TooManyFreeVariables { free: usize, cap: usize },

    #[error("relation `{0}` has arity zero")]
    ZeroArity(String),

    #[error("relation `{name}` used with arity {found}, declared with {expected}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("program is not stratifiable: relation `{0}` depends negatively on itself")]
    NotStratifiable(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("sentence `{0}` matches no template")]
    NoTemplate(String),

    #[error("sentence `{sentence}` matches {count} templates")]
    AmbiguousTemplate { sentence: String, count: usize },

    #[error("malformed instance: {0}")]
    MalformedInstance(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unmapped label `{0}`")]
    UnmappedLabel(String),

    #[error("model has not been trained: every automaton still sits at the action boundary")]
    Untrained,

    #[error("model format: {0}")]
    Model(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
