use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus: {0}")]
    Modulus(String),

    #[error("element belongs to a different group suite")]
    SuiteMismatch,

    #[error("depth error: requested level {requested} but the hierarchy has depth {max}")]
    Depth { requested: usize, max: usize },

    #[error("key is already at the maximal depth {0}; it cannot be delegated further")]
    DepthExhausted(usize),

    #[error("dimension mismatch for {what}: expected {expected}, got {got}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("identity outside the identity space: {0}")]
    Identity(String),

    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("encoding error: {0}")]
    Encoding(String),

    #[error("malformed structure: {0}")]
    Structure(String),

    #[error("operation needs the {0} variant of the scheme")]
    Variant(&'static str),

    #[error("container error: {0}")]
    Container(String),

    #[error("invalid adversary: {0}")]
    InvalidAdversary(String),
}

impl Error {
    pub(crate) fn dim(what: &'static str, expected: usize, got: usize) -> Self {
        Error::Dimension { what, expected, got }
    }
}
