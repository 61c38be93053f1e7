use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ground size mismatch: expected {expected}, found {found}")]
    GroundMismatch { expected: usize, found: usize },

    #[error("element {element} lies outside the ground set [{ground}]")]
    ElementOutOfRange { element: usize, ground: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("{0} is not a prime modulus in [2, 251]")]
    NotPrime(u64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("product {product} has an empty part in coordinate {coordinate}")]
    EmptyPart { product: usize, coordinate: usize },

    #[error("catalog of {size} products exceeds the cap of {cap}")]
    CatalogTooLarge { size: u128, cap: usize },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("{location}: {message}")]
    Format { location: String, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParameters(msg.into())
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn format(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            location: location.into(),
            message: message.into(),
        }
    }
}
