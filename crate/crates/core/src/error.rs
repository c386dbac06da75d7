use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unsupported party count {got}: operation requires {required} parties")]
    UnsupportedArity { got: usize, required: usize },

    #[error("invalid bipartition: {0}")]
    InvalidCut(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("POVM effects do not sum to the identity (deviation {0:.3e})")]
    IncompletePovm(f64),

    #[error("operator {index} is not unitary (deviation {deviation:.3e})")]
    NotUnitary { index: usize, deviation: f64 },

    #[error("invalid probability vector: {0}")]
    BadProbabilities(String),

    #[error("operator is not a witness: product-state minimum {0:.3e}")]
    NotAWitness(f64),

    #[error("witnesses are incomparable: test operators differ")]
    Incomparable,

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// Prefixes the message with the offending field, keeping the variant.
    pub fn in_field(self, field: &str) -> Error {
        match self {
            Error::DimensionMismatch(m) => Error::DimensionMismatch(format!("{field}: {m}")),
            Error::InvalidCut(m) => Error::InvalidCut(format!("{field}: {m}")),
            Error::InvalidArgument(m) => Error::InvalidArgument(format!("{field}: {m}")),
            Error::BadProbabilities(m) => Error::BadProbabilities(format!("{field}: {m}")),
            Error::Numerical(m) => Error::Numerical(format!("{field}: {m}")),
            other => Error::InvalidArgument(format!("{field}: {other}")),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
