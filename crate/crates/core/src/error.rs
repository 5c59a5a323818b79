use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension {dim}: {reason}")]
    InvalidDimension { dim: usize, reason: String },

    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    #[error("no factor labelled `{0}` in layout")]
    UnknownFactor(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("layout mismatch between operator and state")]
    LayoutMismatch,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("model requires factor `{0}` which the layout does not provide")]
    MissingFactor(String),

    #[error("truncation too small: {reason}; need dim >= {required}")]
    TruncationTooSmall { required: usize, reason: String },

    #[error("truncation inadequate for mode `{mode}`: tail population {population:.3e} at tau = {tau}")]
    TruncationInadequate { mode: String, population: f64, tau: f64 },

    #[error("integration unstable at tau = {tau}: {reason}; try a smaller dt")]
    IntegrationInstability { tau: f64, reason: String },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("singular parameters: {0}")]
    SingularParameters(String),

    #[error("non-uniform sampling: {0}")]
    NonUniformSampling(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
