use thiserror::Error;

/// Errors produced by the algebra, counting, and rank routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("particle count mismatch: {left} vs {right}")]
    ParticleCountMismatch { left: usize, right: usize },

    #[error("scalar mode mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("enumeration guard exceeded: {count} items (limit {limit})")]
    GuardExceeded { count: String, limit: u64 },

    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("column {column} is not tail-symmetric")]
    NotTailSymmetric { column: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("numeric overflow: {0}")]
    Overflow(String),
}

impl Error {
    /// Stable machine-readable code used by the CLI and the C API.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ParticleCountMismatch { .. } => "particle-count-mismatch",
            Error::FieldMismatch { .. } => "field-mismatch",
            Error::DimensionMismatch(_) => "dimension-mismatch",
            Error::Domain(_) => "domain",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::GuardExceeded { .. } => "enumeration-guard",
            Error::ResourceGuard(_) => "resource-guard",
            Error::NotTailSymmetric { .. } => "not-tail-symmetric",
            Error::Parse(_) => "parse",
            Error::Overflow(_) => "overflow",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
