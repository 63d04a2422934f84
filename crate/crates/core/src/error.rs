use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: String,
        expected: String,
        found: String,
    },

    #[error("{what} is singular (condition estimate {cond:.3e})")]
    Singular { what: String, cond: f64 },

    #[error("{what} is not symmetric positive definite")]
    NotSpd { what: String },

    #[error("invalid CF partition: {0}")]
    InvalidPartition(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid relaxation: {0}")]
    InvalidRelaxation(String),

    #[error("no compatible {solved} exists for this {given}: {source}")]
    NoCompatible {
        solved: &'static str,
        given: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("ideal companion undefined for this splitting: {source}")]
    CompanionUndefined {
        #[source]
        source: Box<Error>,
    },

    #[error("R and P incompatible with A on this splitting: {source}")]
    IncompatiblePair {
        #[source]
        source: Box<Error>,
    },

    #[error("eigenvalue iteration did not converge for {0}")]
    NoConvergence(String),

    #[error("matrix parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dims(
        context: impl Into<String>,
        expected: impl Into<String>,
        found: impl Into<String>,
    ) -> Self {
        Error::DimensionMismatch {
            context: context.into(),
            expected: expected.into(),
            found: found.into(),
        }
    }
}
