use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("invalid register shape: {0}")]
    InvalidShape(String),

    #[error("leading block is not orthonormal (max Gram deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("invalid label: {0}")]
    InvalidLabel(String),

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("invalid resource: {0}")]
    InvalidResource(String),

    #[error("protocol requires full Schmidt rank (min lambda {min_lambda:e})")]
    RankDeficient { min_lambda: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("probe set is degenerate: outcome {outcome} accepts both {first} and {second}")]
    DegenerateProbes {
        outcome: usize,
        first: String,
        second: String,
    },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Process exit code: 2 for usage/configuration, 3 for a domain
    /// precondition, 4 for an internal invariant violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::RankDeficient { .. } | Error::Precondition(_) => 3,
            Error::Invariant(_) | Error::NotOrthonormal { .. } | Error::DegenerateProbes { .. } => {
                4
            }
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
