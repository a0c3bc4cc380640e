use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probability {value} for {what} is outside [0, 1]")]
    ProbabilityOutOfRange { what: String, value: f64 },

    #[error("interval ({lo}, {hi}) for {what} is incoherent: need 0 <= lo <= hi <= 1")]
    IncoherentInterval { what: String, lo: f64, hi: f64 },

    #[error("incoherent credal set: {0}")]
    IncoherentCredalSet(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("distribution sums to {sum}, expected 1")]
    NotNormalized { sum: f64 },

    #[error("pessimism index alpha = {0} is outside [0, 1]")]
    AlphaOutOfRange(f64),

    #[error("{name} = {value} must be a finite non-negative weight")]
    NegativeWeight { name: &'static str, value: f64 },

    #[error("non-finite value for {0}")]
    NonFinite(String),

    #[error("person index {index} out of range for {count} persons")]
    PersonIndexOutOfRange { index: usize, count: usize },

    #[error("person sets differ: {left:?} vs {right:?}")]
    PersonSetMismatch { left: Vec<String>, right: Vec<String> },

    #[error("cost c = {0} is outside [0, 15)")]
    CostOutOfRange(f64),

    #[error("prospect has no states")]
    EmptyProspect,

    #[error("invalid payoff schedule: {0}")]
    InvalidPayoffs(String),

    #[error("n_samples must be at least 1")]
    ZeroSamples,

    #[error("empty grid: {0}")]
    EmptyGrid(String),

    #[error("invalid grid spec: {0}")]
    InvalidGrid(String),

    #[error("scenario schema error: {0}")]
    Schema(String),

    #[error("malformed decision tree: {0}")]
    MalformedTree(String),

    #[error("unknown section {0}; expected 3 or 4")]
    UnknownSection(u8),
}

impl Error {
    /// Process exit code for the CLI: 2 for malformed input, 3 for
    /// values outside their numeric domain.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Schema(_)
            | Error::IncoherentInterval { .. }
            | Error::IncoherentCredalSet(_)
            | Error::LengthMismatch { .. }
            | Error::NotNormalized { .. }
            | Error::EmptyProspect
            | Error::PersonSetMismatch { .. }
            | Error::InvalidGrid(_)
            | Error::MalformedTree(_)
            | Error::UnknownSection(_) => 2,
            _ => 3,
        }
    }
}
