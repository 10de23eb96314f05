use thiserror::Error;

/// Errors raised by the library.
///
/// [`Error::Parse`] is reserved for malformed input (bad syntax, unreadable
/// documents); every other variant reports a well-formed request that violates
/// a mathematical precondition.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension {got}: {reason}")]
    InvalidDimension { got: usize, reason: String },

    #[error("generator index {index} out of range 1..={max}")]
    GeneratorIndex { index: usize, max: usize },

    #[error("expected {expected} angles, got {got}")]
    AngleCount { expected: usize, got: usize },

    #[error("U(N) element requires the U(1) phase beta")]
    MissingBeta,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("range convention mismatch: {0}")]
    ConventionMismatch(String),

    #[error("kernel factors overlap on angle slot {0}; cannot factorize")]
    OverlappingFactors(usize),

    #[error("angle slot {0} is not present in the range template")]
    MissingRange(usize),

    #[error("point too close to the chart boundary at coordinate {coord} (margin {margin:e})")]
    NearBoundary { coord: usize, margin: f64 },

    #[error("non-finite result: {0}")]
    NonFinite(String),

    #[error("value outside declared range: {0}")]
    OutOfRange(String),

    #[error("rejection sampling gave up after {0} attempts")]
    RejectionCap(usize),

    #[error("not unitary: {0}")]
    NotUnitary(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn dim(got: usize, reason: impl Into<String>) -> Self {
        Error::InvalidDimension {
            got,
            reason: reason.into(),
        }
    }

    /// True when the error reports malformed input rather than a violated
    /// precondition.
    pub fn is_malformed_input(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
