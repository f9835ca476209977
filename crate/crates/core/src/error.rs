use thiserror::Error;

/// Errors produced by ring arithmetic, algebra construction and the analyses.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ring descriptor: {field}: {reason}")]
    InvalidRing { field: &'static str, reason: String },

    #[error("value {value} is not an element of {ring}")]
    ForeignValue { ring: String, value: String },

    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: String, right: String },

    #[error("cannot parse ring value for {ring}: {reason}")]
    ValueParse { ring: String, reason: String },

    #[error("enumeration requires finite ring")]
    InfiniteRing,

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("elements belong to different algebras")]
    AlgebraMismatch,

    #[error("exponent must be at least 1")]
    ZeroExponent,

    #[error("bound must be positive")]
    ZeroBound,

    #[error("basis indices do not span an ideal: x{left}*x{right} has coefficient on x{escaped}")]
    NotAnIdeal { left: usize, right: usize, escaped: usize },

    #[error("plenary power cap {cap} exceeded (support size {support} at the cap)")]
    CapExceeded { cap: usize, support: usize },

    #[error("bound only proven for square-zero nu")]
    NotSquareZero,

    #[error("nu must be nilpotent in the coefficient ring")]
    NonNilpotentRule,

    #[error("guard exceeded: {work} units of work, guard is {guard}")]
    GuardExceeded { work: String, guard: u64 },

    #[error("{0} requires a finite coefficient ring or an iteration bound")]
    NeedsBound(&'static str),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
