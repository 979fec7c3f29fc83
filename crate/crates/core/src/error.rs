use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Precision exhaustion is reported as an error only where a result cannot be
/// returned at all (an uncertifiable integer choice). Wide-but-valid
/// enclosures travel as values tagged with [`crate::numkernel::PrecisionStatus`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision exhausted at {bits} bits: {what}")]
    PrecisionExhausted { bits: u32, what: String },

    #[error("requested {requested} bits exceeds the hard ceiling of {ceiling} bits")]
    ResourceLimit { requested: u32, ceiling: u32 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("argument order: {0}")]
    ArgumentOrder(String),

    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("term {index} exceeds the digit budget of {budget} decimal digits ({digits} digits)")]
    DigitBudget {
        index: usize,
        digits: u64,
        budget: u64,
    },

    #[error("index {index} out of range (expansion has {len} terms)")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("continued fraction expansion stopped after {certified} certified terms")]
    ExpansionExhausted { certified: usize },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
