use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("valuation of zero is undefined")]
    UndefinedValuation,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("expansion point {0} is a pole")]
    ExpansionAtPole(String),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("malformed rational literal {0:?}")]
    BadRational(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("pole divisor does not cover the poles of the matrix: {0}")]
    PoleDivisor(String),
    #[error("base point {0} is a singular point of the system")]
    SingularPoint(String),
    #[error("multiplier does not clear the poles of the system matrix")]
    NonIntegralDerivation,
    #[error("pairing mismatch: {0}")]
    PairingMismatch(String),
    #[error("no data supplied")]
    NoData,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("series does not define an entire function (coefficients do not decay factorially)")]
    NotEntire,
    #[error("vanishing problem is over-constrained: {constraints} constraints for {unknowns} unknowns")]
    OverConstrained { constraints: usize, unknowns: usize },
    #[error("inconsistent germ data: {0}")]
    GermData(String),
    #[error("trivial input: {0}")]
    TrivialInput(String),
    #[error("vanishing order saturated at truncation {0}; increase the truncation order")]
    InsufficientTruncation(usize),
    #[error("no non-vanishing wedge with indices up to {0}")]
    BoundTooSmall(usize),
    #[error("inconclusive relation search: {0}")]
    InconclusiveSearch(String),
    #[error("incomplete hypotheses: missing {0}")]
    IncompleteHypotheses(String),
    #[error("evaluation at a singular point of the exhaustion function")]
    ExhaustionSingularity,
    #[error("level set for r = {0} could not be resolved (r too small)")]
    RTooSmall(f64),
    #[error("symbolic domain error: {0}")]
    SymbolicDomain(String),
    #[error("loop passes too close to the singular point {0}")]
    PathError(String),
    #[error("integration did not converge: {0}")]
    Stiffness(String),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
