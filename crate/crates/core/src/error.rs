use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("display precision must be at least 1")]
    ZeroPrecision,

    #[error("radicand {0} is not a square-free integer greater than 1")]
    InvalidRadicand(u64),

    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("malformed permutation {0:?}")]
    MalformedPermutation(Vec<usize>),

    #[error("step vector must contain at least one step")]
    EmptySteps,

    #[error("duplicate interpolation node {0}")]
    DuplicateNode(String),

    #[error("{nodes} nodes but {values} values")]
    LengthMismatch { nodes: usize, values: usize },

    #[error("vanishing hypothesis fails at x = {at}: difference is {value}")]
    VanishingHypothesisViolation { at: String, value: String },

    #[error("degenerate interval ({a}, {b})")]
    DegenerateInterval { a: String, b: String },

    #[error("step {step} still lies inside the excluded ball")]
    StepStillInsideBall { step: String },

    #[error("certificate would need {needed} instances, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: usize },

    #[error("hypothesis domains mix real and p-adic coordinates")]
    MixedScalarFamilies,

    #[error("unsupported step domain: {0}")]
    UnsupportedDomain(String),

    #[error("unknown suite {0:?}")]
    UnknownSuite(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
