use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("backend mismatch: cannot compare {0} with {1}")]
    BackendMismatch(&'static str, &'static str),

    #[error("invalid prime: {0}")]
    InvalidPrime(String),

    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    #[error("submodule is not proper (equals the ambient module)")]
    NotProper,

    #[error("{line}:{col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("prime {prime} is not a maximal associated prime: {reason}")]
    NotRegular { prime: String, reason: String },

    #[error("filtration step cap of {0} exceeded")]
    StepCapExceeded(usize),

    #[error("interchange precondition failed: {0}")]
    InterchangePrecondition(String),

    #[error("inadmissible prime order: {0}")]
    InadmissibleOrder(String),

    #[error("prime order is not realizable: {0}")]
    NotRealizable(String),

    #[error("inputs not comparable: {0}")]
    NotComparable(String),

    #[error("oracle bound exceeded: module has {size} elements, bound is {bound}")]
    OracleBound { size: usize, bound: usize },

    #[error("internal verification failure: {0}")]
    Verification(String),
}
