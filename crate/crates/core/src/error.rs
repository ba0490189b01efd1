use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u32),

    #[error("linear system has no solution")]
    NoSolution,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("cannot factor the zero polynomial")]
    ZeroPolynomial,

    #[error("internal contract violation: {0}")]
    InternalContractViolation(String),

    #[error("vertex {from} is not below vertex {to}")]
    NotComparable { from: String, to: String },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("composite of mono and retraction is not the identity")]
    NotARetraction,

    #[error("representation has a projective direct summand")]
    HasProjectiveSummand,

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("chase exceeded its step bound {bound} after {steps} steps")]
    ChaseExhausted { steps: usize, bound: u128 },

    #[error("subspace V{0} is not T-invariant (offending generator {1:?})")]
    NotInvariant(usize, Vec<u32>),

    #[error("subspace V1 is not contained in V{0} (offending generator {1:?})")]
    NotNested(usize, Vec<u32>),

    #[error("representation fails validation: {0}")]
    Invalid(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
