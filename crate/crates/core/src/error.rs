use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree overflow: product of degree {degree} exceeds bound {bound}")]
    DegreeOverflow { degree: usize, bound: usize },
    #[error("inconsistent presentation: 1 reduces to 0 at degree bound {0}")]
    InconsistentPresentation(usize),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("Jacobi identity fails for generators ({0}, {1}, {2})")]
    JacobiFailure(usize, usize, usize),
    #[error("not a central extension: {0}")]
    NotCentralExtension(String),
    #[error("preimage mismatch: {0}")]
    PreimageMismatch(String),
    #[error("lifted presentation collapses: {0}")]
    LiftInconsistent(String),
    #[error("not a morphism: {0}")]
    NotAMorphism(String),
    #[error("not filtered: {0}")]
    NotFiltered(String),
    #[error("symbol is zero in gr_1")]
    ZeroSymbol,
    #[error("hypothesis failure: {0}")]
    HypothesisFailure(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("closure exceeds bound {0}")]
    NotClosed(usize),
    #[error("not a module: {0}")]
    NotAModule(String),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("zero modulus in group specification")]
    ZeroModulus,
    #[error("instance size {size} exceeds budget {budget}")]
    BudgetExceeded { size: usize, budget: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
