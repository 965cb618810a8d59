use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unsupported root system type: {0}")]
    UnsupportedType(String),
    #[error("Weyl group has more than {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("lattice mismatch: rank {left} vs rank {right}")]
    LatticeMismatch { left: usize, right: usize },
    #[error("denominator vanishes")]
    DenominatorZero,
    #[error("|P/P^m| = {size} exceeds the cap {cap}")]
    CosetGroupTooLarge { size: usize, cap: usize },
    #[error("weight {0} is not in the fundamental set C")]
    NotInC(String),
    #[error("weight {0} is not dominant")]
    NotDominant(String),
    #[error("internal consistency check failed: {0}")]
    InternalMismatch(String),
    #[error("weight {0} is not in the required lattice")]
    NotInLattice(String),
    #[error("support closure exceeded the cap of {cap} monomials")]
    ClosureCapExceeded { cap: usize },
    #[error("joint eigenspace has dimension {dim}, expected 1")]
    NonUniqueEigenvector { dim: usize },
    #[error("coefficient of the leading monomial vanishes")]
    NormalizationFailure,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("rational function is not a Laurent polynomial")]
    NotPolynomial,
    #[error("{count} fixture entries differ: {entries}")]
    FixtureMismatch { count: usize, entries: String },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
