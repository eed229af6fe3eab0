use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not positive")]
    InvalidModulus(i64),

    #[error("element has {got} coordinates but the group has rank {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("residue {residue} at coordinate {coord} is outside [0, {modulus})")]
    ResidueOutOfRange { coord: usize, residue: i64, modulus: u64 },

    #[error("multiplicity {0} must be at least 1")]
    InvalidMultiplicity(i64),

    #[error("sequences belong to different groups")]
    GroupMismatch,

    #[error("{n1} does not divide {n2}")]
    NotDivisible { n1: u64, n2: u64 },

    #[error("{0} must be at least 2")]
    TooSmall(u64),

    #[error("{d} does not divide every modulus of the group")]
    BadProjection { d: u64 },

    #[error("translation symmetry requires every target length to be a multiple of the group exponent")]
    TranslationNotAnnihilated,

    #[error("length {k} is outside [0, {len}]")]
    LengthOutOfRange { k: usize, len: usize },

    #[error("oracle refused: {combos} multiplicity combinations exceed the limit of {limit}")]
    OracleTooLarge { combos: u128, limit: u128 },

    #[error("no modular inverse of {a} modulo {m}")]
    NoInverse { a: u64, m: u64 },

    #[error("no theorem applies: {0}")]
    NoTheorem(String),

    #[error("no ceiling available for the modified constant; supply one explicitly")]
    MissingCeiling,

    #[error("a counterexample exists at the ceiling length {ceiling}; the ceiling is unsound")]
    CeilingUnsound { ceiling: usize },

    #[error("search inconclusive: orbit budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
