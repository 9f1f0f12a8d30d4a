use thiserror::Error;

/// Errors raised by the arithmetic layer and the verification checkers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: String, modulus: String },

    #[error("denominator of {value} is divisible by p = {p}")]
    DenominatorDivisibleByP { value: String, p: u64 },

    #[error("{value} is not coprime to p = {p}")]
    NotCoprime { value: String, p: u64 },

    #[error("residues from different contexts ({lhs} and {rhs}) cannot be combined")]
    ContextMismatch { lhs: String, rhs: String },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime {0} is below the admissible minimum 5")]
    PrimeTooSmall(u64),

    #[error("precision exponent must be at least 1")]
    ZeroPrecision,

    #[error("residue class <a>_p = {residue} is even, check requires odd")]
    EvenResidueClass { residue: u64 },

    #[error("residue class <a>_p = {residue} is odd, check requires even")]
    OddResidueClass { residue: u64 },

    #[error("{0} is not one of -1/2, -1/3, -1/4, -1/6")]
    NotSpecialValue(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid hypergeometric parameters: {0}")]
    InvalidSeries(String),

    #[error("unknown check id `{0}`")]
    UnknownCheck(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
