use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p = {0} is not prime")]
    NonPrime(u64),
    #[error("field size {size} exceeds the configured bound {bound}")]
    FieldTooLarge { size: u128, bound: u128 },
    #[error("invalid modulus: {0}")]
    BadModulus(String),
    #[error("modulus is reducible over F_{p}")]
    ReducibleModulus { p: u64 },
    #[error("the residue of x does not generate the multiplicative group")]
    NonPrimitiveModulus,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("bad dimensions: {0}")]
    BadShape(String),
    #[error("generator matrix is rank deficient")]
    RankDeficient,
    #[error("generator rows are dependent over the prime field")]
    DependentRows,
    #[error("no choice of {k} coordinates supports a block standard form")]
    NotStandardizable { k: usize },
    #[error("enumeration needs {needed} words, budget is {budget}")]
    EnumerationBudget { needed: u128, budget: u128 },
    #[error("table is not a bijection of the field")]
    NotBijective,
    #[error("map is not additive: fails at x = {x}, y = {y}")]
    NotAdditive { x: String, y: String },
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("all columns have weight one; the repetition branch applies")]
    AllColumnsWeightOne,
    #[error("extraction does not cover this witness shape: {0}")]
    UnsupportedWitness(String),
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
