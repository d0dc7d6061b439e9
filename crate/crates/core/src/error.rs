use crate::gf::Gf2Poly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("modulus must have degree {degree} and a nonzero constant term")]
    BadModulus { degree: usize },
    #[error("modulus is reducible over GF(2); factor {factor}")]
    ReducibleModulus { factor: Gf2Poly },
    #[error("M_{p}(x) is reducible; factor {factor}")]
    MpReducible { p: usize, factor: Gf2Poly },
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operand does not belong to this field context")]
    ContextMismatch,
    #[error("length {n} exceeds the order {order} of the generator")]
    LengthExceedsOrder { n: usize, order: u64 },
    #[error("redundancy {u} exceeds length {n}")]
    RedundancyExceedsLength { u: usize, n: usize },
    #[error("profile entries must be non-decreasing (position {position})")]
    NotSorted { position: usize },
    #[error("profile entry {entry} at position {position} exceeds n = {n}")]
    EntryExceedsN { position: usize, entry: usize, n: usize },
    #[error("profile must have at least one entry")]
    EmptyProfile,
    #[error("profile must have at least one entry below n")]
    NoDataRows,
    #[error("grid has erasures")]
    HasErasures,
    #[error("grid shape {got:?} does not match {expected:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("expected {expected} data symbols, got {got}")]
    WrongDataLength { expected: usize, got: usize },
    #[error("the interval for a is empty")]
    EmptyRange,
    #[error("parameters out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("generator order {order} is below the required {required}")]
    OrderTooSmall { order: u64, required: u64 },
    #[error("field degree {degree} is below the required {required}")]
    FieldTooSmall { degree: usize, required: usize },
    #[error("search space of {patterns} patterns exceeds the limit {limit}")]
    TooLarge { patterns: u128, limit: u128 },
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
