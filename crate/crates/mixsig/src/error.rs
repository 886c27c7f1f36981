use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("signature mismatch between operands")]
    SignatureMismatch,

    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("basis is rank deficient at the working tolerance")]
    RankDeficient,

    #[error("invalid field description: {0}")]
    InvalidField(String),

    #[error("defining polynomial has repeated roots")]
    RepeatedRoots,

    #[error("trace form determinant is not an integer; integral basis is inconsistent")]
    NonIntegralDiscriminant,

    #[error("element is not a unit: {0}")]
    NotAUnit(String),

    #[error("operation not applicable: {0}")]
    NotApplicable(String),

    #[error("enumeration budget of {budget} nodes exceeded")]
    EnumerationBudget { budget: u64 },

    #[error("floating point precision exhausted; raise the mantissa bits")]
    PrecisionExhausted,

    #[error("bound is vacuous: homogeneous minimum is zero with s > 0")]
    VacuousBound,

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("malformed catalog: {0}")]
    MalformedCatalog(String),

    #[error("field {0:?} not present in catalog")]
    UnknownField(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
