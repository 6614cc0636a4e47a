use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a compact set needs at least one interval")]
    EmptySet,
    #[error("interval [{lo}, {hi}] has lo > hi")]
    BadInterval { lo: String, hi: String },
    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(String),
    #[error("list of summands is empty")]
    EmptyList,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: String,
        range: &'static str,
    },
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("values must be sorted in descending order")]
    NotSorted,
    #[error("values must be non-negative")]
    Negative,
    #[error("k = {k} exceeds the enumeration cap {max}")]
    KTooLarge { k: usize, max: usize },
    #[error("k = {k} is below the minimum {min}")]
    KTooSmall { k: usize, min: usize },
    #[error("invalid fractional partition: {0}")]
    InvalidPartition(String),
    #[error("every set is a single point")]
    AllSingletons,
    #[error("set function has no value for subset {0}")]
    MissingSubset(String),
    #[error("set function must vanish on the empty set")]
    NonZeroEmptyValue,
    #[error("ground set size {m} exceeds the cap {max}")]
    GroundSetTooLarge { m: usize, max: usize },
    #[error("inputs must be non-negative")]
    NegativeInput,
    #[error("point is not a member of the region")]
    NotMember,
    #[error("piece {{1,2}} is empty when max(c1, c2) = 0")]
    DegenerateM,
    #[error("need 0 < alpha13 <= alpha23 < alpha123")]
    BadOrdering,
    #[error("dimension must be at least {min}, got {n}")]
    DimensionTooSmall { n: usize, min: usize },
    #[error("invalid fractal spec: {0}")]
    BadSpec(String),
    #[error("digit sum k + l = {sum} exceeds N - 1 = {max}")]
    DigitOverflow { sum: usize, max: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {0:?} as a rational number")]
    ParseRational(String),
    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
