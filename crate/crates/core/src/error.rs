use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime power in 2..=256")]
    NotPrimePower(u32),
    #[error("matrix entry {entry} is not an element of GF({q})")]
    EntryOutOfRange { entry: u32, q: u32 },
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("subspaces live in different ambient spaces")]
    AmbientMismatch,
    #[error("rank {rank} of basis does not match declared dimension {declared}")]
    RankMismatch { declared: usize, rank: usize },
    #[error("enumeration budget exceeded: {what} ({size} > {limit})")]
    BudgetExceeded {
        what: &'static str,
        size: String,
        limit: String,
    },
    #[error("member of dimension {dim} lies below the requested shadow dimension {u}")]
    DimensionOrderViolation { dim: usize, u: usize },
    #[error("family members do not share a common dimension")]
    MixedDimensions,
    #[error("cannot take the shade of the top layer")]
    TopLayer,
    #[error("family is empty")]
    EmptyFamily,
    #[error("negative argument")]
    NegativeArgument,
    #[error("size must be at least 1")]
    SizeZero,
    #[error("m + l = {sum} exceeds n = {n}")]
    DimensionOverflow { sum: usize, n: usize },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("bad anchor: {0}")]
    BadAnchor(String),
    #[error("parameters out of range: {0}")]
    ParametersOutOfRange(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
