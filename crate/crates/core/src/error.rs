use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("polyhedron is empty")]
    EmptyPolyhedron,

    #[error("no finite matching")]
    NoFiniteMatching,

    #[error("rank budget exceeded: {rows}x{cols} matrix, bound {bound}")]
    RankBudgetExceeded { rows: usize, cols: usize, bound: usize },

    #[error("grid too large: {size} monomials exceeds budget {budget}")]
    GridTooLarge { size: u64, budget: u64 },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("k below construction threshold: k = {k}, C = {threshold}")]
    BelowThreshold { k: u32, threshold: u32 },

    #[error("prevariety is not one-dimensional: {0}")]
    NotOneDimensional(String),

    #[error("invalid value `{value}`: {reason}")]
    InvalidValue { value: String, reason: String },

    #[error("malformed model at {field}: {reason}")]
    Parse { field: String, reason: String },

    #[error("construction failed: {0}")]
    Construction(String),
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
