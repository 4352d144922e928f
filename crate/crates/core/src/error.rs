use thiserror::Error;

use crate::set::FactorForm;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("factor form mismatch: {left:?} vs {right:?}")]
    FormMismatch { left: FactorForm, right: FactorForm },

    #[error("enumeration cap exceeded: {needed} nodes required, cap is {cap}")]
    EnumerationCapExceeded { needed: u128, cap: u64 },

    #[error("union of an empty list")]
    EmptyList,

    #[error("linear objective is unbounded or not finite over the relaxation")]
    UnboundedDirection,

    #[error("RLT level {level} out of range 1..={max}")]
    LevelOutOfRange { level: usize, max: usize },

    #[error("index sets overlap (mask {0:#b})")]
    OverlappingIndexSets(u64),

    #[error("simplex breakdown: {0}")]
    NumericalFailure(String),

    #[error("set is empty")]
    EmptySet,

    #[error("empty interval [{lo}, {hi}]")]
    EmptyInterval { lo: f64, hi: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn check_dim(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context,
            expected,
            found,
        })
    }
}
