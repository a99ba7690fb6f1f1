use thiserror::Error;

use crate::code::Codeword;
use crate::construction::ConstructionReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("{0}")]
    Domain(String),

    #[error("symbol {symbol} is outside the alphabet of size {q}")]
    Symbol { symbol: u64, q: u32 },

    #[error("duplicate codeword {0}")]
    DuplicateCodeword(Codeword),

    #[error("invalid grouping: {0}")]
    Grouping(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("{what} requires {size} items, over the limit of {limit}")]
    Capacity { what: String, size: u128, limit: u128 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("construction infeasible: {reason}")]
    Infeasible {
        reason: String,
        report: Box<ConstructionReport>,
    },
}

impl Error {
    pub(crate) fn capacity(what: impl Into<String>, size: u128, limit: u128) -> Self {
        Error::Capacity {
            what: what.into(),
            size,
            limit,
        }
    }
}
