use thiserror::Error;

use crate::syntax::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("no {kind} named `{name}` in the corpus")]
    UnknownName { kind: String, name: String },
    #[error("arity mismatch for `{symbol}`: expected {expected}, got {got}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        got: usize,
    },
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("variable x{index} is not bound by an environment of length {len}")]
    UnboundVariable { index: usize, len: usize },
    #[error("{what}: {count} candidates exceed the budget of {budget}")]
    BudgetExceeded {
        what: String,
        count: u128,
        budget: u128,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid {0}")]
    Invalid(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("quotient is not well defined: {0}")]
    NotWellDefined(String),
    #[error("operation `{symbol}` is not continuous: preimage of {open} is not open")]
    Discontinuous { symbol: String, open: String },
}

pub type Result<T> = std::result::Result<T, Error>;

/// `base^exp` saturating at `u128::MAX`.
pub(crate) fn search_size(base: usize, exp: usize) -> u128 {
    (base as u128)
        .checked_pow(exp as u32)
        .unwrap_or(u128::MAX)
}
