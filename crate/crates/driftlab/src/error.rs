use thiserror::Error;

use crate::counting::CaseTag;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("base must be at least 2, got {0}")]
    InvalidBase(u64),

    #[error("modulus must be at least {min}, got {got}")]
    InvalidModulus { min: u64, got: u64 },

    #[error("residue {residue} out of range [0, {modulus})")]
    ResidueOutOfRange { residue: u64, modulus: u64 },

    #[error("{what} of {requested} exceeds the budget of {limit}")]
    BudgetExceeded {
        what: &'static str,
        requested: String,
        limit: u64,
    },

    #[error("precision exhausted at {bits} bits: {context}")]
    PrecisionExhausted { bits: u32, context: String },

    #[error("operation requires {required}, but (q={q}, d={d}, m={m}) classifies as {actual}")]
    WrongCase {
        required: &'static str,
        actual: CaseTag,
        q: u64,
        d: u64,
        m: u64,
    },

    #[error("witness search exhausted: {0}")]
    SearchExhausted(String),

    #[error("certificate contradiction: {0}")]
    Contradiction(String),

    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
