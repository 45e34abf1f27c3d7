use alloc::string::String;

/// Failures surfaced by the core library. Verdict-style answers (such as a
/// lattice failing a condition) are values, not errors.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not a CM field: {0}")]
    NotCm(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("glue failure at p = {p}: {reason}")]
    GlueFailure { p: u64, reason: String },
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("not realizable: {0}")]
    NotRealizable(String),
}

pub type Result<T> = core::result::Result<T, Error>;

#[macro_export]
#[doc(hidden)]
macro_rules! invalid {
    ($($t:tt)*) => { $crate::error::Error::InvalidInput(alloc::format!($($t)*)) };
}
