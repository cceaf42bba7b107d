//! Crate-wide error type and result alias.

use num_bigint::BigUint;
use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the library.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// A computation hit its configured resource budget.
    #[error("resource limit exceeded while {what}{}", partial_suffix(.partial))]
    ResourceLimit {
        what: String,
        /// Partial progress (e.g. the factors found so far), for diagnostics.
        partial: Option<String>,
    },

    /// An argument that must be prime was not.
    #[error("{0} is not prime")]
    NotPrime(BigUint),

    /// An argument that must be a prime power was not.
    #[error("{0} is not a prime power")]
    NotPrimePower(BigUint),

    /// A tuple entry must be a proper divisor of the extension degree.
    #[error("entry {entry} is not a divisor d of n = {n} with 1 < d < n")]
    NonDivisorEntry { entry: u64, n: u64 },

    /// Two tuple entries violate the antichain (mutual non-divisibility) rule.
    #[error("entries {a} and {b} are not divisibility-incomparable ({a} divides {b})")]
    EntryDivides { a: u64, b: u64 },

    /// The tuple length is outside the admissible range.
    #[error("tuple length {k} out of range for n = {n} (need 2 <= k, and k < number of divisors of n minus 1)")]
    TupleLength { k: usize, n: u64 },

    /// A prescribed trace target is not in the required subfield.
    #[error("target at position {index} does not lie in the degree-{d} subfield")]
    TargetOutsideSubfield { index: usize, d: u64 },

    /// A degree that must divide n did not.
    #[error("{d} does not divide the extension degree {n}")]
    NotADivisor { d: u64, n: u64 },

    /// Field division by zero.
    #[error("division by zero in the field")]
    DivisionByZero,

    /// A numeric-domain violation (e.g. log-log bound below its domain).
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed input (CLI arguments, encodings, coefficient vectors, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

fn partial_suffix(partial: &Option<String>) -> String {
    match partial {
        Some(s) => format!(" (partial: {s})"),
        None => String::new(),
    }
}
