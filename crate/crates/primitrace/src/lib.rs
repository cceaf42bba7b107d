//! Exact tooling for primitive elements of finite fields with prescribed
//! relative traces in intermediate extensions.
//!
//! The crate provides, bottom up:
//!
//! - [`numtheory`]: budgeted integer factorization and the explicit
//!   constants and bounds used by the existence criteria;
//! - [`gfield`]: polynomial-basis field contexts GF(p^m) with frobenius,
//!   relative traces, subfield enumeration, and primitivity tests;
//! - [`tracelab`]: divisor tuples, the lambda invariant, admissibility of
//!   trace targets, and exhaustive fiber counting;
//! - [`existence`]: the inequality-based and case-based existence checkers
//!   plus the bundled verification suites;
//! - [`charsum`]: multiplicative/additive characters, Gauss sums, and the
//!   character-sum counting formula that cross-checks the exhaustive counts;
//! - [`cli`]: the `primitrace` command-line front end.
//!
//! Everything is deterministic: randomized subroutines (rho splitting,
//! large-integer primality rounds) derive their seeds from their inputs.

pub mod charsum;
pub mod cli;
pub mod error;
pub mod existence;
pub mod gfield;
pub mod numtheory;
pub mod tracelab;

pub use error::{Error, Result};
