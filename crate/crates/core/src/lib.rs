//! Exact local search for Proportional Approval Voting.
//!
//! * [`election`]: profiles, committees, exact scores and incremental Δ.
//! * [`search`]: ε-local search under lexicographic better response, best
//!   response or a scripted sequence.
//! * [`constructions`]: instance families on which local search needs many
//!   improving swaps, with their certified sequences.
//! * [`samplers`], [`io`], [`harness`]: synthetic data, file formats and
//!   experiments.
//! * [`oracle`]: brute-force checks for small instances.

pub mod constructions;
pub mod election;
pub mod error;
pub mod harness;
pub mod io;
pub mod oracle;
pub mod samplers;
pub mod search;

pub use election::{Committee, Election, Epsilon, Profile, Rational, Swap, SwapSequence};
pub use error::{Error, Result};
