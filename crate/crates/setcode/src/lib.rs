//! Error-correcting codes over sets of sequences.
//!
//! A set-code stores data as an unordered set of `M` distinct length-`L`
//! sequences over an alphabet of size `q`. The channel may drop up to `s`
//! sequences and corrupt up to `t` of the survivors, each by at most `eps`
//! errors of one kind: substitutions, deletions, general edits, or
//! limited-magnitude integer perturbations.
//!
//! The crate provides the shared vocabulary ([`seq`]), an exhaustive channel
//! oracle ([`channel`]), the classical block-code primitives the codecs
//! consume ([`algebra`], [`delhash`]), the codec families themselves
//! ([`bullet`], [`concat`], [`noloss`], [`lm`]), and exact evaluation of the
//! associated size bounds ([`bounds`]).
//!
//! The crate is `no_std` (allocation required); IO, file formats and the CLI
//! live in the companion `setcode-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

use alloc::string::String;

pub mod algebra;
pub mod arith;
pub mod bits;
pub mod bounds;
pub mod bullet;
pub mod channel;
pub mod concat;
pub mod delhash;
pub mod io;
pub mod lm;
pub mod noloss;
pub mod seq;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Parameters violate a construction invariant; the message names it.
    InvalidParams(String),
    /// A message component is outside its admissible range.
    OutOfRange(String),
    /// An enumeration would exceed the caller-supplied budget.
    BudgetExceeded { needed: u128, budget: u128 },
    /// Decoding failed; the received set is outside the declared channel model.
    DecodeFailure(&'static str),
    /// Malformed textual or binary input.
    Parse(String),
}

impl core::fmt::Display for Error {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Error::InvalidParams(m) => write!(f, "invalid parameters: {m}"),
            Error::OutOfRange(m) => write!(f, "out of range: {m}"),
            Error::BudgetExceeded { needed, budget } => {
                write!(f, "enumeration budget exceeded: need {needed}, budget {budget}")
            }
            Error::DecodeFailure(m) => write!(f, "decode failure: {m}"),
            Error::Parse(m) => write!(f, "parse error: {m}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
