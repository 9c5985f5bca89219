use alloc::string::String;
use core::fmt;

use crate::identity::{Flavor, Violation};

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A structure failed validation.
    Invalid(Violation),
    /// A brute-force cost guard was exceeded. These are never downgraded to
    /// warnings: exhaustive searches either run to completion or refuse.
    SizeGuard {
        what: &'static str,
        limit: usize,
        got: usize,
    },
    /// The operation is not defined for this flavor of identity.
    Flavor {
        op: &'static str,
        found: Flavor,
    },
    /// A permutation or map acts on a ground set of the wrong size.
    SizeMismatch { expected: usize, found: usize },
    /// A map that should be a bijection or injection is not.
    NotInjective,
    /// A numeric parameter is out of its domain (for example `k = 0`).
    Parameter { name: &'static str, reason: &'static str },
    /// A partial identity lacks some pair that the operation needs.
    MissingPair { pair: [usize; 2] },
    /// A derived relation failed to be an equivalence relation.
    NotEquivalence { size: usize, detail: String },
    /// A criterion verdict failed independent re-verification.
    Verification(String),
    /// A coloring or labeling is malformed.
    Coloring(String),
    /// An identity uses subsets the coloring does not color.
    Arity { needed: usize, available: usize },
    /// Replaying a catalog provenance trace did not reproduce the entry.
    Replay(String),
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::Invalid(v)
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Invalid(v) => write!(f, "invalid identity: {v}"),
            Error::SizeGuard { what, limit, got } => {
                write!(f, "size guard exceeded for {what}: {got} > {limit}")
            }
            Error::Flavor { op, found } => {
                write!(f, "{op} is not defined for {found} identities")
            }
            Error::SizeMismatch { expected, found } => {
                write!(f, "size mismatch: expected {expected}, found {found}")
            }
            Error::NotInjective => f.write_str("map is not injective"),
            Error::Parameter { name, reason } => write!(f, "bad parameter {name}: {reason}"),
            Error::MissingPair { pair } => {
                write!(f, "pair {{{},{}}} is outside the domain", pair[0], pair[1])
            }
            Error::NotEquivalence { size, detail } => {
                write!(f, "derived relation on {size}-subsets is not an equivalence: {detail}")
            }
            Error::Verification(msg) => write!(f, "verdict re-verification failed: {msg}"),
            Error::Coloring(msg) => write!(f, "bad coloring: {msg}"),
            Error::Arity { needed, available } => write!(
                f,
                "identity needs colors on {needed}-subsets but the coloring has arity {available}"
            ),
            Error::Replay(msg) => write!(f, "provenance replay failed: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
