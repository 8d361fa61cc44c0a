//! Crate-wide error type.
//!
//! Every fallible operation returns [`Error`]; preconditions are rejected
//! eagerly with a message naming the offending value, never patched up
//! silently.

use alloc::string::String;
use core::fmt;

/// Errors raised by the exact engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A domain with `lo >= hi` or otherwise malformed.
    InvalidDomain(String),
    /// Breakpoint lists that are too short, unsorted, or duplicated.
    InvalidBreakpoints(String),
    /// An evaluation or construction point lies outside the domain.
    OutsideDomain(String),
    /// Two objects over different domains were combined.
    DomainMismatch(String),
    /// A malformed set (components out of order, outside the domain, ...).
    InvalidSet(String),
    /// An operation required a closed set and got a non-closed one.
    NotClosed(String),
    /// An operation required a regular open set.
    NotRegularOpen(String),
    /// An open band with `lo < hi` violated somewhere (the band is empty).
    EmptyBand(String),
    /// An order interval with `lo <= hi` violated somewhere.
    EmptyInterval(String),
    /// A sliced union whose slices are not strictly stacked, or a slice
    /// system whose tightened bands are empty.
    NotSliced(String),
    /// Parts of a separated union that are not pairwise separated.
    NotSeparated(String),
    /// A malformed grid (unsorted, duplicate, outside domain, too large).
    InvalidGrid(String),
    /// A construction constraint that violates its preconditions.
    InvalidConstraint(String),
    /// A dense tagging whose sets are not disjoint dense rational rules.
    InvalidTagging(String),
    /// A named precondition predicate failed for an operation.
    PredicateFailed {
        op: &'static str,
        predicate: &'static str,
    },
    /// The operation is not defined for this variant/universe combination.
    Unsupported {
        op: &'static str,
        detail: String,
    },
    /// An enumeration would exceed the given budget.
    Budget {
        op: &'static str,
        needed: u128,
        budget: u128,
    },
    /// An internal consistency check failed (a bug, not a usage error).
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDomain(m) => write!(f, "invalid domain: {m}"),
            Error::InvalidBreakpoints(m) => write!(f, "invalid breakpoints: {m}"),
            Error::OutsideDomain(m) => write!(f, "outside domain: {m}"),
            Error::DomainMismatch(m) => write!(f, "domain mismatch: {m}"),
            Error::InvalidSet(m) => write!(f, "invalid set: {m}"),
            Error::NotClosed(m) => write!(f, "set is not closed: {m}"),
            Error::NotRegularOpen(m) => write!(f, "set is not regular open: {m}"),
            Error::EmptyBand(m) => write!(f, "empty band: {m}"),
            Error::EmptyInterval(m) => write!(f, "empty order interval: {m}"),
            Error::NotSliced(m) => write!(f, "not a sliced system: {m}"),
            Error::NotSeparated(m) => write!(f, "not separated: {m}"),
            Error::InvalidGrid(m) => write!(f, "invalid grid: {m}"),
            Error::InvalidConstraint(m) => write!(f, "invalid constraint: {m}"),
            Error::InvalidTagging(m) => write!(f, "invalid dense tagging: {m}"),
            Error::PredicateFailed { op, predicate } => {
                write!(f, "{op}: precondition `{predicate}` failed")
            }
            Error::Unsupported { op, detail } => write!(f, "{op}: unsupported: {detail}"),
            Error::Budget { op, needed, budget } => {
                write!(f, "{op}: budget exceeded (needs {needed}, budget {budget})")
            }
            Error::Internal(m) => write!(f, "internal invariant violated: {m}"),
        }
    }
}

impl core::error::Error for Error {}

/// Convenient alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
