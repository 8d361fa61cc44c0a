//! Exact engine for the correspondence between families of continuous
//! functions and hereditary families of closed sets.
//!
//! Everything is computed over a decidable fragment: piecewise-linear
//! functions with rational breakpoints on a bounded closed interval, finite
//! unions of rational intervals and points as sets, and finite grids as
//! small universes for exhaustive checking. All arithmetic is
//! arbitrary-precision rational; there is no floating point and no
//! approximation anywhere.
//!
//! The crate is `no_std` (with `alloc`) so the engine can be embedded; the
//! companion CLI crate supplies IO, parsing, and serialization.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod error;
pub mod rat;
pub mod pl;
pub mod realset;
pub mod valueset;
pub mod dense;
pub mod hfam;
pub mod family;
pub mod constructions;
pub mod galois;
pub mod oracle;

pub use error::{Error, Result};
pub use pl::{CombineOp, Domain, ExtBound, PLFunc, SignSets};
pub use rat::Rat;
pub use realset::{family_separated, Component, RealSet, SetClass};
pub use valueset::{VComp, VEnd, ValueSet};
pub use dense::{DenseSet, DenseTagging, TagRule};
pub use hfam::{Downset, Grid, HFam, Universe};
pub use family::{FamilyDesc, FamilyPredicates, RelationChecks, Slice, SyntheticLeast};
pub use constructions::{BijectionConstraint, IncrBijection};
pub use galois::Lattice;
pub use oracle::{BruteClosure, OracleVerdict, ValueLattice};
