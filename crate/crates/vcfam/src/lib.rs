//! Exact computations on families of subsets of `[n] = {1, …, n}`.
//!
//! The crate provides:
//!
//! * ground types for subsets (fixed-width bitmasks) and deduplicated set
//!   families, together with traces, shattering, VC dimension and k-fold
//!   closures under `∩`, `∪` and `△` ([`family`]);
//! * compression and shifting operators with their fixpoints ([`normalize`]);
//! * generators for the named extremal families and counterexample
//!   constructions ([`construct`]);
//! * exact big-integer evaluators for the closed-form bounds and threshold
//!   estimates ([`formula`]);
//! * exhaustive and branch-and-bound search engines producing extremal
//!   values with witness families and uniqueness certificates ([`search`]);
//! * seeded verification suites for the structural lemmas ([`verify`]);
//! * the text file format and machine-readable run reports used by the
//!   `vcfam` command-line tool ([`files`], [`report`]).
//!
//! All family values are immutable after construction, so any operation may
//! run concurrently on shared data.

pub mod construct;
pub mod error;
pub mod family;
pub mod files;
pub mod formula;
pub mod normalize;
pub mod report;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
pub use family::{kfold_multi, Element, GroundSet, Permutation, SetFamily, SetOp, SubsetMask};
