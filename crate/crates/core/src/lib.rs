//! Finite-horizon combinatorics of recurrence for binary subshifts.
//!
//! Every asymptotic notion (syndetic, thick, piecewise syndetic, IP, ...) is
//! replaced by a statement about a window `[0, H)` that can be re-checked by
//! exhaustive scan. The crate is organised around five areas:
//!
//! * [`families`]: window sets, family detectors and their certificates.
//! * [`subshift`]: binary words, return-time sets, block complexity.
//! * [`constructions`]: IP extraction, finite Hindman search, the md- and
//!   sm-point constructions, rapid IP sets and the entropy-bound audit.
//! * [`product`]: joint return times and the counterexample demos.
//! * [`independence`]: independence-set checking and the syndetic probe.
//!
//! The heavy scans run on rayon when the `parallel` feature is enabled and
//! fall back to plain loops otherwise; see [`exec`].

pub mod bits;
pub mod constructions;
pub mod error;
pub mod exec;
pub mod families;
pub mod independence;
pub mod product;
pub mod subshift;
pub mod text;

pub use error::{Error, Result};
pub use exec::Execution;
pub use families::{FamilyCertificate, WindowSet};
pub use subshift::{PointPrefix, Word};

/// Default global cap on enumeration sizes (patterns, candidate sets,
/// Hindman assignments).
pub const DEFAULT_BUDGET: u64 = 1 << 24;
