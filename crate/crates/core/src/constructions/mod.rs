//! Constructive procedures: IP extraction, a finite Hindman search, the md-
//! and sm-point constructions, rapid IP sets and the entropy-bound audit.
//!
//! Every choice is greedy-minimal, so identical inputs give identical
//! traces. Constructions that outgrow the window stop at the deepest
//! completed stage and say why in [`Stop`].

mod ip;
mod md;
mod rapid;
mod sm;

use std::fmt;

pub use crate::families::FsGenerators;
pub use ip::{extract_ip, hindman_search, hindman_search_with, ip_violations};
pub use md::{entropy_bound_check, md_point, validate_md, EntropyRow, MdStage, MdTrace};
pub use rapid::{rapid_ip, RapidIp};
pub use sm::{minimality_rows, sm_point, validate_sm, GapRow, SmFill, SmStage, SmTrace};

/// Why a staged construction stopped early.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stop {
    /// The stage that could not be built.
    pub stage: usize,
    pub reason: String,
}

impl fmt::Display for Stop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage {}: {}", self.stage, self.reason)
    }
}

/// A trace that does not replay to the recorded output.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("stage {stage}: {reason}")]
pub struct TraceError {
    pub stage: usize,
    pub reason: String,
}

fn trace_err(stage: usize, reason: impl Into<String>) -> TraceError {
    TraceError {
        stage,
        reason: reason.into(),
    }
}

/// `runs[p]` = number of consecutive `1`s starting at `p`.
fn run_lengths(symbols: &[u8]) -> Vec<usize> {
    let mut runs = vec![0; symbols.len() + 1];
    for p in (0..symbols.len()).rev() {
        if symbols[p] == 1 {
            runs[p] = runs[p + 1] + 1;
        }
    }
    runs.pop();
    runs
}
