use crate::error::{Error, Result};
use crate::families::FsGenerators;
use crate::subshift::PointPrefix;

use super::{run_lengths, Stop};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RapidIp {
    pub gens: FsGenerators,
    pub requested: usize,
    pub stop: Option<Stop>,
}

/// Superincreasing generators whose finite sums and their differences all
/// lie in `F`.
///
/// With `S_j = p_1 + ... + p_j`, `p_{j+1}` is the least `c > S_j` such that
/// `[c - S_j, c + S_j] ⊆ F`. Every new sum and every difference whose
/// largest generator is `p_{j+1}` then lands in that interval.
pub fn rapid_ip(f: &PointPrefix, depth: usize) -> Result<RapidIp> {
    if depth == 0 {
        return Err(Error::OutOfRange {
            what: "depth",
            value: 0,
            bound: 1,
        });
    }
    let h = f.horizon();
    let runs = run_lengths(f.symbols());
    let mut gens: Vec<u64> = Vec::with_capacity(depth);
    let mut total = 0usize;
    let mut stop = None;
    for j in 0..depth {
        let c = (total + 1..h.saturating_sub(total)).find(|&c| runs[c - total] > 2 * total);
        match c {
            Some(c) => {
                gens.push(c as u64);
                total += c;
            }
            None if j == 0 => {
                return Err(Error::WindowExhausted {
                    stage: 1,
                    reason: "the set has no positive element".into(),
                })
            }
            None => {
                stop = Some(Stop {
                    stage: j + 1,
                    reason: format!("no run of length {} centred above {total}", 2 * total + 1),
                });
                break;
            }
        }
    }
    Ok(RapidIp {
        gens: FsGenerators::superincreasing(gens)?,
        requested: depth,
        stop,
    })
}
